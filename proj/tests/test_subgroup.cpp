#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "homtest/errors.hpp"
#include "homtest/subgroup.hpp"

using namespace homtest;

namespace {

std::vector<GroupElement> draw(const Group& g, std::size_t k, Rng& rng) {
  std::vector<GroupElement> v(k);
  for (auto& x : v) x = g.sample(rng);
  return v;
}

}  // namespace

TEST_SUITE("subgroup") {
  TEST_CASE("closures of small generating sets") {
    GroupPtr z6 = Group::parse("Z6");
    std::vector<GroupElement> s = {z6->parse_element("2")};
    auto h = generated_subgroup(*z6, s);
    REQUIRE(h.size() == 3);
    CHECK(z6->format(h[0]) == "0");
    CHECK(z6->format(h[1]) == "2");
    CHECK(z6->format(h[2]) == "4");
    GroupPtr s3 = Group::parse("S3");
    std::vector<GroupElement> t = {s3->parse_element("[1,0,2]")};
    CHECK(generated_subgroup(*s3, t).size() == 2);
    t.push_back(s3->parse_element("[1,2,0]"));
    CHECK(generated_subgroup(*s3, t).size() == 6);
    CHECK(generates(*s3, t));
    CHECK(generated_subgroup(*s3, {}).size() == 1);
  }

  TEST_CASE("rank test agrees with closure on vector spaces") {
    Rng rng(31);
    for (const char* spec : {"F2^8", "F3^4", "F5^3", "F2^12", "F7^2"}) {
      GroupPtr g = Group::parse(spec);
      for (int trial = 0; trial < 60; ++trial) {
        auto s = draw(*g, 1 + rng.below(g->dimension() + 2), rng);
        const auto closure = generated_subgroup(*g, s);
        std::uint64_t expect = 1;
        for (std::uint32_t i = 0; i < rank(*g, s); ++i) expect *= g->prime();
        CHECK(closure.size() == expect);
        CHECK(generates(*g, s) == generates_by_closure(*g, s));
      }
    }
  }

  TEST_CASE("partial sums match subset enumeration") {
    Rng rng(32);
    for (const char* spec : {"Z12", "S4", "F3^3", "D5"}) {
      GroupPtr g = Group::parse(spec);
      for (int trial = 0; trial < 20; ++trial) {
        auto s = draw(*g, 1 + rng.below(6), rng);
        std::set<std::uint64_t> expect;
        for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
          GroupElement acc = g->identity();
          for (std::size_t i = 0; i < s.size(); ++i) {
            if (mask >> i & 1) acc = g->op(acc, s[i]);
          }
          expect.insert(g->index_of(acc));
        }
        const auto got = partial_sums(*g, s);
        std::vector<std::uint64_t> idx;
        for (const auto& x : got) idx.push_back(g->index_of(x));
        CHECK(idx == std::vector<std::uint64_t>(expect.begin(), expect.end()));
      }
    }
    GroupPtr z = Group::parse("Z7");
    std::vector<GroupElement> many(25, z->parse_element("1"));
    CHECK_THROWS_AS(partial_sums(*z, many), ResourceError);
  }

  TEST_CASE("closed-form E for vector spaces and prime cyclic groups") {
    CHECK(*exact_E(*Group::parse("Z2")) == doctest::Approx(2.0));
    CHECK(*exact_E(*Group::parse("Z3")) == doctest::Approx(1.5));
    CHECK(*exact_E(*Group::parse("Z5")) == doctest::Approx(1.25));
    CHECK(*exact_E(*Group::parse("F2^2")) == doctest::Approx(4.0 / 3.0 + 2.0));
    CHECK_FALSE(exact_E(*Group::parse("S5")).has_value());
    CHECK_FALSE(exact_E(*Group::parse("Z6")).has_value());
  }

  TEST_CASE("Monte-Carlo E agrees with the closed form") {
    Rng rng(33);
    for (const char* spec : {"Z5", "F2^4", "F3^3"}) {
      GroupPtr g = Group::parse(spec);
      const GeneratorStats st = estimate_E(*g, 20000, rng, {0.5, 1.0 / 12});
      CHECK(std::abs(st.e_estimate - *exact_E(*g)) <= 4 * st.e_standard_error);
      CHECK(st.d_beta_estimates.at(1.0 / 12) >= st.d_beta_estimates.at(0.5));
    }
  }

  TEST_CASE("E of S5 by simulation is reproducible") {
    Rng a(34), b(34);
    const auto x = estimate_E(*Group::parse("S5"), 2000, a);
    const auto y = estimate_E(*Group::parse("S5"), 2000, b);
    CHECK(x.e_estimate == y.e_estimate);
    CHECK(x.e_estimate > 2.0);
    CHECK(x.e_estimate < 4.0);
  }

  TEST_CASE("span basis coordinates and canonical enumeration") {
    Rng rng(35);
    for (const char* spec : {"F2^10", "F3^5", "F5^4", "F2^70"}) {
      GroupPtr g = Group::parse(spec);
      SpanBasis b(*g);
      auto s = draw(*g, 3, rng);
      for (const auto& x : s) b.insert(x);
      for (const auto& x : s) {
        auto c = b.coordinates(x);
        REQUIRE(c.has_value());
        CHECK(b.combine(*c) == x);
      }
      if (!g->order_fits()) continue;
      // Coefficient vectors in base-p counting order give increasing canonical indices.
      std::vector<std::uint32_t> coeff(b.rank(), 0);
      std::uint64_t last = 0;
      bool first = true, done = b.rank() == 0;
      while (!done) {
        const std::uint64_t idx = g->index_of(b.combine(coeff));
        if (!first) CHECK(idx > last);
        first = false;
        last = idx;
        std::size_t i = 0;
        while (i < coeff.size() && ++coeff[i] == g->prime()) coeff[i++] = 0;
        done = i == coeff.size();
      }
    }
    GroupPtr g = Group::parse("F3^4");
    SpanBasis b(*g);
    for (std::uint32_t i = 0; i < 4; ++i) CHECK(b.insert(g->unit_vector(i)));
    CHECK_FALSE(b.insert(g->parse_element("(1,2,0,1)")));
    CHECK(b.rank() == 4);
  }
}
