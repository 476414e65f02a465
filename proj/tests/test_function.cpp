#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "homtest/errors.hpp"
#include "homtest/function.hpp"

using namespace homtest;

namespace {

// Brute force over every table G -> H; only for |H|^|G| small.
std::uint64_t count_homs_brute(const GroupPtr& g, const GroupPtr& h) {
  const std::uint64_t n = g->order(), m = h->order();
  std::vector<std::uint64_t> digits(n, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (std::uint64_t a = 0; a < n && ok; ++a) {
      for (std::uint64_t b = 0; b < n && ok; ++b) {
        const auto ab = g->index_of(g->op(g->element_at(a), g->element_at(b)));
        ok = h->index_of(h->op(h->element_at(digits[a]), h->element_at(digits[b]))) == digits[ab];
      }
    }
    count += ok;
    std::size_t i = 0;
    while (i < n && ++digits[i] == m) digits[i++] = 0;
    if (i == n) break;
  }
  return count;
}

FunctionTable random_function(const GroupPtr& g, const GroupPtr& h, Rng& rng) {
  std::vector<GroupElement> v(g->order());
  for (auto& x : v) x = h->sample(rng);
  return FunctionTable::dense(g, h, std::move(v));
}

// Minimum over all brute-force homomorphisms of the disagreement count.
Rational brute_distance(const FunctionTable& f) {
  const auto& g = f.domain();
  const auto& h = f.codomain();
  const std::uint64_t n = g->order(), m = h->order();
  std::vector<std::uint64_t> digits(n, 0);
  std::uint64_t best = n;
  while (true) {
    bool ok = true;
    for (std::uint64_t a = 0; a < n && ok; ++a) {
      for (std::uint64_t b = 0; b < n && ok; ++b) {
        const auto ab = g->index_of(g->op(g->element_at(a), g->element_at(b)));
        ok = h->index_of(h->op(h->element_at(digits[a]), h->element_at(digits[b]))) == digits[ab];
      }
    }
    if (ok) {
      std::uint64_t d = 0;
      for (std::uint64_t a = 0; a < n; ++a) d += h->index_of(f.value_at(a)) != digits[a];
      best = std::min(best, d);
    }
    std::size_t i = 0;
    while (i < n && ++digits[i] == m) digits[i++] = 0;
    if (i == n) break;
  }
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(n));
}

}  // namespace

TEST_SUITE("function") {
  TEST_CASE("hom counts against brute force") {
    const std::pair<const char*, const char*> pairs[] = {
        {"Z4", "Z2"}, {"Z6", "Z4"}, {"Z2xZ2", "Z2"}, {"S3", "Z2"}, {"Z3", "S3"}, {"Z4", "S3"}, {"D3", "Z2"}, {"Z2", "D3"}};
    for (auto [a, b] : pairs) {
      GroupPtr g = Group::parse(a), h = Group::parse(b);
      CAPTURE(a);
      CAPTURE(b);
      const auto homs = enumerate_homomorphisms(g, h);
      CHECK(homs.size() == count_homs_brute(g, h));
      for (const auto& x : homs) CHECK(is_homomorphism(x.to_function()));
    }
  }

  TEST_CASE("hom counts from closed forms") {
    for (std::uint32_t m = 1; m <= 12; ++m) {
      for (std::uint32_t n = 1; n <= 12; ++n) {
        auto homs = enumerate_homomorphisms(Group::cyclic(m), Group::cyclic(n));
        CHECK(homs.size() == std::gcd(m, n));
      }
    }
    CHECK(enumerate_homomorphisms(Group::parse("S4"), Group::parse("Z2")).size() == 2);
    CHECK(enumerate_homomorphisms(Group::parse("D4"), Group::parse("Z2")).size() == 4);
    CHECK(enumerate_homomorphisms(Group::parse("F3^2"), Group::parse("F3")).size() == 9);
    CHECK(enumerate_homomorphisms(Group::parse("F2^3"), Group::parse("F2^2")).size() == 64);
    CHECK_THROWS_AS(enumerate_homomorphisms(Group::parse("F2^8"), Group::parse("F2^8"), 1000), ResourceError);
  }

  TEST_CASE("distance to hom against brute force") {
    Rng rng(41);
    const std::pair<const char*, const char*> pairs[] = {{"Z4", "Z2"}, {"S3", "Z2"}, {"Z2xZ2xZ2", "Z2"}, {"Z3", "Z3"}};
    for (auto [a, b] : pairs) {
      GroupPtr g = Group::parse(a), h = Group::parse(b);
      for (int t = 0; t < 10; ++t) {
        FunctionTable f = random_function(g, h, rng);
        const auto r = distance_to_hom(f);
        CHECK(r.distance == brute_distance(f));
        CHECK(distance(f, r.nearest.to_function()) == r.distance);
      }
    }
  }

  TEST_CASE("transform route agrees with enumeration") {
    Rng rng(42);
    for (const char* cod : {"Z2", "Z4", "Z6", "F2"}) {
      for (std::uint32_t n = 1; n <= 7; ++n) {
        GroupPtr g = Group::vector_space(2, n);
        GroupPtr h = Group::parse(cod);
        for (int t = 0; t < 4; ++t) {
          FunctionTable f = random_function(g, h, rng);
          const auto fast = distance_to_hom_by_transform(f);
          REQUIRE(fast.has_value());
          const auto slow = distance_to_hom_by_enumeration(f);
          CHECK(fast->distance == slow.distance);
          CHECK(distance(f, fast->nearest.to_function()) == fast->distance);
          CHECK(is_homomorphism(fast->nearest.to_function()));
        }
      }
    }
    FunctionTable f = random_function(Group::parse("F2^3"), Group::parse("F2^2"), rng);
    CHECK_FALSE(distance_to_hom_by_transform(f).has_value());
  }

  TEST_CASE("table validation") {
    GroupPtr g = Group::parse("Z4"), h = Group::parse("Z2");
    std::vector<GroupElement> good = {h->parse_element("0"), h->parse_element("1"), h->parse_element("0"),
                                      h->parse_element("1")};
    CHECK_NOTHROW(Homomorphism::from_table(g, h, good));
    auto bad = good;
    bad[1] = h->parse_element("0");
    CHECK_THROWS_AS(Homomorphism::from_table(g, h, bad), DomainError);
    GroupPtr f3 = Group::parse("F3^2");
    CHECK_THROWS_AS(Homomorphism::from_basis_images(f3, Group::parse("Z6"),
                                                    {Group::parse("Z6")->parse_element("1"),
                                                     Group::parse("Z6")->parse_element("0")}),
                    DomainError);
    CHECK_THROWS(FunctionTable::dense(g, h, {h->identity()}));
  }

  TEST_CASE("basis images agree with the dense table") {
    Rng rng(43);
    GroupPtr g = Group::parse("F3^4"), h = Group::parse("Z6xZ6");
    for (int t = 0; t < 5; ++t) {
      Homomorphism hom = random_homomorphism(g, h, rng);
      FunctionTable f = hom.to_function();
      CHECK(is_homomorphism(f));
      for (std::uint64_t i = 0; i < g->order(); ++i) CHECK(f.value_at(i) == hom(g->element_at(i)));
    }
  }

  TEST_CASE("binary round trip") {
    Rng rng(44);
    for (auto [a, b] : {std::pair{"S4", "Z6"}, std::pair{"F2^6", "D5"}, std::pair{"Z5", "Z5"}}) {
      FunctionTable f = random_function(Group::parse(a), Group::parse(b), rng);
      std::stringstream ss;
      f.write_binary(ss);
      FunctionTable g = FunctionTable::read_binary(ss);
      CHECK(g.domain()->to_string() == f.domain()->to_string());
      CHECK(g.codomain()->to_string() == f.codomain()->to_string());
      CHECK(g.values() == f.values());
    }
    std::stringstream junk("not a table");
    CHECK_THROWS(FunctionTable::read_binary(junk));
  }

  TEST_CASE("instances carry their distances") {
    Rng rng(45);
    GroupPtr g = Group::parse("F2^6"), h = Group::parse("Z2");
    InstanceSpec spec;
    FunctionTable hom = gen_instance(spec, g, h, rng);
    CHECK(is_homomorphism(hom));
    CHECK(*hom.certified_distance() == Rational(0));

    spec.kind = InstanceKind::PlantedFar;
    spec.epsilon = Rational(1, 8);
    FunctionTable far = gen_instance(spec, g, h, rng);
    CHECK(*far.certified_distance() == distance_to_hom(far).distance);
    CHECK(*far.certified_distance() <= Rational(1, 8));

    spec.kind = InstanceKind::ShiftedHom;
    FunctionTable sh = gen_instance(spec, Group::parse("Z5"), Group::parse("Z5"), rng);
    CHECK(distance_to_hom(sh).distance == Rational(4, 5));

    spec.kind = InstanceKind::ImplicitPlanted;
    spec.key = 9;
    FunctionTable imp = gen_instance(spec, Group::parse("F2^40"), h, rng);
    CHECK_FALSE(imp.is_dense());
    const double rate = estimate_disagreement(imp, *imp.base(), 40000, rng);
    CHECK(std::abs(rate - 0.125) < 4 * std::sqrt(0.125 * 0.875 / 40000));
    const GroupElement x = imp.domain()->sample(rng);
    CHECK(imp.eval(x) == imp.eval(x));

    for (auto k : {InstanceKind::RandomHom, InstanceKind::ShiftedHom, InstanceKind::RandomFunction,
                   InstanceKind::PlantedFar, InstanceKind::ImplicitPlanted}) {
      CHECK(parse_instance_kind(instance_kind_name(k)) == k);
    }
  }
}
