#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "homtest/analysis.hpp"
#include "homtest/errors.hpp"

using namespace homtest;

namespace {

FunctionTable random_function(const GroupPtr& g, const GroupPtr& h, Rng& rng) {
  std::vector<GroupElement> v(g->order());
  for (auto& x : v) x = h->sample(rng);
  return FunctionTable::dense(g, h, std::move(v));
}

// Calls fn on every signed tuple of length k over g.
template <class Fn>
void for_each_tuple(const Group& g, std::uint32_t k, Fn fn) {
  const std::uint64_t base = 2 * g.order();
  std::vector<std::uint64_t> d(k, 0);
  while (true) {
    SignedTuple t;
    for (auto x : d) t.entries.push_back({x % 2 ? Sign::Minus : Sign::Plus, g.element_at(x / 2)});
    fn(t);
    std::size_t i = 0;
    while (i < k && ++d[i] == base) d[i++] = 0;
    if (i == k) return;
  }
}

std::string key(const Group& g, const SignedTuple& t) {
  std::string s;
  for (const auto& e : t.entries) s += format_multiplier(e.mult) + g.format(e.element) + " ";
  return s;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("signed sum counts against enumeration") {
    for (const char* spec : {"Z5", "S3", "D4"}) {
      GroupPtr g = Group::parse(spec);
      for (std::uint32_t k = 1; k <= 3; ++k) {
        std::vector<std::uint64_t> brute(g->order(), 0);
        for_each_tuple(*g, k, [&](const SignedTuple& t) { ++brute[g->index_of(signed_sum(*g, t))]; });
        CHECK(signed_sum_counts(*g, k) == brute);
      }
    }
  }

  TEST_CASE("exact rejection probability against enumeration") {
    Rng rng(81);
    for (auto [a, b] : {std::pair{"Z4", "Z3"}, std::pair{"S3", "Z2"}, std::pair{"Z3", "S3"}}) {
      GroupPtr g = Group::parse(a), h = Group::parse(b);
      FunctionTable f = random_function(g, h, rng);
      for (std::uint32_t k = 1; k <= 2; ++k) {
        std::int64_t bad = 0, total = 0;
        for_each_tuple(*g, 2 * k, [&](const SignedTuple& t) {
          SignedTuple image;
          for (const auto& e : t.entries) image.entries.push_back({e.mult, f.eval(e.element)});
          ++total;
          bad += !(signed_sum(*h, image) == f.eval(signed_sum(*g, t)));
        });
        CHECK(exact_rejection_probability(f, k) == Rational(bad, total));
      }
      FunctionTable hom = random_homomorphism(g, h, rng).to_function();
      CHECK(exact_rejection_probability(hom, 2) == Rational(0));
    }
    CHECK_THROWS_AS(exact_rejection_probability(random_function(Group::parse("Z64"), Group::parse("Z2"), rng), 4),
                    ResourceError);
  }

  TEST_CASE("Fix(a) samplers have the same law") {
    // Exhaustive over the choice spaces on Z4 with k2 = 2.
    GroupPtr g = Group::parse("Z4");
    for (std::uint64_t ai = 0; ai < 4; ++ai) {
      const GroupElement a = g->element_at(ai);
      std::map<std::string, std::uint64_t> plain, alt;
      std::uint64_t plain_total = 0, alt_total = 0;
      for (int s = 0; s < 4; ++s) {
        std::vector<Sign> signs = {s & 1 ? Sign::Minus : Sign::Plus, s & 2 ? Sign::Minus : Sign::Plus};
        for (std::uint64_t x = 0; x < 4; ++x) {
          SignedTuple t = fix_a_from_choices(*g, a, signs, {g->element_at(x)});
          CHECK(signed_sum(*g, t) == a);
          ++plain[key(*g, t)];
          ++plain_total;
          SignedTuple u = alternative_from_choices(*g, a, g->element_at(x), signs, {}, {});
          CHECK(signed_sum(*g, u) == a);
          ++alt[key(*g, u)];
          ++alt_total;
        }
      }
      REQUIRE(plain.size() == alt.size());
      for (const auto& [k, c] : plain) CHECK(c * alt_total == alt[k] * plain_total);
    }
  }

  TEST_CASE("Fix(a) samplers land in Fix(a) on non-abelian groups") {
    Rng rng(82);
    GroupPtr g = Group::parse("S4");
    for (int i = 0; i < 500; ++i) {
      GroupElement a = g->sample(rng);
      CHECK(signed_sum(*g, sample_fix_a(*g, a, 4, rng)) == a);
      CHECK(signed_sum(*g, sample_fix_a_alternative(*g, a, 4, rng)) == a);
    }
    CHECK_THROWS_AS(sample_fix_a_alternative(*g, g->identity(), 3, rng), DomainError);
  }

  TEST_CASE("corrector repairs a lightly corrupted homomorphism") {
    Rng rng(83);
    GroupPtr g = Group::parse("F2^5"), h = Group::parse("Z2");
    Homomorphism hom = random_homomorphism(g, h, rng);
    std::vector<GroupElement> vals = hom.to_function().values();
    vals[7] = h->op(vals[7], h->element_at(1));
    FunctionTable f = FunctionTable::dense(g, h, vals);
    CorrectorReport r = corrector(f, 2, {}, rng);
    REQUIRE(r.g.has_value());
    CHECK(r.g_is_hom);
    CHECK(r.g->values() == hom.to_function().values());
    CHECK(r.delta == Rational(1, 32));
    CHECK(*r.mu_exact == exact_rejection_probability(f, 1));

    CorrectorReport mc = corrector(f, 2, {false, 2000}, rng);
    CHECK_FALSE(mc.exact);
    CHECK(std::abs(mc.mu - r.mu) <= 4 * mc.mu_standard_error + 1e-12);
    CHECK(corrector_json(r, *g).find("\"mu\"") != std::string::npos);
  }

  TEST_CASE("corrector of a homomorphism is itself") {
    Rng rng(84);
    GroupPtr g = Group::parse("S3"), h = Group::parse("Z2");
    FunctionTable f = random_homomorphism(g, h, rng).to_function();
    CorrectorReport r = corrector(f, 2, {}, rng);
    CHECK(r.mu == 0.0);
    CHECK(r.eta_max == 0.0);
    CHECK(r.g->values() == f.values());
  }

  TEST_CASE("agreement probabilities: sampling against convolution") {
    Rng rng(85);
    GroupPtr g = Group::parse("Z6"), h = Group::parse("Z6");
    Homomorphism hom = random_homomorphism(g, h, rng);
    std::vector<GroupElement> vals = hom.to_function().values();
    vals[1] = h->op(vals[1], h->element_at(1));
    vals[4] = h->op(vals[4], h->element_at(3));
    FunctionTable f = FunctionTable::dense(g, h, vals);
    const auto exact = agreement_probabilities_exact(f, hom, 5);
    const auto mc = agreement_probabilities(f, hom, 5, 20000, rng);
    REQUIRE(exact.size() == 5);
    CHECK(exact[0] == doctest::Approx(4.0 / 6.0));
    for (std::size_t k = 0; k < 5; ++k) {
      const double se = std::sqrt(exact[k] * (1 - exact[k]) / 20000);
      CHECK(std::abs(mc[k] - exact[k]) <= 4 * se + 1e-12);
    }
  }

  TEST_CASE("flatness probe on small spaces") {
    Rng rng(86);
    FlatnessOptions o;
    o.m = 4;
    o.x_draws = 200;
    FlatnessReport r = flatness_probe(Group::parse("F2^16"), nullptr, o, rng);
    CHECK(r.exact_conditional);
    CHECK(r.full_support == 6);
    CHECK(r.per_X_max_mass.size() == 200);
    for (std::size_t i = 0; i < r.per_X_max_mass.size(); ++i) {
      if (!r.per_X_deficit[i]) CHECK(r.per_X_max_mass[i] == doctest::Approx(1.0 / 6.0));
    }
    CHECK(r.support_deficit_fraction < 0.05);
    CHECK(r.agreement_probabilities.empty());

    o.variant = FlatnessVariant::Coefficients;
    FlatnessReport c = flatness_probe(Group::parse("F3^8"), nullptr, o, rng);
    CHECK(c.full_support == 6 * 4);
    CHECK(c.independent_fraction > 0.5);
    CHECK(flatness_csv(c).rfind("x_draw,max_mass,deficit", 0) == 0);
  }

  TEST_CASE("linear independence: sampling, closed form and product formula") {
    Rng rng(87);
    for (auto [p, n] : {std::pair{2u, 6u}, std::pair{3u, 4u}, std::pair{5u, 3u}}) {
      const std::uint32_t r = (n + 1) / 2;
      double prod = 1.0;
      for (std::uint32_t i = 0; i < r; ++i) prod *= 1.0 - std::pow(p, static_cast<double>(i) - n);
      CHECK(linear_independence_exact(p, n) == doctest::Approx(prod));
      const double mc = linear_independence_probability(p, n, 20000, rng);
      CHECK(std::abs(mc - prod) <= 4 * std::sqrt(prod * (1 - prod) / 20000) + 1e-12);
    }
  }

  TEST_CASE("even binomial parity") {
    for (std::uint32_t n = 0; n <= 10; ++n) {
      for (Rational p : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(3, 4), Rational(1)}) {
        const Rational e = binomial_even_probability_exact(n, p);
        CHECK(e == binomial_even_by_enumeration(n, p));
        CHECK(binomial_even_probability(n, p.to_double()) == doctest::Approx(e.to_double()));
      }
    }
    CHECK(binomial_even_probability_exact(3, Rational(1, 2)) == Rational(1, 2));
  }

  TEST_CASE("zeta bounds") {
    const double z2 = std::numbers::pi * std::numbers::pi / 6;
    CHECK(zeta_upper_bound(2) == doctest::Approx(2.0));
    CHECK(z2 <= zeta_upper_bound(2));
    const double part = zeta_partial(2, 1000);
    CHECK(part < z2);
    CHECK(part + zeta_tail_bound(2, 1000) >= z2);
    for (double x : {2.5, 3.0, 4.0, 8.0}) {
      CHECK(zeta_partial(x, 100000) + zeta_tail_bound(x, 100000) <= zeta_upper_bound(x) + 1e-12);
    }
  }
}
