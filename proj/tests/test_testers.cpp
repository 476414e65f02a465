#include <cmath>

#include "doctest.h"
#include "homtest/analysis.hpp"
#include "homtest/errors.hpp"
#include "homtest/subgroup.hpp"
#include "homtest/testers.hpp"

using namespace homtest;

namespace {

FunctionTable random_function(const GroupPtr& g, const GroupPtr& h, Rng& rng) {
  std::vector<GroupElement> v(g->order());
  for (auto& x : v) x = h->sample(rng);
  return FunctionTable::dense(g, h, std::move(v));
}

TesterSpec spec_for(const std::string& name, const Group& g) {
  TesterSpec s;
  s.name = name;
  s.k = 3;
  s.m = 4;
  s.epsilon = Rational(1, 4);
  s.t = 1;
  s.overrides.force_m = 8;
  s.overrides.force_reps = 4;
  if (name == "generated-subgroup" || name == "dispatch-prime") {
    auto e = exact_E(g);
    s.e_of_g = e ? *e : 4.0;
  }
  return s;
}

double accept_rate(const TesterSpec& spec, const FunctionTable& f, int trials, std::uint64_t seed) {
  Rng root(seed);
  int acc = 0;
  for (int i = 0; i < trials; ++i) {
    OnlineOracle o(f, {});
    Rng r = root.split(i);
    acc += run_tester(spec, o, r).accepted();
  }
  return static_cast<double>(acc) / trials;
}

}  // namespace

TEST_SUITE("testers") {
  TEST_CASE("parameter formulas") {
    CHECK(online_m(Rational(1, 2), 2, 2) == 136);
    CHECK(online_m(Rational(1, 2), 0, 2) == 132);
    CHECK(online_m(Rational(1, 2), 1, 2) == 132);
    CHECK(online_m(Rational(1, 2), 8, 2) == 144);
    CHECK(online_m(Rational(1, 2), 9, 3) == 140);
    CHECK(online_m(Rational(1, 4), 3, 2) == 4 * 62 + 12);  // log2 3 + 60 = 61.58
    CHECK(spot_checks(Rational(1, 4)) == 12);
    CHECK(spot_checks(Rational(2, 7)) == 11);
    CHECK(gr_sample_count(*Group::parse("F2^10")) == 20);
    CHECK(gr_sample_count(*Group::parse("Z5")) == 13);
    CHECK(gr_sample_count(*Group::parse("F2^100")) == 110);
    CHECK_THROWS_AS(spot_checks(Rational(0)), DomainError);
  }

  TEST_CASE("branch predicates") {
    CHECK(general_uses_online_branch(*Group::parse("F2^64"), 16));
    CHECK_FALSE(general_uses_online_branch(*Group::parse("F2^63"), 16));
    CHECK(prime_uses_online_branch(*Group::parse("F7^32"), 8));
    CHECK_FALSE(prime_uses_online_branch(*Group::parse("F7^31"), 8));
  }

  TEST_CASE("homomorphisms are always accepted") {
    const std::pair<const char*, const char*> pairs[] = {{"Z5", "Z5"}, {"Z6", "Z4"}, {"F2^6", "Z2"},
                                                         {"F3^3", "F3"}, {"S4", "Z2"}, {"D4", "Z2"},
                                                         {"F3^2", "F2"}};
    Rng rng(61);
    for (auto [a, b] : pairs) {
      GroupPtr g = Group::parse(a), h = Group::parse(b);
      for (const auto& name : tester_names()) {
        if (!tester_applicable(name, *g, *h)) continue;
        CAPTURE(a);
        CAPTURE(name);
        TesterSpec spec = spec_for(name, *g);
        for (int trial = 0; trial < 20; ++trial) {
          FunctionTable f = random_homomorphism(g, h, rng).to_function();
          for (const char* adv : {"null", "uniform", "sum_hunter"}) {
            Rng rs = rng.split(trial);
            OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 1}, make_strategy({adv, 2}, *g, rs));
            Verdict v = run_tester(spec, o, rng);
            CHECK(v.accepted());
            CHECK(v.queries_made == o.queries_answered());
          }
        }
      }
    }
  }

  TEST_CASE("rejection witnesses are genuine violations") {
    Rng rng(62);
    GroupPtr g = Group::parse("F7");
    int rejects = 0;
    for (int trial = 0; trial < 300; ++trial) {
      FunctionTable f = random_function(g, g, rng);
      for (const char* name : {"signs", "fixed-signs", "unpredictable-signs", "coeffs", "unpredictable-coeffs"}) {
        OnlineOracle o(f, {});
        Verdict v = run_tester(spec_for(name, *g), o, rng);
        if (v.accepted()) continue;
        ++rejects;
        REQUIRE(v.reject_witness.has_value());
        CHECK(witness_is_violation(f, *v.reject_witness));
      }
    }
    CHECK(rejects > 100);
  }

  TEST_CASE("signs test rejection rate matches the exact count") {
    Rng rng(63);
    GroupPtr g = Group::parse("Z4"), h = Group::parse("Z3");
    for (int rep = 0; rep < 3; ++rep) {
      FunctionTable f = random_function(g, h, rng);
      const double exact = exact_rejection_probability(f, 1).to_double();
      const int n = 20000;
      int rej = 0;
      for (int i = 0; i < n; ++i) {
        OnlineOracle o(f, {});
        rej += !random_signs_test(o, 2, rng).accepted();
      }
      const double se = std::sqrt(exact * (1 - exact) / n);
      CHECK(std::abs(rej / static_cast<double>(n) - exact) <= 4 * se + 1e-12);
    }
  }

  TEST_CASE("erasures never cause rejection") {
    Rng rng(64);
    GroupPtr g = Group::parse("F2^5");
    FunctionTable f = random_homomorphism(g, Group::parse("Z2"), rng).to_function();
    for (const auto& name : tester_names()) {
      if (!tester_applicable(name, *g, *f.codomain())) continue;
      OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 1000}, strategy_uniform_eraser(rng.split(1)));
      Verdict v = run_tester(spec_for(name, *g), o, rng);
      CHECK(v.accepted());
    }
  }

  TEST_CASE("sample-based extension: word path agrees with the general path") {
    // F2^4 uses the F2 echelon extension; Z2xZ2xZ2xZ2 is the same group through subset-sum closure.
    GroupPtr word = Group::parse("F2^4"), prod = Group::parse("Z2xZ2xZ2xZ2"), h = Group::parse("Z4");
    Rng rng(65);
    for (int rep = 0; rep < 4; ++rep) {
      FunctionTable base = rep == 0 ? random_homomorphism(word, h, rng).to_function() : random_function(word, h, rng);
      std::vector<GroupElement> pv(16);
      for (std::uint64_t i = 0; i < 16; ++i) {
        // Same bit vector in both encodings.
        GroupElement x = word->element_at(i);
        std::string text = word->format(x);  // "(b0,b1,b2,b3)"
        std::string p = "{";
        for (char c : text) {
          if (c == '0' || c == '1') p += (p.size() > 1 ? ";" : "") + std::string(1, c);
        }
        p += "}";
        pv[prod->index_of(prod->parse_element(p))] = base.value_at(i);
      }
      FunctionTable other = FunctionTable::dense(prod, h, pv);
      TesterSpec spec;
      spec.name = "gr-sample";
      spec.epsilon = Rational(1, 4);
      spec.overrides.force_sample_count = 6;
      const double a = accept_rate(spec, base, 4000, 66);
      const double b = accept_rate(spec, other, 4000, 67);
      const double se = std::sqrt((a * (1 - a) + b * (1 - b)) / 4000);
      CHECK(std::abs(a - b) <= 4 * se + 1e-12);
      if (rep == 0) CHECK(a == 1.0);
    }
  }

  TEST_CASE("sample-based tester without coverage makes no queries") {
    GroupPtr g = Group::parse("Z64");
    Rng rng(68);
    FunctionTable f = random_function(g, Group::parse("Z2"), rng);
    std::uint64_t zero_query = 0;
    for (int i = 0; i < 200; ++i) {
      OnlineOracle o(f, {});
      Verdict v = gr_sample_based_test(o, Rational(1, 4), rng, 1);
      if (v.queries_made == 0) {
        ++zero_query;
        CHECK(v.accepted());
      }
    }
    CHECK(zero_query > 150);
  }

  TEST_CASE("dispatchers record their branch") {
    Rng rng(69);
    GroupPtr g = Group::parse("F2^8"), h = Group::parse("Z2");
    FunctionTable f = random_homomorphism(g, h, rng).to_function();
    OnlineOracle o(f, {});
    Verdict v = dispatch_general(o, Rational(1, 4), 1, rng);
    CHECK(v.branch == "gr-sample");
    CHECK(v.accepted());
    OnlineOracle o2(f, {});
    TesterOverrides ov;
    ov.force_m = 2;
    ov.force_reps = 2;
    Verdict w = dispatch_general(o2, Rational(1, 4), 1, rng, ov);
    CHECK(w.branch == "online-signs");
    CHECK(w.forced);

    GroupPtr g3 = Group::parse("F3^4"), h3 = Group::parse("F3");
    FunctionTable f3 = random_homomorphism(g3, h3, rng).to_function();
    OnlineOracle o3(f3, {});
    Verdict p = dispatch_prime(o3, Rational(1, 4), 1, rng);
    CHECK(p.branch == "generated-subgroup");
    CHECK(p.accepted());
  }

  TEST_CASE("zero tester rejects a far nonzero function") {
    Rng rng(70);
    GroupPtr g = Group::parse("F3^2"), h = Group::parse("F2");
    std::vector<GroupElement> vals(9, h->parse_element("(1)"));
    FunctionTable f = FunctionTable::dense(g, h, vals);
    OnlineOracle o(f, {});
    CHECK_FALSE(zero_test(o, Rational(1, 4), rng).accepted());
  }

  TEST_CASE("configuration errors") {
    Rng rng(71);
    GroupPtr g = Group::parse("Z5");
    FunctionTable f = random_function(g, g, rng);
    OnlineOracle o(f, {});
    TesterSpec s;
    s.name = "nope";
    CHECK_THROWS_AS(run_tester(s, o, rng), ConfigError);
    CHECK_THROWS_AS(unpredictable_signs_test(o, 3, rng), DomainError);
    CHECK_FALSE(tester_applicable("coeffs", *Group::parse("F2^3"), *Group::parse("F3")));
    CHECK(tester_applicable("zero", *Group::parse("F2^3"), *Group::parse("F3")));
    CHECK_FALSE(tester_applicable("zero", *Group::parse("Z6"), *Group::parse("Z3")));
  }

  TEST_CASE("verdict json") {
    Verdict v;
    v.branch = "gr-sample";
    const std::string j = verdict_json(v, *Group::parse("Z5"));
    CHECK(j.find("\"accept\"") != std::string::npos);
    CHECK(j.find("gr-sample") != std::string::npos);
  }
}
