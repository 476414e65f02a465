#include <set>
#include <unordered_set>

#include "doctest.h"
#include "homtest/errors.hpp"
#include "homtest/oracle.hpp"
#include "homtest/subgroup.hpp"

using namespace homtest;

namespace {

// Records the budget it is offered and spends `spend` of it on fresh points.
class Recorder final : public AdversaryStrategy {
 public:
  Recorder(std::uint64_t spend, Mode mode, std::vector<std::uint64_t>* seen) : spend_(spend), mode_(mode), seen_(seen) {}
  std::string name() const override { return "recorder"; }
  std::vector<Manipulation> respond(const Transcript&, std::uint64_t budget, const OnlineOracle& view) override {
    seen_->push_back(budget);
    std::vector<Manipulation> moves;
    for (std::uint64_t i = 0; i < std::min(budget, spend_); ++i) {
      GroupElement x = view.domain().element_at(next_++ % view.domain().order());
      if (mode_ == Mode::Erasure) {
        moves.push_back({x, std::nullopt});
      } else {
        moves.push_back({x, view.codomain().identity()});
      }
    }
    return moves;
  }

 private:
  std::uint64_t spend_;
  Mode mode_;
  std::vector<std::uint64_t>* seen_;
  std::uint64_t next_ = 1;
};

class Greedy final : public AdversaryStrategy {
 public:
  explicit Greedy(std::uint64_t extra, bool with_value) : extra_(extra), with_value_(with_value) {}
  std::string name() const override { return "greedy"; }
  std::vector<Manipulation> respond(const Transcript&, std::uint64_t budget, const OnlineOracle& view) override {
    std::vector<Manipulation> moves(budget + extra_, {view.domain().identity(), std::nullopt});
    if (with_value_) {
      for (auto& m : moves) m.value = view.codomain().identity();
    }
    return moves;
  }

 private:
  std::uint64_t extra_;
  bool with_value_;
};

FunctionTable ident(const char* g) {
  GroupPtr z = Group::parse(g);
  std::vector<GroupElement> v;
  for (std::uint64_t i = 0; i < z->order(); ++i) v.push_back(z->element_at(i));
  return FunctionTable::dense(z, z, v);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("budget credit per schedule") {
    FunctionTable f = ident("Z97");
    for (std::uint64_t t : {0, 1, 3}) {
      for (std::uint64_t spend : {0, 1, 100}) {
        std::vector<std::uint64_t> bm, fr;
        OnlineOracle a(f, {Mode::Erasure, Schedule::BudgetManaging, t}, std::make_unique<Recorder>(spend, Mode::Erasure, &bm));
        OnlineOracle b(f, {Mode::Erasure, Schedule::FixedRate, t}, std::make_unique<Recorder>(spend, Mode::Erasure, &fr));
        std::uint64_t left = 0;
        for (int q = 0; q < 10; ++q) {
          a.query(f.domain()->element_at(0));
          b.query(f.domain()->element_at(0));
          // Budget managing accumulates unspent credit.
          left += t;
          CHECK(bm.back() == left);
          left -= std::min(left, spend);
          CHECK(a.budget_available() == left);
          // Fixed rate offers exactly t and forfeits the rest.
          CHECK(fr.back() == t);
          CHECK(b.budget_available() == 0);
          CHECK(a.manipulations_made() <= (q + 1) * t);
          CHECK(b.manipulations_made() <= (q + 1) * t);
        }
      }
    }
  }

  TEST_CASE("protocol violations") {
    FunctionTable f = ident("Z7");
    GroupElement x = f.domain()->element_at(3);
    OnlineOracle over(f, {Mode::Erasure, Schedule::BudgetManaging, 1}, std::make_unique<Greedy>(1, false));
    CHECK_THROWS_AS(over.query(x), ProtocolViolation);
    OnlineOracle valued(f, {Mode::Erasure, Schedule::BudgetManaging, 1}, std::make_unique<Greedy>(0, true));
    CHECK_THROWS_AS(valued.query(x), ProtocolViolation);
    OnlineOracle bare(f, {Mode::Corruption, Schedule::BudgetManaging, 1}, std::make_unique<Greedy>(0, false));
    CHECK_THROWS_AS(bare.query(x), ProtocolViolation);
    OnlineOracle fine(f, {Mode::Corruption, Schedule::BudgetManaging, 1}, std::make_unique<Greedy>(0, true));
    CHECK_NOTHROW(fine.query(x));
  }

  TEST_CASE("answers reflect the current state") {
    FunctionTable f = ident("Z11");
    std::vector<std::uint64_t> seen;
    OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 1}, std::make_unique<Recorder>(1, Mode::Erasure, &seen));
    GroupElement one = f.domain()->element_at(1);
    // The recorder erases index 1 after the first query, so the second query sees ⊥.
    CHECK(o.query(one) == one);
    CHECK_FALSE(o.query(one).has_value());
    CHECK(o.is_erased(one));
    CHECK(o.transcript().size() == 2);
    CHECK(o.transcript().to_jsonl(*f.domain(), *f.codomain()).find("⊥") != std::string::npos);
  }

  TEST_CASE("corrupt values differ from the current value") {
    FunctionTable f = ident("Z5");
    OnlineOracle o(f, {Mode::Corruption, Schedule::BudgetManaging, 0});
    Rng rng(51);
    std::set<std::uint64_t> hit;
    for (int i = 0; i < 200; ++i) {
      GroupElement x = f.domain()->element_at(2);
      GroupElement y = corrupt_value(o, x, rng);
      CHECK(y != x);
      hit.insert(f.codomain()->index_of(y));
    }
    CHECK(hit.size() == 4);
  }

  TEST_CASE("uniform eraser spends its budget on fresh points") {
    FunctionTable f = ident("Z31");
    OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 4}, strategy_uniform_eraser(Rng(52)));
    for (int q = 0; q < 5; ++q) {
      o.query(f.domain()->element_at(0));
      CHECK(o.manipulated_count() == std::min<std::uint64_t>(4 * (q + 1), 31));
    }
    for (int q = 0; q < 5; ++q) o.query(f.domain()->element_at(0));
    CHECK(o.manipulated_count() == 31);
    CHECK(o.manipulations_made() == 31);
  }

  TEST_CASE("sum hunter erases pair sums") {
    GroupPtr g = Group::parse("F2^10");
    Rng seed(53);
    FunctionTable f = random_homomorphism(g, Group::parse("Z2"), seed).to_function();
    OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 1}, strategy_sum_hunter(2, Rng(54)));
    Rng rng(55);
    GroupElement x = g->sample(rng), y = g->sample(rng);
    o.query(x);
    o.query(y);
    CHECK(o.is_erased(g->op(x, y)));
    CHECK_FALSE(o.query(g->op(x, y)).has_value());
  }

  TEST_CASE("span eraser covers the span but never the queries") {
    GroupPtr g = Group::parse("F3^6");
    Rng seed(56);
    FunctionTable f = random_homomorphism(g, Group::parse("F3"), seed).to_function();
    OnlineOracle o(f, {Mode::Erasure, Schedule::BudgetManaging, 100}, strategy_span_eraser(3, Rng(57)));
    Rng rng(58);
    std::vector<GroupElement> qs;
    for (int i = 0; i < 3; ++i) {
      qs.push_back(g->sample(rng));
      o.query(qs.back());
    }
    for (const auto& q : qs) CHECK_FALSE(o.is_manipulated(q));
    std::unordered_set<GroupElement, GroupElementHash> queried(qs.begin(), qs.end());
    for (const auto& x : generated_subgroup(*g, qs)) {
      if (!queried.count(x)) CHECK(o.is_erased(x));
    }
    CHECK(o.manipulated_count() == generated_subgroup(*g, qs).size() - queried.size());
    CHECK_THROWS_AS(make_strategy({"span_eraser", 2}, *Group::parse("S3"), Rng(1)), DomainError);
    CHECK_THROWS_AS(make_strategy({"bogus", 2}, *g, Rng(1)), ConfigError);
  }

  TEST_CASE("total variation") {
    std::map<std::string, std::uint64_t> a{{"x", 3}, {"y", 1}}, b{{"x", 6}, {"y", 2}}, c{{"z", 1}};
    CHECK(total_variation(a, b) == doctest::Approx(0.0));
    CHECK(total_variation(a, c) == doctest::Approx(1.0));
    std::map<std::string, std::uint64_t> d{{"x", 1}, {"y", 1}};
    CHECK(total_variation(a, d) == doctest::Approx(0.25));
  }

  TEST_CASE("transcript distribution is seeded") {
    GroupPtr g = Group::parse("Z5");
    QueryPolicy policy = [&](const std::vector<Answer>& ans) -> std::optional<GroupElement> {
      if (ans.size() >= 2) return std::nullopt;
      return g->element_at(ans.size() + 1);
    };
    InstanceSampler sampler = [&](Rng& r) { return random_homomorphism(g, g, r).to_function(); };
    Rng a(59), b(59);
    auto h1 = transcript_distribution(policy, sampler, nullptr, {}, 500, a);
    auto h2 = transcript_distribution(policy, sampler, nullptr, {}, 500, b);
    CHECK(h1 == h2);
    CHECK(h1.size() == 5);  // one transcript per hom x -> cx
  }

  TEST_CASE("names round trip") {
    for (Mode m : {Mode::Erasure, Mode::Corruption}) CHECK(parse_mode(mode_name(m)) == m);
    for (Schedule s : {Schedule::FixedRate, Schedule::BudgetManaging}) CHECK(parse_schedule(schedule_name(s)) == s);
    CHECK_THROWS(parse_mode("nope"));
  }
}
