#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "homtest/function.hpp"
#include "homtest/group.hpp"
#include "homtest/rng.hpp"

namespace homtest {

enum class Mode { Erasure, Corruption };
enum class Schedule { FixedRate, BudgetManaging };

std::string mode_name(Mode m);
std::string schedule_name(Schedule s);
Mode parse_mode(std::string_view s);
Schedule parse_schedule(std::string_view s);

// nullopt is the erasure symbol.
using Answer = std::optional<GroupElement>;

struct TranscriptEntry {
  GroupElement query;
  Answer answer;
};

class Transcript {
 public:
  void append(const GroupElement& q, const Answer& a) { entries_.push_back({q, a}); }
  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const TranscriptEntry& back() const { return entries_.back(); }
  // One JSON object per line: {"query": ..., "answer": ... or "⊥"}.
  std::string to_jsonl(const Group& domain, const Group& codomain) const;

 private:
  std::vector<TranscriptEntry> entries_;
};

// value is unset for erasures and set for corruptions.
struct Manipulation {
  GroupElement target;
  std::optional<GroupElement> value;
};

struct OracleSettings {
  Mode mode = Mode::Erasure;
  Schedule schedule = Schedule::BudgetManaging;
  std::uint64_t t = 0;
};

class OnlineOracle;

class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual std::string name() const = 0;
  // Called after every answer. The returned list must not exceed budget.
  virtual std::vector<Manipulation> respond(const Transcript& transcript, std::uint64_t budget,
                                            const OnlineOracle& view) = 0;
};

// Query channel over a base function. After each answer the budget is credited
// (fixed rate: set to t; budget managing: increased by t), the strategy moves, and a
// fixed-rate schedule forfeits whatever is left.
class OnlineOracle {
 public:
  OnlineOracle(const FunctionTable& base, OracleSettings settings,
               std::unique_ptr<AdversaryStrategy> strategy = nullptr);

  Answer query(const GroupElement& x);

  const FunctionTable& base() const { return *base_; }
  const Group& domain() const { return *base_->domain(); }
  const Group& codomain() const { return *base_->codomain(); }
  const OracleSettings& settings() const { return settings_; }
  std::uint64_t budget_available() const { return budget_; }
  std::uint64_t queries_answered() const { return queries_; }
  std::uint64_t manipulations_made() const { return manipulations_; }
  const Transcript& transcript() const { return transcript_; }
  const AdversaryStrategy* strategy() const { return strategy_.get(); }

  bool is_manipulated(const GroupElement& x) const { return overrides_.count(x) != 0; }
  bool is_erased(const GroupElement& x) const;
  std::size_t manipulated_count() const { return overrides_.size(); }
  // Current (possibly manipulated) value without recording a query.
  Answer peek(const GroupElement& x) const;

 private:
  const FunctionTable* base_;
  OracleSettings settings_;
  std::unique_ptr<AdversaryStrategy> strategy_;
  std::unordered_map<GroupElement, std::optional<GroupElement>, GroupElementHash> overrides_;
  Transcript transcript_;
  std::uint64_t budget_ = 0;
  std::uint64_t queries_ = 0;
  std::uint64_t manipulations_ = 0;
};

// A uniformly random codomain value different from the current value at x.
GroupElement corrupt_value(const OnlineOracle& view, const GroupElement& x, Rng& rng);

std::unique_ptr<AdversaryStrategy> strategy_null();
std::unique_ptr<AdversaryStrategy> strategy_uniform_eraser(Rng rng);
std::unique_ptr<AdversaryStrategy> strategy_sum_hunter(std::uint32_t w, Rng rng);
std::unique_ptr<AdversaryStrategy> strategy_span_eraser(std::uint32_t p, Rng rng);

struct StrategySpec {
  std::string name = "null";  // null | uniform | sum_hunter | span_eraser
  std::uint32_t w = 2;
};

bool strategy_applicable(const StrategySpec& spec, const Group& domain);
std::unique_ptr<AdversaryStrategy> make_strategy(const StrategySpec& spec, const Group& domain, Rng rng);

using QueryPolicy = std::function<std::optional<GroupElement>(const std::vector<Answer>& answers)>;
using InstanceSampler = std::function<FunctionTable(Rng&)>;
using StrategyFactory = std::function<std::unique_ptr<AdversaryStrategy>(Rng)>;

std::string answer_string(const Group& codomain, const std::vector<Answer>& answers);

// Histogram of answer strings seen by a deterministic policy over sampled instances.
std::map<std::string, std::uint64_t> transcript_distribution(const QueryPolicy& policy, const InstanceSampler& sampler,
                                                             const StrategyFactory& strategy, OracleSettings settings,
                                                             std::uint64_t trials, Rng& rng);

double total_variation(const std::map<std::string, std::uint64_t>& a, const std::map<std::string, std::uint64_t>& b);

}  // namespace homtest
