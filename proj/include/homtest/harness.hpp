#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homtest/function.hpp"
#include "homtest/oracle.hpp"
#include "homtest/rational.hpp"
#include "homtest/testers.hpp"

namespace homtest {

inline constexpr const char* kCodeVersion = "homtest 1.0.0";

struct InstanceConfig {
  InstanceKind kind = InstanceKind::RandomHom;
  Rational epsilon{0};
  std::optional<std::string> shift;  // codomain element text
  std::uint64_t key = 0;
  // Fresh instance per trial, or one instance shared by every trial.
  bool per_trial = true;
};

struct AdversaryConfig {
  StrategySpec strategy;
  Mode mode = Mode::Erasure;
  Schedule schedule = Schedule::BudgetManaging;
};

struct ExperimentConfig {
  std::string group_domain = "Z5";
  std::string group_codomain = "Z5";
  InstanceConfig instance;
  TesterSpec tester;  // tester.t is the adversary budget as well
  AdversaryConfig adversary;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::uint32_t workers = 1;
  Rational range_c{1, 100};
  std::string output_path;  // empty: stdout
  std::string output_format = "jsonl";
};

// Missing keys take defaults; the seed falls back to HOMTEST_SEED, then 0.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
std::uint64_t default_seed();

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct Stratum {
  std::string epsilon_f;  // exact distance of the instances in this bucket
  std::uint64_t trials = 0;
  std::uint64_t rejects = 0;
  Interval reject_interval;
};

struct ExperimentReport {
  std::uint64_t accept_count = 0;
  std::uint64_t reject_count = 0;
  double accept_rate = 0.0;
  Interval accept_interval;
  double mean_queries = 0.0;
  double mean_erasures_seen = 0.0;
  std::vector<std::string> regime_flags;
  std::vector<Stratum> strata;
  std::map<std::string, std::uint64_t> branches;
  double wall_time = 0.0;
  std::string config_echo;
  std::string code_version = kCodeVersion;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);
std::string report_json(const ExperimentReport& r, bool include_wall_time = true);

// One row of the completeness matrix.
struct ZooCell {
  std::string domain;
  std::string codomain;
  std::string tester;
  std::string strategy;
  std::uint64_t t = 0;
  std::uint64_t trials = 0;
  std::uint64_t accepts = 0;
  bool forced = false;
  bool passed() const { return accepts == trials; }
};

struct ZooOptions {
  std::uint64_t trials = 10000;
  // Reduced-trial cells that run the online testers at their unforced m.
  std::uint64_t unforced_trials = 100;
  std::uint64_t forced_m = 8;
  std::uint64_t seed = 0;
  bool quick = false;
};

std::vector<std::pair<std::string, std::string>> zoo_pairs();
std::vector<ZooCell> run_zoo(const ZooOptions& options);

struct LowerBoundResult {
  double tv = 0.0;
  std::uint64_t distinct_plus = 0;
  std::uint64_t distinct_minus = 0;
};

// D+ = uniform homomorphisms F_p^n -> F_p, D- = uniform functions, both behind a
// span-erasing adversary with budget t. Policy "two" queries e1, e2; "spanned"
// queries e1, e2, e1 + e2, e3.
LowerBoundResult lowerbound_demo(std::uint32_t p, std::uint32_t n, std::uint64_t t, const std::string& policy,
                                 std::uint64_t trials, std::uint64_t seed);

}  // namespace homtest
