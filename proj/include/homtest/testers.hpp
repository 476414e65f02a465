#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homtest/group.hpp"
#include "homtest/oracle.hpp"
#include "homtest/rational.hpp"
#include "homtest/rng.hpp"

namespace homtest {

enum class Decision { Accept, Reject };

struct Verdict {
  Decision decision = Decision::Accept;
  std::uint64_t queries_made = 0;
  std::uint64_t erasures_seen = 0;
  std::uint64_t iterations_run = 0;
  // The checked tuple (signs or coefficients) when a sum check failed.
  std::optional<SignedTuple> reject_witness;
  // Non-empty when a learner-style tester rejected on a consistency or spot check.
  std::string reject_reason;
  // Run used overrides instead of the default constants.
  bool forced = false;
  // Dispatchers record the branch they took.
  std::string branch;
  std::uint64_t m_used = 0;

  bool accepted() const { return decision == Decision::Accept; }
};

struct TesterOverrides {
  std::optional<std::uint64_t> force_m;
  std::optional<std::uint64_t> force_reps;
  std::optional<std::uint64_t> force_sample_count;
};

inline constexpr std::uint64_t kOnlineRepetitions = 48;

// 4 * ceil(log_base t + 15/eps) + 12, with log_base t read as 0 for t <= 1.
std::uint64_t online_m(Rational epsilon, std::uint64_t t, std::uint64_t base);
std::uint64_t spot_checks(Rational epsilon);  // ceil(3/eps)
std::uint64_t gr_sample_count(const Group& g);  // ceil(log2 |G|) + 10

Verdict random_signs_test(OnlineOracle& oracle, std::uint64_t k, Rng& rng);
Verdict fixed_signs_test(OnlineOracle& oracle, const std::vector<Sign>& signs, Rng& rng);
Verdict unpredictable_signs_test(OnlineOracle& oracle, std::uint64_t m, Rng& rng);
Verdict online_resilient_signs_test(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                                    const TesterOverrides& overrides = {});
Verdict gr_sample_based_test(OnlineOracle& oracle, Rational epsilon, Rng& rng,
                             std::optional<std::uint64_t> sample_count_override = std::nullopt);
Verdict generated_subgroup_test(OnlineOracle& oracle, Rational epsilon, double e_of_g, Rng& rng);
Verdict random_coefficients_test(OnlineOracle& oracle, std::uint64_t k, Rng& rng);
Verdict unpredictable_coefficients_test(OnlineOracle& oracle, std::uint64_t m, Rng& rng);
Verdict online_resilient_coefficients_test(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                                           const TesterOverrides& overrides = {});
Verdict zero_test(OnlineOracle& oracle, Rational epsilon, Rng& rng);

struct RangeCheck {
  bool within = true;
  double bound = 0.0;  // c * min{...} * |G|
};
RangeCheck general_range_check(const Group& g, Rational epsilon, std::uint64_t t, double c);
RangeCheck prime_range_check(const Group& g, Rational epsilon, std::uint64_t t, double c);

// Online signs tester iff 2^m <= |G|^(1/4), else the sample-based tester.
bool general_uses_online_branch(const Group& g, std::uint64_t m);
Verdict dispatch_general(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                         const TesterOverrides& overrides = {});
// Online coefficients tester iff m <= n/4, else the generated-subgroup tester.
bool prime_uses_online_branch(const Group& g, std::uint64_t m);
Verdict dispatch_prime(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                       const TesterOverrides& overrides = {}, std::optional<double> e_of_g = std::nullopt);

// Named tester with its parameters, as used by the experiment config.
struct TesterSpec {
  std::string name = "signs";
  std::uint64_t k = 4;
  std::uint64_t m = 8;
  Rational epsilon{1, 4};
  std::uint64_t t = 0;
  std::vector<Sign> signs;  // fixed-signs; all plus of length k when empty
  std::optional<double> e_of_g;
  TesterOverrides overrides;
};

const std::vector<std::string>& tester_names();
bool tester_applicable(const std::string& name, const Group& domain, const Group& codomain);
Verdict run_tester(const TesterSpec& spec, OnlineOracle& oracle, Rng& rng);

// Re-evaluates a witness tuple against f: true when the sum check genuinely fails.
bool witness_is_violation(const FunctionTable& f, const SignedTuple& witness);

std::string verdict_json(const Verdict& v, const Group& domain);

}  // namespace homtest
