#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homtest/function.hpp"
#include "homtest/group.hpp"
#include "homtest/rational.hpp"
#include "homtest/rng.hpp"

namespace homtest {

// Exhaustive routines refuse when the number of signed tuples exceeds this.
inline constexpr double kExactTupleGuard = 1e8;

// Number of signed k-tuples whose increasing-order sum is each element, by canonical index.
std::vector<std::uint64_t> signed_sum_counts(const Group& g, std::uint32_t k);

// Rejection probability of the random signs test with 2k points, over all (2|G|)^(2k) tuples.
Rational exact_rejection_probability(const FunctionTable& f, std::uint32_t k);

// Fix(a): signed tuples of length k2 whose increasing-order sum is a. The last element
// is forced by the signs and the first k2-1 elements.
SignedTuple fix_a_from_choices(const Group& g, const GroupElement& a, const std::vector<Sign>& signs,
                               const std::vector<GroupElement>& first);
SignedTuple sample_fix_a(const Group& g, const GroupElement& a, std::uint32_t k2, Rng& rng);

// Left/right construction: draw z, a left half summing to a - z and a right half
// summing to z. k2 must be even; each half forces its own last element.
SignedTuple alternative_from_choices(const Group& g, const GroupElement& a, const GroupElement& z,
                                     const std::vector<Sign>& signs, const std::vector<GroupElement>& left_first,
                                     const std::vector<GroupElement>& right_first);
SignedTuple sample_fix_a_alternative(const Group& g, const GroupElement& a, std::uint32_t k2, Rng& rng);

struct CorrectorMode {
  bool exact = true;
  std::uint64_t samples = 0;  // Monte-Carlo draws per element
};

struct CorrectorReport {
  double mu = 0.0;
  double mu_standard_error = 0.0;   // 0 in exact mode
  std::optional<Rational> mu_exact;
  std::vector<double> eta_per_element;  // by canonical index
  std::vector<Rational> eta_exact;      // exact mode only
  double eta_max = 0.0;
  Rational delta{0};
  std::optional<FunctionTable> g;
  bool g_is_hom = false;
  bool exact = true;
};

// Plurality-vote corrector over Fix(a), ties to the smallest codomain index.
CorrectorReport corrector(const FunctionTable& f, std::uint32_t k2, CorrectorMode mode, Rng& rng);
std::string corrector_json(const CorrectorReport& r, const Group& domain);

enum class FlatnessVariant { Signs, Coefficients };

struct FlatnessOptions {
  FlatnessVariant variant = FlatnessVariant::Signs;
  std::uint32_t m = 4;
  std::uint64_t x_draws = 1000;
  // Per-X draws used when the conditional law is too large to enumerate.
  std::uint64_t tuple_draws = 4096;
  std::uint32_t agreement_k = 8;
  std::uint64_t agreement_draws = 4096;
};

struct FlatnessReport {
  FlatnessVariant variant = FlatnessVariant::Signs;
  std::uint32_t m = 0;
  std::uint64_t samples_of_X = 0;
  std::vector<double> per_X_max_mass;
  std::vector<bool> per_X_deficit;
  double support_deficit_fraction = 0.0;
  std::uint64_t full_support = 0;   // C(m, m/2), times (p-1)^(m/2) for coefficients
  double max_mass_non_deficit = 0.0;
  std::uint64_t min_support_non_deficit = 0;
  double independent_fraction = 0.0;  // coefficient variant
  double alpha_empirical = 0.0;
  double beta_empirical = 0.0;
  std::vector<double> agreement_probabilities;  // p_1..p_K
  bool regime_ok = true;
  bool exact_conditional = true;
};

// f may be null; agreement probabilities are then left empty.
FlatnessReport flatness_probe(const GroupPtr& g, const FunctionTable* f, const FlatnessOptions& options, Rng& rng);
std::string flatness_csv(const FlatnessReport& r);
std::string flatness_json(const FlatnessReport& r);

// p_k = Pr[sum sigma_i f(x_i) = sum sigma_i h(x_i)] for k = 1..K.
std::vector<double> agreement_probabilities(const FunctionTable& f, const Homomorphism& h, std::uint32_t K,
                                            std::uint64_t draws, Rng& rng);
// Exact by convolution over pairs of codomain values; |G| and |H| at most 2048.
std::vector<double> agreement_probabilities_exact(const FunctionTable& f, const Homomorphism& h, std::uint32_t K);

// Fraction of draws where ceil(n/2) uniform vectors of F_p^n are independent.
double linear_independence_probability(std::uint32_t p, std::uint32_t n, std::uint64_t draws, Rng& rng);
double linear_independence_exact(std::uint32_t p, std::uint32_t n);

// Pr[Bin(n, p) is even] = (1 + (1 - 2p)^n) / 2.
double binomial_even_probability(std::uint32_t n, double p);
Rational binomial_even_probability_exact(std::uint32_t n, Rational p);
// Sums the probability of every outcome vector in {0,1}^n with an even number of ones.
Rational binomial_even_by_enumeration(std::uint32_t n, Rational p);

// 1 + 1/(2^(x-1) - 1), x >= 2.
double zeta_upper_bound(double x);
double zeta_partial(double x, std::uint64_t terms);
// Integral bound on the tail after `terms` terms.
double zeta_tail_bound(double x, std::uint64_t terms);

}  // namespace homtest
