#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "homtest/group.hpp"
#include "homtest/rng.hpp"

namespace homtest {

inline constexpr std::uint64_t kClosureCap = 1'000'000;
inline constexpr std::size_t kPartialSumsCap = 24;

// Breadth-first closure of S ∪ {e} under op and inverse, sorted by canonical index.
std::vector<GroupElement> generated_subgroup(const Group& g, std::span<const GroupElement> s,
                                             std::uint64_t cap = kClosureCap);

// Vector spaces use rank over F_p; other groups use the closure.
bool generates(const Group& g, std::span<const GroupElement> s);
bool generates_by_closure(const Group& g, std::span<const GroupElement> s, std::uint64_t cap = kClosureCap);

// Rank over F_p of a list of vectors.
std::uint32_t rank(const Group& vs, std::span<const GroupElement> s);

// All subset sums (increasing index order), sorted by canonical index.
std::vector<GroupElement> partial_sums(const Group& g, std::span<const GroupElement> s,
                                       std::size_t cap = kPartialSumsCap);

struct GeneratorStats {
  std::string group;
  double e_estimate = 0.0;
  double e_standard_error = 0.0;
  std::uint64_t trials = 0;
  std::map<double, std::uint64_t> d_beta_estimates;
};

GeneratorStats estimate_E(const Group& g, std::uint64_t trials, Rng& rng, std::vector<double> betas = {});

// Closed form when known: vector spaces (including prime cyclic groups) only.
std::optional<double> exact_E(const Group& g);

// Incremental row-reduced basis over F_p. Pivot of a row is its highest nonzero
// coordinate, normalized to 1 and cleared from every other row.
class SpanBasis {
 public:
  explicit SpanBasis(const Group& vs);

  // Returns true when v enlarged the span.
  bool insert(const GroupElement& v);
  // Coordinates of v in the basis (by row), or nullopt if v is outside the span.
  std::optional<std::vector<std::uint32_t>> coordinates(const GroupElement& v) const;
  bool contains(const GroupElement& v) const { return coordinates(v).has_value(); }

  std::uint32_t rank() const { return static_cast<std::uint32_t>(rows_.size()); }
  // Rows sorted by increasing pivot; a coefficient vector read as a base-p number
  // (row 0 least significant) enumerates the span in canonical order.
  const std::vector<GroupElement>& rows() const { return rows_; }
  const std::vector<std::uint32_t>& pivots() const { return pivots_; }
  GroupElement combine(std::span<const std::uint32_t> coeffs) const;

 private:
  GroupElement reduce(const GroupElement& v, std::vector<std::uint32_t>* coeffs) const;
  const Group* g_;
  std::vector<GroupElement> rows_;
  std::vector<std::uint32_t> pivots_;
};

}  // namespace homtest
