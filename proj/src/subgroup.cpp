#include "homtest/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "homtest/errors.hpp"

namespace homtest {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

void check_closure_cap(const Group& g, std::uint64_t cap) {
  if (!g.order_fits() || g.order() > cap) {
    throw ResourceError("closure of " + g.to_string() + " exceeds cap " + std::to_string(cap));
  }
}

// Closure bitset by canonical index; returns the number of elements reached.
std::uint64_t closure(const Group& g, std::span<const GroupElement> s, std::vector<std::uint8_t>& seen,
                      std::uint64_t stop_at) {
  std::vector<GroupElement> gens;
  for (const auto& x : s) {
    gens.push_back(x);
    gens.push_back(g.inverse(x));
  }
  seen.assign(g.order(), 0);
  std::deque<GroupElement> queue;
  GroupElement e = g.identity();
  seen[g.index_of(e)] = 1;
  queue.push_back(e);
  std::uint64_t count = 1;
  while (!queue.empty() && count < stop_at) {
    GroupElement x = queue.front();
    queue.pop_front();
    for (const auto& gen : gens) {
      GroupElement y = g.op(x, gen);
      auto idx = g.index_of(y);
      if (!seen[idx]) {
        seen[idx] = 1;
        ++count;
        queue.push_back(y);
      }
    }
  }
  return count;
}

}  // namespace

std::vector<GroupElement> generated_subgroup(const Group& g, std::span<const GroupElement> s, std::uint64_t cap) {
  check_closure_cap(g, cap);
  std::vector<std::uint8_t> seen;
  closure(g, s, seen, UINT64_MAX);
  std::vector<GroupElement> out;
  for (std::uint64_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(g.element_at(i));
  }
  return out;
}

bool generates_by_closure(const Group& g, std::span<const GroupElement> s, std::uint64_t cap) {
  check_closure_cap(g, cap);
  std::vector<std::uint8_t> seen;
  return closure(g, s, seen, g.order()) == g.order();
}

bool generates(const Group& g, std::span<const GroupElement> s) {
  if (g.is_vector_space()) return rank(g, s) == g.dimension();
  return generates_by_closure(g, s);
}

std::uint32_t rank(const Group& vs, std::span<const GroupElement> s) {
  SpanBasis basis(vs);
  for (const auto& v : s) {
    basis.insert(v);
    if (basis.rank() == vs.dimension()) break;
  }
  return basis.rank();
}

std::vector<GroupElement> partial_sums(const Group& g, std::span<const GroupElement> s, std::size_t cap) {
  if (s.size() > cap) {
    throw ResourceError("partial sums of " + std::to_string(s.size()) + " elements exceed cap " + std::to_string(cap));
  }
  std::unordered_set<GroupElement, GroupElementHash> sums{g.identity()};
  std::vector<GroupElement> current{g.identity()};
  for (const auto& x : s) {
    const std::size_t n = current.size();
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement y = g.op(current[i], x);
      if (sums.insert(y).second) current.push_back(y);
    }
  }
  if (g.order_fits()) {
    std::sort(current.begin(), current.end(),
              [&g](const GroupElement& a, const GroupElement& b) { return g.index_of(a) < g.index_of(b); });
  } else {
    std::sort(current.begin(), current.end(),
              [](const GroupElement& a, const GroupElement& b) { return a.bytes < b.bytes; });
  }
  return current;
}

GeneratorStats estimate_E(const Group& g, std::uint64_t trials, Rng& rng, std::vector<double> betas) {
  if (trials == 0) throw DomainError("estimate_E needs at least one trial");
  GeneratorStats stats;
  stats.group = g.to_string();
  stats.trials = trials;
  std::vector<std::uint64_t> stops;
  stops.reserve(trials);
  std::vector<std::uint8_t> member;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::uint64_t count = 0;
    if (g.is_vector_space()) {
      SpanBasis basis(g);
      while (basis.rank() < g.dimension()) {
        basis.insert(g.sample(rng));
        ++count;
      }
    } else {
      std::vector<GroupElement> drawn;
      std::uint64_t size = closure(g, drawn, member, UINT64_MAX);
      while (size < g.order()) {
        GroupElement x = g.sample(rng);
        ++count;
        if (member[g.index_of(x)]) continue;
        drawn.push_back(x);
        size = closure(g, drawn, member, UINT64_MAX);
      }
    }
    stops.push_back(count);
  }
  double sum = 0.0;
  double sq = 0.0;
  for (auto t : stops) {
    sum += static_cast<double>(t);
    sq += static_cast<double>(t) * static_cast<double>(t);
  }
  const double n = static_cast<double>(trials);
  stats.e_estimate = sum / n;
  const double var = trials > 1 ? (sq - sum * sum / n) / (n - 1) : 0.0;
  stats.e_standard_error = std::sqrt(std::max(0.0, var) / n);
  std::sort(stops.begin(), stops.end());
  for (double beta : betas) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
    // Smallest m with #{T <= m} >= (1 - beta) * trials.
    auto needed = static_cast<std::uint64_t>(std::ceil((1.0 - beta) * n - 1e-9));
    needed = std::clamp<std::uint64_t>(needed, 1, trials);
    stats.d_beta_estimates[beta] = stops[needed - 1];
  }
  return stats;
}

std::optional<double> exact_E(const Group& g) {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  if (g.is_vector_space()) {
    p = g.prime();
    n = g.dimension();
  } else if (g.kind() == GroupKind::Cyclic) {
    std::uint64_t m = g.modulus();
    if (m < 2 || m > UINT32_MAX) return std::nullopt;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
      if (m % d == 0) return std::nullopt;
    }
    p = static_cast<std::uint32_t>(m);
    n = 1;
  } else {
    return std::nullopt;
  }
  // Waiting time to leave a rank-i subspace is geometric with success 1 - p^(i-n).
  double e = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    e += 1.0 / (1.0 - std::pow(static_cast<double>(p), static_cast<double>(i) - n));
  }
  return e;
}

SpanBasis::SpanBasis(const Group& vs) : g_(&vs) {
  if (!vs.is_vector_space()) throw DomainError("span basis needs a vector space, got " + vs.to_string());
}

GroupElement SpanBasis::reduce(const GroupElement& v, std::vector<std::uint32_t>* coeffs) const {
  const Group& g = *g_;
  const std::uint32_t p = g.prime();
  GroupElement r = v;
  if (coeffs) coeffs->assign(rows_.size(), 0);
  if (g.is_f2_word()) {
    std::uint64_t w = r.word(0);
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      if ((w >> pivots_[j]) & 1u) {
        w ^= rows_[j].word(0);
        if (coeffs) (*coeffs)[j] = 1;
      }
    }
    r.set_word(0, w);
    return r;
  }
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    std::uint32_t d = g.digit(r, pivots_[j]);
    if (d == 0) continue;
    r = g.op(r, g.scale(p - d, rows_[j]));
    if (coeffs) (*coeffs)[j] = d;
  }
  return r;
}

bool SpanBasis::insert(const GroupElement& v) {
  const Group& g = *g_;
  GroupElement r = reduce(v, nullptr);
  std::uint32_t pivot = g.dimension();
  for (std::uint32_t i = g.dimension(); i-- > 0;) {
    if (g.digit(r, i) != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot == g.dimension()) return false;
  const std::uint32_t p = g.prime();
  r = g.scale(inv_mod(g.digit(r, pivot), p), r);
  for (auto& row : rows_) {
    std::uint32_t d = g.digit(row, pivot);
    if (d != 0) row = g.op(row, g.scale(p - d, r));
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, pivot);
  rows_.insert(rows_.begin() + pos, r);
  return true;
}

std::optional<std::vector<std::uint32_t>> SpanBasis::coordinates(const GroupElement& v) const {
  std::vector<std::uint32_t> coeffs;
  GroupElement r = reduce(v, &coeffs);
  if (!(r == GroupElement{})) return std::nullopt;
  return coeffs;
}

GroupElement SpanBasis::combine(std::span<const std::uint32_t> coeffs) const {
  const Group& g = *g_;
  GroupElement acc{};
  for (std::size_t j = 0; j < rows_.size() && j < coeffs.size(); ++j) {
    if (coeffs[j] != 0) acc = g.op(acc, g.scale(coeffs[j], rows_[j]));
  }
  return acc;
}

}  // namespace homtest
