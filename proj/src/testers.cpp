#include "homtest/testers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "homtest/errors.hpp"
#include "homtest/function.hpp"
#include "homtest/subgroup.hpp"
#include "json.hpp"

namespace homtest {

namespace {

struct Session {
  OnlineOracle& oracle;
  Verdict& verdict;

  Answer ask(const GroupElement& x) {
    Answer a = oracle.query(x);
    ++verdict.queries_made;
    if (!a) ++verdict.erasures_seen;
    return a;
  }
};

void require_same_characteristic(const OnlineOracle& oracle) {
  const Group& g = oracle.domain();
  const Group& h = oracle.codomain();
  if (!g.is_vector_space() || !h.is_vector_space() || g.prime() != h.prime()) {
    throw DomainError("coefficient testers need F_p vector spaces of equal characteristic, got " + g.to_string() +
                      " -> " + h.to_string());
  }
}

// Queries xs in order, then the multiplier-weighted sum over `chosen`; accepts on any
// erasure and otherwise compares the weighted sum of answers with the answer at the sum.
void sum_check(Session& s, const std::vector<GroupElement>& xs, const std::vector<std::size_t>& chosen,
               const std::vector<Multiplier>& mults) {
  const Group& g = s.oracle.domain();
  const Group& h = s.oracle.codomain();
  std::vector<GroupElement> answers(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Answer a = s.ask(xs[i]);
    if (!a) return;
    answers[i] = *a;
  }
  GroupElement point = g.identity();
  GroupElement expected = h.identity();
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    point = g.op(point, apply_multiplier(g, mults[j], xs[chosen[j]]));
    expected = h.op(expected, apply_multiplier(h, mults[j], answers[chosen[j]]));
  }
  Answer at = s.ask(point);
  if (!at || *at == expected) return;
  s.verdict.decision = Decision::Reject;
  SignedTuple witness;
  for (std::size_t j = 0; j < chosen.size(); ++j) witness.entries.push_back({mults[j], xs[chosen[j]]});
  s.verdict.reject_witness = std::move(witness);
}

std::vector<GroupElement> draw(const Group& g, std::uint64_t count, Rng& rng) {
  std::vector<GroupElement> xs(count);
  for (auto& x : xs) x = g.sample(rng);
  return xs;
}

std::vector<Multiplier> draw_signs(std::uint64_t count, Rng& rng) {
  std::vector<Multiplier> out(count);
  for (auto& m : out) m = rng.coin() ? Sign::Minus : Sign::Plus;
  return out;
}

std::vector<Multiplier> draw_coefficients(std::uint64_t count, std::uint32_t p, Rng& rng) {
  std::vector<Multiplier> out(count);
  for (auto& m : out) m = Coefficient{static_cast<std::uint32_t>(1 + rng.below(p - 1))};
  return out;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Uniform m/2-subset of [m], ascending.
std::vector<std::size_t> half_subset(std::uint64_t m, Rng& rng) {
  std::vector<std::size_t> idx = iota_indices(m);
  for (std::uint64_t i = 0; i < m / 2; ++i) std::swap(idx[i], idx[i + rng.below(m - i)]);
  idx.resize(m / 2);
  std::sort(idx.begin(), idx.end());
  return idx;
}

enum class Family { Signs, Coefficients };

Verdict unpredictable(OnlineOracle& oracle, std::uint64_t m, Rng& rng, Family family) {
  if (m == 0 || m % 2 != 0) throw DomainError("unpredictable tests need a positive even m");
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  const Group& g = oracle.domain();
  std::vector<GroupElement> xs = draw(g, m, rng);
  std::vector<std::size_t> chosen = half_subset(m, rng);
  std::vector<Multiplier> all = family == Family::Signs ? draw_signs(m, rng) : draw_coefficients(m, g.prime(), rng);
  std::vector<Multiplier> mults;
  for (auto j : chosen) mults.push_back(all[j]);
  sum_check(s, xs, chosen, mults);
  return v;
}

Verdict online(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng, const TesterOverrides& ov,
               Family family) {
  if (!(epsilon > Rational(0) && epsilon < Rational(1))) throw DomainError("epsilon must lie in (0, 1)");
  const std::uint64_t base = family == Family::Signs ? 2 : oracle.domain().prime();
  const std::uint64_t m = ov.force_m ? *ov.force_m : online_m(epsilon, t, base);
  const std::uint64_t reps = ov.force_reps ? *ov.force_reps : kOnlineRepetitions;
  Verdict v;
  v.forced = ov.force_m.has_value() || ov.force_reps.has_value();
  v.m_used = m;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng iter = rng.split(i);
    Verdict one = unpredictable(oracle, m, iter, family);
    v.queries_made += one.queries_made;
    v.erasures_seen += one.erasures_seen;
    v.iterations_run = i + 1;
    if (!one.accepted()) {
      v.decision = Decision::Reject;
      v.reject_witness = std::move(one.reject_witness);
      break;
    }
  }
  return v;
}

std::uint64_t ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : 64 - std::countl_zero(n - 1); }

// Bit j of a packed set of sample indices.
struct IndexSet {
  std::vector<std::uint64_t> words;
  explicit IndexSet(std::size_t n = 0) : words((n + 63) / 64, 0) {}
  void flip(std::size_t j) { words[j / 64] ^= std::uint64_t{1} << (j % 64); }
  void merge_xor(const IndexSet& o) {
    for (std::size_t i = 0; i < words.size(); ++i) words[i] ^= o.words[i];
  }
  void merge_or(const IndexSet& o) {
    for (std::size_t i = 0; i < words.size(); ++i) words[i] |= o.words[i];
  }
  template <class F>
  void for_each(F f) const {
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::uint64_t w = words[i]; w; w &= w - 1) f(i * 64 + std::countr_zero(w));
    }
  }
};

// Subset-sum extension over F_2^n with an abelian codomain, by elimination. A subset
// sum value is well defined iff every sample in some dependency has order <= 2 and
// every fundamental dependency sums to the identity.
class F2Extension {
 public:
  F2Extension(const Group& h, const std::vector<GroupElement>& xs, const std::vector<GroupElement>& fx)
      : h_(h), fx_(fx) {
    const std::size_t s = xs.size();
    IndexSet in_cycle(s);
    for (std::size_t j = 0; j < s && ok_; ++j) {
      std::uint64_t w = xs[j].word(0);
      IndexSet mask(s);
      mask.flip(j);
      reduce(w, mask);
      if (w == 0) {
        if (!(sum(mask) == h_.identity())) ok_ = false;
        in_cycle.merge_or(mask);
      } else {
        rows_.push_back({w, std::move(mask)});
        std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.w > b.w; });
      }
    }
    if (ok_) {
      in_cycle.for_each([&](std::size_t j) {
        if (!(h_.op(fx_[j], fx_[j]) == h_.identity())) ok_ = false;
      });
    }
  }

  bool consistent() const { return ok_; }

  GroupElement value(const GroupElement& x) const {
    std::uint64_t w = x.word(0);
    IndexSet mask(fx_.size());
    reduce(w, mask);
    return sum(mask);
  }

 private:
  struct Row {
    std::uint64_t w;
    IndexSet mask;
  };

  // Rows are kept sorted by decreasing leading bit.
  void reduce(std::uint64_t& w, IndexSet& mask) const {
    for (const auto& r : rows_) {
      const std::uint64_t lead = std::uint64_t{1} << (63 - std::countl_zero(r.w));
      if (w & lead) {
        w ^= r.w;
        mask.merge_xor(r.mask);
      }
    }
  }

  GroupElement sum(const IndexSet& mask) const {
    GroupElement acc = h_.identity();
    mask.for_each([&](std::size_t j) { acc = h_.op(acc, fx_[j]); });
    return acc;
  }

  const Group& h_;
  const std::vector<GroupElement>& fx_;
  std::vector<Row> rows_;
  bool ok_ = true;
};

// Homomorphism extension from samples that span F_p^n, for abelian codomains.
class LinearExtension {
 public:
  // Samples that enlarge the span must have p-torsion values; every other sample must
  // agree with the extension determined by them.
  LinearExtension(const Group& g, const Group& h, const std::vector<GroupElement>& xs,
                  const std::vector<GroupElement>& fx)
      : g_(g), h_(h), basis_(g) {
    std::vector<std::size_t> dependent;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (!basis_.insert(xs[j])) {
        dependent.push_back(j);
        continue;
      }
      if (!(h_.multiple(fx[j], g_.prime()) == h_.identity())) {
        ok_ = false;
        return;
      }
      samples_.push_back(xs[j]);
      values_.push_back(fx[j]);
    }
    rebuild();
    for (auto j : dependent) {
      if (!(value(xs[j]) == fx[j])) {
        ok_ = false;
        return;
      }
    }
  }

  bool consistent() const { return ok_; }

  GroupElement value(const GroupElement& x) const {
    auto coords = basis_.coordinates(x);
    return value_from(*coords);
  }

 private:
  void rebuild() {
    // Express each basis row through the independent samples by solving with a basis of
    // the samples themselves (small: at most n rows).
    // Coordinates of each sample in the current rows give a square invertible system;
    // solve it by Gaussian elimination over F_p in the codomain.
    const std::size_t r = basis_.rank();
    const std::uint32_t p = g_.prime();
    std::vector<std::vector<std::uint32_t>> a(r);
    std::vector<GroupElement> b(r);
    for (std::size_t i = 0; i < r; ++i) {
      a[i] = *basis_.coordinates(samples_[i]);
      b[i] = values_[i];
    }
    auto inv = [p](std::uint32_t v) {
      std::uint64_t res = 1, base = v % p;
      for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1) res = res * base % p;
        base = base * base % p;
      }
      return static_cast<std::uint32_t>(res);
    };
    for (std::size_t col = 0; col < r; ++col) {
      std::size_t piv = col;
      while (a[piv][col] == 0) ++piv;
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      const std::uint32_t s = inv(a[col][col]);
      for (auto& c : a[col]) c = static_cast<std::uint32_t>(std::uint64_t{c} * s % p);
      b[col] = h_.multiple(b[col], s);
      for (std::size_t i = 0; i < r; ++i) {
        if (i == col || a[i][col] == 0) continue;
        const std::uint32_t f = a[i][col];
        for (std::size_t k = 0; k < r; ++k) {
          a[i][k] = static_cast<std::uint32_t>((a[i][k] + std::uint64_t{p - f} * a[col][k]) % p);
        }
        b[i] = h_.op(b[i], h_.multiple(b[col], p - f));
      }
    }
    row_values_ = std::move(b);
  }

  GroupElement value_from(const std::vector<std::uint32_t>& coords) const {
    GroupElement acc = h_.identity();
    for (std::size_t k = 0; k < coords.size(); ++k) {
      if (coords[k]) acc = h_.op(acc, h_.multiple(row_values_[k], coords[k]));
    }
    return acc;
  }

  const Group& g_;
  const Group& h_;
  SpanBasis basis_;
  std::vector<GroupElement> samples_;
  std::vector<GroupElement> values_;
  std::vector<GroupElement> row_values_;
  bool ok_ = true;
};

bool spot_check(Session& s, Rational epsilon, Rng& rng, const std::function<GroupElement(const GroupElement&)>& h) {
  const std::uint64_t checks = spot_checks(epsilon);
  for (std::uint64_t i = 0; i < checks; ++i) {
    GroupElement x = s.oracle.domain().sample(rng);
    Answer a = s.ask(x);
    if (!a) return true;
    if (!(*a == h(x))) {
      s.verdict.decision = Decision::Reject;
      s.verdict.reject_reason = "spot check disagrees with the extended homomorphism";
      return false;
    }
  }
  return true;
}

void check_epsilon(Rational epsilon) {
  if (!(epsilon > Rational(0) && epsilon < Rational(1))) throw DomainError("epsilon must lie in (0, 1)");
}

}  // namespace

std::uint64_t online_m(Rational epsilon, std::uint64_t t, std::uint64_t base) {
  check_epsilon(epsilon);
  if (base < 2) throw DomainError("logarithm base must be at least 2");
  const Rational q = Rational(15) / epsilon;
  std::uint64_t l0 = 0;
  bool exact = true;
  if (t > 1) {
    unsigned __int128 pw = 1;
    while (pw * base <= t) {
      pw *= base;
      ++l0;
    }
    exact = pw == t;
  }
  std::uint64_t inner;
  if (exact) {
    inner = l0 + static_cast<std::uint64_t>(q.ceil());
  } else {
    const long double frac = std::log(static_cast<long double>(t)) / std::log(static_cast<long double>(base)) - l0;
    const std::int64_t whole = q.num() / q.den();
    const long double rem = static_cast<long double>(q.num() % q.den()) / q.den();
    inner = l0 + static_cast<std::uint64_t>(whole) + (frac + rem <= 1.0L ? 1 : 2);
  }
  return 4 * inner + 12;
}

std::uint64_t spot_checks(Rational epsilon) {
  check_epsilon(epsilon);
  return static_cast<std::uint64_t>((Rational(3) / epsilon).ceil());
}

std::uint64_t gr_sample_count(const Group& g) {
  if (g.order_fits()) return ceil_log2(g.order()) + 10;
  return static_cast<std::uint64_t>(std::ceil(g.log2_order() - 1e-9)) + 10;
}

Verdict random_signs_test(OnlineOracle& oracle, std::uint64_t k, Rng& rng) {
  if (k == 0) throw DomainError("random signs test needs k >= 1");
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  std::vector<GroupElement> xs = draw(oracle.domain(), k, rng);
  std::vector<Multiplier> signs = draw_signs(k, rng);
  sum_check(s, xs, iota_indices(k), signs);
  return v;
}

Verdict fixed_signs_test(OnlineOracle& oracle, const std::vector<Sign>& signs, Rng& rng) {
  if (signs.empty()) throw DomainError("fixed signs test needs k >= 1");
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  std::vector<GroupElement> xs = draw(oracle.domain(), signs.size(), rng);
  std::vector<Multiplier> mults(signs.begin(), signs.end());
  sum_check(s, xs, iota_indices(signs.size()), mults);
  return v;
}

Verdict unpredictable_signs_test(OnlineOracle& oracle, std::uint64_t m, Rng& rng) {
  return unpredictable(oracle, m, rng, Family::Signs);
}

Verdict online_resilient_signs_test(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                                    const TesterOverrides& overrides) {
  return online(oracle, epsilon, t, rng, overrides, Family::Signs);
}

Verdict random_coefficients_test(OnlineOracle& oracle, std::uint64_t k, Rng& rng) {
  require_same_characteristic(oracle);
  if (k == 0) throw DomainError("random coefficients test needs k >= 1");
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  std::vector<GroupElement> xs = draw(oracle.domain(), k, rng);
  std::vector<Multiplier> coeffs = draw_coefficients(k, oracle.domain().prime(), rng);
  sum_check(s, xs, iota_indices(k), coeffs);
  return v;
}

Verdict unpredictable_coefficients_test(OnlineOracle& oracle, std::uint64_t m, Rng& rng) {
  require_same_characteristic(oracle);
  return unpredictable(oracle, m, rng, Family::Coefficients);
}

Verdict online_resilient_coefficients_test(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                                           const TesterOverrides& overrides) {
  require_same_characteristic(oracle);
  return online(oracle, epsilon, t, rng, overrides, Family::Coefficients);
}

Verdict gr_sample_based_test(OnlineOracle& oracle, Rational epsilon, Rng& rng,
                             std::optional<std::uint64_t> sample_count_override) {
  check_epsilon(epsilon);
  const Group& g = oracle.domain();
  const Group& h = oracle.codomain();
  Verdict v;
  v.iterations_run = 1;
  v.forced = sample_count_override.has_value();
  Session s{oracle, v};
  const std::uint64_t count = sample_count_override ? *sample_count_override : gr_sample_count(g);
  std::vector<GroupElement> xs = draw(g, count, rng);

  if (g.is_f2_word() && h.abelian()) {
    if (rank(g, xs) != g.dimension()) return v;
    std::vector<GroupElement> fx(count);
    for (std::size_t j = 0; j < count; ++j) {
      Answer a = s.ask(xs[j]);
      if (!a) return v;
      fx[j] = *a;
    }
    F2Extension ext(h, xs, fx);
    if (!ext.consistent()) {
      v.decision = Decision::Reject;
      v.reject_reason = "subset sums of the sample are not well defined";
      return v;
    }
    spot_check(s, epsilon, rng, [&](const GroupElement& x) { return ext.value(x); });
    return v;
  }

  if (!g.order_fits() || g.order() > kDenseCap) {
    throw ResourceError("sample-based tester cannot extend over " + g.to_string());
  }
  const std::uint64_t n = g.order();
  // Coverage first: accept without querying when the partial sums miss G.
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<GroupElement> sums{g.identity()};
  seen[g.index_of(sums[0])] = 1;
  for (const auto& x : xs) {
    const std::size_t len = sums.size();
    for (std::size_t i = 0; i < len && sums.size() < n; ++i) {
      GroupElement y = g.op(sums[i], x);
      auto idx = g.index_of(y);
      if (!seen[idx]) {
        seen[idx] = 1;
        sums.push_back(y);
      }
    }
  }
  if (sums.size() != n) return v;
  std::vector<GroupElement> fx(count);
  for (std::size_t j = 0; j < count; ++j) {
    Answer a = s.ask(xs[j]);
    if (!a) return v;
    fx[j] = *a;
  }
  std::vector<GroupElement> value(n);
  std::vector<std::uint8_t> has(n, 0);
  std::vector<std::uint64_t> order{g.index_of(g.identity())};
  std::vector<GroupElement> elems{g.identity()};
  value[order[0]] = h.identity();
  has[order[0]] = 1;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t len = elems.size();
    for (std::size_t i = 0; i < len; ++i) {
      GroupElement y = g.op(elems[i], xs[j]);
      GroupElement val = h.op(value[order[i]], fx[j]);
      auto idx = g.index_of(y);
      if (!has[idx]) {
        has[idx] = 1;
        value[idx] = val;
        elems.push_back(y);
        order.push_back(idx);
      } else if (!(value[idx] == val)) {
        v.decision = Decision::Reject;
        v.reject_reason = "subset sums of the sample are not well defined";
        return v;
      }
    }
  }
  spot_check(s, epsilon, rng, [&](const GroupElement& x) { return value[g.index_of(x)]; });
  return v;
}

Verdict generated_subgroup_test(OnlineOracle& oracle, Rational epsilon, double e_of_g, Rng& rng) {
  check_epsilon(epsilon);
  if (!(e_of_g >= 0.0)) throw DomainError("E(G) must be non-negative");
  const Group& g = oracle.domain();
  const Group& h = oracle.codomain();
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  const auto m = static_cast<std::uint64_t>(std::ceil(e_of_g)) + 9;
  std::vector<GroupElement> xs = draw(g, m, rng);
  if (!generates(g, xs)) return v;
  std::vector<GroupElement> fx(m);
  for (std::size_t j = 0; j < m; ++j) {
    Answer a = s.ask(xs[j]);
    if (!a) return v;
    fx[j] = *a;
  }
  auto conflict = [&v] {
    v.decision = Decision::Reject;
    v.reject_reason = "sample values admit no homomorphism extension";
  };
  if (g.is_vector_space() && h.abelian()) {
    LinearExtension ext(g, h, xs, fx);
    if (!ext.consistent()) {
      conflict();
      return v;
    }
    spot_check(s, epsilon, rng, [&](const GroupElement& x) { return ext.value(x); });
    return v;
  }
  if (!g.order_fits() || g.order() > kDenseCap) {
    throw ResourceError("generated-subgroup tester cannot extend over " + g.to_string());
  }
  const std::uint64_t n = g.order();
  std::vector<GroupElement> value(n);
  std::vector<std::uint8_t> has(n, 0);
  std::vector<GroupElement> queue{g.identity()};
  const auto e_idx = g.index_of(g.identity());
  value[e_idx] = h.identity();
  has[e_idx] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const GroupElement x = queue[head];
    const GroupElement vx = value[g.index_of(x)];
    for (std::size_t j = 0; j < m; ++j) {
      GroupElement y = g.op(x, xs[j]);
      GroupElement val = h.op(vx, fx[j]);
      auto idx = g.index_of(y);
      if (!has[idx]) {
        has[idx] = 1;
        value[idx] = val;
        queue.push_back(y);
      } else if (!(value[idx] == val)) {
        conflict();
        return v;
      }
    }
  }
  spot_check(s, epsilon, rng, [&](const GroupElement& x) { return value[g.index_of(x)]; });
  return v;
}

Verdict zero_test(OnlineOracle& oracle, Rational epsilon, Rng& rng) {
  check_epsilon(epsilon);
  Verdict v;
  v.iterations_run = 1;
  Session s{oracle, v};
  const GroupElement e = oracle.codomain().identity();
  const std::uint64_t checks = spot_checks(epsilon);
  for (std::uint64_t i = 0; i < checks; ++i) {
    Answer a = s.ask(oracle.domain().sample(rng));
    if (!a) return v;
    if (!(*a == e)) {
      v.decision = Decision::Reject;
      v.reject_reason = "non-identity value";
      return v;
    }
  }
  return v;
}

RangeCheck general_range_check(const Group& g, Rational epsilon, std::uint64_t t, double c) {
  const double eps = epsilon.to_double();
  const double lg = g.log2_order();
  const double inv = lg > 0 ? 1.0 / (lg * lg) : 1.0;
  RangeCheck r;
  r.bound = c * std::min(eps * eps, inv) * std::exp2(lg);
  r.within = static_cast<double>(t) <= r.bound;
  return r;
}

RangeCheck prime_range_check(const Group& g, Rational epsilon, std::uint64_t t, double c) {
  const double eps = epsilon.to_double();
  const double n = g.is_vector_space() ? g.dimension() : 1.0;
  RangeCheck r;
  r.bound = c * std::min(eps * eps, 1.0 / (n * n)) * std::exp2(g.log2_order());
  r.within = static_cast<double>(t) <= r.bound;
  return r;
}

bool general_uses_online_branch(const Group& g, std::uint64_t m) {
  if (g.order_fits()) {
    if (m >= 16) return false;
    return (std::uint64_t{1} << (4 * m)) <= g.order();
  }
  return static_cast<double>(4 * m) <= g.log2_order();
}

bool prime_uses_online_branch(const Group& g, std::uint64_t m) {
  if (!g.is_vector_space()) throw DomainError("prime-field dispatch needs a vector-space domain");
  return 4 * m <= g.dimension();
}

Verdict dispatch_general(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                         const TesterOverrides& overrides) {
  const std::uint64_t m = overrides.force_m ? *overrides.force_m : online_m(epsilon, t, 2);
  Verdict v;
  if (general_uses_online_branch(oracle.domain(), m)) {
    TesterOverrides ov = overrides;
    v = online_resilient_signs_test(oracle, epsilon, t, rng, ov);
    v.branch = "online-signs";
  } else {
    v = gr_sample_based_test(oracle, epsilon, rng, overrides.force_sample_count);
    v.branch = "gr-sample";
    v.forced = v.forced || overrides.force_m.has_value();
  }
  v.m_used = m;
  return v;
}

Verdict dispatch_prime(OnlineOracle& oracle, Rational epsilon, std::uint64_t t, Rng& rng,
                       const TesterOverrides& overrides, std::optional<double> e_of_g) {
  const Group& g = oracle.domain();
  if (!g.is_vector_space()) throw DomainError("prime-field dispatch needs a vector-space domain");
  const std::uint64_t m = overrides.force_m ? *overrides.force_m : online_m(epsilon, t, g.prime());
  Verdict v;
  if (prime_uses_online_branch(g, m)) {
    v = online_resilient_coefficients_test(oracle, epsilon, t, rng, overrides);
    v.branch = "online-coeffs";
  } else {
    const double e = e_of_g ? *e_of_g : *exact_E(g);
    v = generated_subgroup_test(oracle, epsilon, e, rng);
    v.branch = "generated-subgroup";
    v.forced = overrides.force_m.has_value();
  }
  v.m_used = m;
  return v;
}

const std::vector<std::string>& tester_names() {
  static const std::vector<std::string> names = {
      "signs",  "fixed-signs",           "unpredictable-signs", "online-signs", "gr-sample",
      "generated-subgroup", "coeffs",    "unpredictable-coeffs", "online-coeffs", "zero",
      "dispatch-general", "dispatch-prime"};
  return names;
}

bool tester_applicable(const std::string& name, const Group& g, const Group& h) {
  const bool same_char = g.is_vector_space() && h.is_vector_space() && g.prime() == h.prime();
  const bool dense = g.order_fits() && g.order() <= kDenseCap;
  if (name == "coeffs" || name == "unpredictable-coeffs" || name == "online-coeffs" || name == "dispatch-prime") {
    return same_char;
  }
  if (name == "zero") {
    return g.order_fits() && h.order_fits() && std::gcd(g.order(), h.order()) == 1;
  }
  if (name == "gr-sample" || name == "dispatch-general") return dense || (g.is_f2_word() && h.abelian());
  if (name == "generated-subgroup") return dense || (g.is_vector_space() && h.abelian());
  return name == "signs" || name == "fixed-signs" || name == "unpredictable-signs" || name == "online-signs";
}

Verdict run_tester(const TesterSpec& spec, OnlineOracle& oracle, Rng& rng) {
  const std::string& n = spec.name;
  if (n == "signs") return random_signs_test(oracle, spec.k, rng);
  if (n == "fixed-signs") {
    std::vector<Sign> signs = spec.signs.empty() ? std::vector<Sign>(spec.k, Sign::Plus) : spec.signs;
    return fixed_signs_test(oracle, signs, rng);
  }
  if (n == "unpredictable-signs") return unpredictable_signs_test(oracle, spec.m, rng);
  if (n == "online-signs") return online_resilient_signs_test(oracle, spec.epsilon, spec.t, rng, spec.overrides);
  if (n == "gr-sample") return gr_sample_based_test(oracle, spec.epsilon, rng, spec.overrides.force_sample_count);
  if (n == "generated-subgroup") {
    std::optional<double> e = spec.e_of_g ? spec.e_of_g : exact_E(oracle.domain());
    if (!e) throw ConfigError("generated-subgroup needs e_of_g for " + oracle.domain().to_string());
    return generated_subgroup_test(oracle, spec.epsilon, *e, rng);
  }
  if (n == "coeffs") return random_coefficients_test(oracle, spec.k, rng);
  if (n == "unpredictable-coeffs") return unpredictable_coefficients_test(oracle, spec.m, rng);
  if (n == "online-coeffs") {
    return online_resilient_coefficients_test(oracle, spec.epsilon, spec.t, rng, spec.overrides);
  }
  if (n == "zero") return zero_test(oracle, spec.epsilon, rng);
  if (n == "dispatch-general") return dispatch_general(oracle, spec.epsilon, spec.t, rng, spec.overrides);
  if (n == "dispatch-prime") return dispatch_prime(oracle, spec.epsilon, spec.t, rng, spec.overrides, spec.e_of_g);
  throw ConfigError("unknown tester '" + n + "'");
}

bool witness_is_violation(const FunctionTable& f, const SignedTuple& witness) {
  const Group& g = *f.domain();
  const Group& h = *f.codomain();
  GroupElement point = g.identity();
  GroupElement expected = h.identity();
  for (const auto& term : witness.entries) {
    point = g.op(point, apply_multiplier(g, term.mult, term.element));
    expected = h.op(expected, apply_multiplier(h, term.mult, f.eval(term.element)));
  }
  return !(f.eval(point) == expected);
}

std::string verdict_json(const Verdict& v, const Group& domain) {
  nlohmann::json j;
  j["decision"] = v.accepted() ? "accept" : "reject";
  j["queries_made"] = v.queries_made;
  j["erasures_seen"] = v.erasures_seen;
  j["iterations_run"] = v.iterations_run;
  j["forced"] = v.forced;
  if (!v.branch.empty()) j["branch"] = v.branch;
  if (v.m_used) j["m"] = v.m_used;
  if (!v.reject_reason.empty()) j["reject_reason"] = v.reject_reason;
  if (v.reject_witness) {
    auto& w = j["reject_witness"] = nlohmann::json::array();
    for (const auto& term : v.reject_witness->entries) {
      w.push_back({format_multiplier(term.mult), domain.format(term.element)});
    }
  }
  return j.dump();
}

}  // namespace homtest
