#include "homtest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "homtest/errors.hpp"
#include "homtest/subgroup.hpp"
#include "homtest/testers.hpp"
#include "json.hpp"

namespace homtest {

namespace {

double tuple_count(std::uint64_t order, std::uint32_t len) {
  return std::pow(2.0 * static_cast<double>(order), static_cast<double>(len));
}

void guard_tuples(const Group& g, std::uint32_t len) {
  if (!g.order_fits() || g.order() > CayleyTable::kMaxOrder || tuple_count(g.order(), len) > kExactTupleGuard) {
    throw ResourceError("exhaustive enumeration of " + std::to_string(len) + "-tuples over " + g.to_string() +
                        " exceeds the guard");
  }
}

std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::uint32_t> half_masks(std::uint32_t m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    if (static_cast<std::uint32_t>(std::popcount(s)) == m / 2) out.push_back(s);
  }
  return out;
}

// Joint counts of (signed sum, vote) over all signed tuples of length len, laid out
// as counts[a * |H| + h].
std::vector<std::uint64_t> sum_vote_counts(const FunctionTable& f, std::uint32_t len) {
  const CayleyTable gt(f.domain());
  const CayleyTable ht(f.codomain());
  const std::uint32_t ng = gt.size(), nh = ht.size();
  std::vector<std::uint32_t> fv(ng);
  for (std::uint32_t x = 0; x < ng; ++x) fv[x] = static_cast<std::uint32_t>(f.codomain()->index_of(f.eval(gt.element(x))));
  std::vector<std::uint64_t> cur(std::size_t{ng} * nh, 0), next(cur.size());
  cur[std::size_t{gt.identity()} * nh + ht.identity()] = 1;
  for (std::uint32_t step = 0; step < len; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (std::uint32_t a = 0; a < ng; ++a) {
      for (std::uint32_t h = 0; h < nh; ++h) {
        const std::uint64_t c = cur[std::size_t{a} * nh + h];
        if (!c) continue;
        for (std::uint32_t x = 0; x < ng; ++x) {
          next[std::size_t{gt.op(a, x)} * nh + ht.op(h, fv[x])] += c;
          next[std::size_t{gt.op(a, gt.inverse(x))} * nh + ht.op(h, ht.inverse(fv[x]))] += c;
        }
      }
    }
    cur.swap(next);
  }
  return cur;
}

GroupElement solve_last(const Group& g, const GroupElement& prefix, const GroupElement& target, Sign s) {
  const GroupElement need = g.op(g.inverse(prefix), target);
  return s == Sign::Plus ? need : g.inverse(need);
}

Sign draw_sign(Rng& rng) { return rng.coin() ? Sign::Minus : Sign::Plus; }

}  // namespace

std::vector<std::uint64_t> signed_sum_counts(const Group& g, std::uint32_t k) {
  guard_tuples(g, k);
  const std::uint64_t n = g.order();
  std::vector<GroupElement> elems(n);
  for (std::uint64_t i = 0; i < n; ++i) elems[i] = g.element_at(i);
  std::vector<std::uint64_t> counts(n, 0);
  // Plain odometer over (sign, element) choices so the count is independent of any table.
  std::vector<std::uint64_t> digit(k, 0);
  const std::uint64_t radix = 2 * n;
  while (true) {
    GroupElement s = g.identity();
    for (std::uint32_t i = 0; i < k; ++i) {
      const GroupElement& x = elems[digit[i] % n];
      s = g.op(s, digit[i] < n ? x : g.inverse(x));
    }
    ++counts[g.index_of(s)];
    std::uint32_t i = 0;
    while (i < k && ++digit[i] == radix) digit[i++] = 0;
    if (i == k) break;
  }
  return counts;
}

Rational exact_rejection_probability(const FunctionTable& f, std::uint32_t k) {
  if (k == 0) throw DomainError("k must be at least 1");
  const std::uint32_t len = 2 * k;
  guard_tuples(*f.domain(), len);
  const Group& g = *f.domain();
  const Group& h = *f.codomain();
  const auto counts = sum_vote_counts(f, len);
  const std::uint64_t nh = h.order();
  std::uint64_t bad = 0, total = 0;
  for (std::uint64_t a = 0; a < g.order(); ++a) {
    const std::uint64_t fa = h.index_of(f.eval(g.element_at(a)));
    for (std::uint64_t v = 0; v < nh; ++v) {
      total += counts[a * nh + v];
      if (v != fa) bad += counts[a * nh + v];
    }
  }
  return Rational(static_cast<std::int64_t>(bad), static_cast<std::int64_t>(total));
}

SignedTuple fix_a_from_choices(const Group& g, const GroupElement& a, const std::vector<Sign>& signs,
                               const std::vector<GroupElement>& first) {
  if (signs.empty() || first.size() + 1 != signs.size()) throw DomainError("need k2 signs and k2-1 elements");
  SignedTuple t;
  GroupElement prefix = g.identity();
  for (std::size_t i = 0; i < first.size(); ++i) {
    t.entries.push_back({signs[i], first[i]});
    prefix = g.op(prefix, signed_apply(g, signs[i], first[i]));
  }
  t.entries.push_back({signs.back(), solve_last(g, prefix, a, signs.back())});
  return t;
}

SignedTuple sample_fix_a(const Group& g, const GroupElement& a, std::uint32_t k2, Rng& rng) {
  if (k2 < 2) throw DomainError("k2 must be at least 2");
  std::vector<Sign> signs(k2);
  for (auto& s : signs) s = draw_sign(rng);
  std::vector<GroupElement> first(k2 - 1);
  for (auto& x : first) x = g.sample(rng);
  return fix_a_from_choices(g, a, signs, first);
}

SignedTuple alternative_from_choices(const Group& g, const GroupElement& a, const GroupElement& z,
                                     const std::vector<Sign>& signs, const std::vector<GroupElement>& left_first,
                                     const std::vector<GroupElement>& right_first) {
  const std::size_t k = signs.size() / 2;
  if (signs.size() % 2 != 0 || k == 0 || left_first.size() + 1 != k || right_first.size() + 1 != k) {
    throw DomainError("need 2k signs and k-1 elements per half");
  }
  const std::vector<Sign> ls(signs.begin(), signs.begin() + k), rs(signs.begin() + k, signs.end());
  SignedTuple left = fix_a_from_choices(g, g.op(a, g.inverse(z)), ls, left_first);
  SignedTuple right = fix_a_from_choices(g, z, rs, right_first);
  left.entries.insert(left.entries.end(), right.entries.begin(), right.entries.end());
  return left;
}

SignedTuple sample_fix_a_alternative(const Group& g, const GroupElement& a, std::uint32_t k2, Rng& rng) {
  if (k2 < 2 || k2 % 2 != 0) throw DomainError("k2 must be even and at least 2");
  const std::uint32_t k = k2 / 2;
  const GroupElement z = g.sample(rng);
  std::vector<Sign> signs(k2);
  for (auto& s : signs) s = draw_sign(rng);
  std::vector<GroupElement> left(k - 1), right(k - 1);
  for (auto& x : left) x = g.sample(rng);
  for (auto& x : right) x = g.sample(rng);
  return alternative_from_choices(g, a, z, signs, left, right);
}

CorrectorReport corrector(const FunctionTable& f, std::uint32_t k2, CorrectorMode mode, Rng& rng) {
  if (k2 < 2) throw DomainError("k2 must be at least 2");
  const Group& g = *f.domain();
  const Group& h = *f.codomain();
  if (!g.order_fits() || g.order() > kDenseCap || !h.order_fits()) {
    throw ResourceError("corrector needs a dense-sized domain, got " + g.to_string());
  }
  const std::uint64_t ng = g.order(), nh = h.order();
  CorrectorReport r;
  r.exact = mode.exact;
  r.eta_per_element.assign(ng, 0.0);
  std::vector<GroupElement> gvals(ng);
  std::vector<GroupElement> fvals(ng);
  for (std::uint64_t a = 0; a < ng; ++a) fvals[a] = f.eval(g.element_at(a));

  if (mode.exact) {
    guard_tuples(g, k2);
    const auto counts = sum_vote_counts(f, k2);
    std::uint64_t bad = 0, total = 0;
    r.eta_exact.assign(ng, Rational(0));
    for (std::uint64_t a = 0; a < ng; ++a) {
      std::uint64_t fix = 0, best = 0, best_v = 0;
      const std::uint64_t fa = h.index_of(fvals[a]);
      for (std::uint64_t v = 0; v < nh; ++v) {
        const std::uint64_t c = counts[a * nh + v];
        fix += c;
        if (v != fa) bad += c;
        if (c > best) {
          best = c;
          best_v = v;
        }
      }
      total += fix;
      gvals[a] = h.element_at(best_v);
      r.eta_exact[a] = Rational(static_cast<std::int64_t>(fix - best), static_cast<std::int64_t>(fix));
      r.eta_per_element[a] = r.eta_exact[a].to_double();
    }
    r.mu_exact = Rational(static_cast<std::int64_t>(bad), static_cast<std::int64_t>(total));
    r.mu = r.mu_exact->to_double();
  } else {
    if (mode.samples == 0) throw DomainError("Monte-Carlo corrector needs samples > 0");
    for (std::uint64_t a = 0; a < ng; ++a) {
      const GroupElement target = g.element_at(a);
      Rng ra = rng.split(a);
      std::unordered_map<std::uint64_t, std::uint64_t> votes;
      for (std::uint64_t s = 0; s < mode.samples; ++s) {
        const SignedTuple t = sample_fix_a(g, target, k2, ra);
        GroupElement vote = h.identity();
        for (const auto& term : t.entries) vote = h.op(vote, apply_multiplier(h, term.mult, f.eval(term.element)));
        ++votes[h.index_of(vote)];
      }
      std::uint64_t best = 0, best_v = 0;
      for (const auto& [v, c] : votes) {
        if (c > best || (c == best && v < best_v)) {
          best = c;
          best_v = v;
        }
      }
      gvals[a] = h.element_at(best_v);
      r.eta_per_element[a] = 1.0 - static_cast<double>(best) / static_cast<double>(mode.samples);
    }
    // mu: random signs test with k2 points, evaluated directly on f.
    Rng rm = rng.split(ng);
    const std::uint64_t trials = mode.samples * ng;
    std::uint64_t rejects = 0;
    for (std::uint64_t s = 0; s < trials; ++s) {
      GroupElement point = g.identity(), vote = h.identity();
      std::vector<GroupElement> xs(k2);
      for (auto& x : xs) x = g.sample(rm);
      for (std::uint32_t i = 0; i < k2; ++i) {
        const Sign sg = draw_sign(rm);
        point = g.op(point, signed_apply(g, sg, xs[i]));
        vote = h.op(vote, signed_apply(h, sg, f.eval(xs[i])));
      }
      if (!(f.eval(point) == vote)) ++rejects;
    }
    r.mu = static_cast<double>(rejects) / static_cast<double>(trials);
    r.mu_standard_error = std::sqrt(r.mu * (1.0 - r.mu) / static_cast<double>(trials));
  }

  r.eta_max = *std::max_element(r.eta_per_element.begin(), r.eta_per_element.end());
  std::uint64_t diff = 0;
  for (std::uint64_t a = 0; a < ng; ++a) diff += !(gvals[a] == fvals[a]);
  r.delta = Rational(static_cast<std::int64_t>(diff), static_cast<std::int64_t>(ng));
  r.g = FunctionTable::dense(f.domain(), f.codomain(), std::move(gvals));
  r.g_is_hom = is_homomorphism(*r.g);
  return r;
}

std::string corrector_json(const CorrectorReport& r, const Group& domain) {
  nlohmann::json j;
  j["mu"] = r.mu;
  if (r.mu_exact) j["mu_exact"] = r.mu_exact->to_string();
  if (!r.exact) j["mu_standard_error"] = r.mu_standard_error;
  nlohmann::json eta = nlohmann::json::object();
  for (std::size_t a = 0; a < r.eta_per_element.size() && a < 4096; ++a) {
    eta[domain.format(domain.element_at(a))] = r.eta_per_element[a];
  }
  j["eta_per_element"] = std::move(eta);
  j["eta_max"] = r.eta_max;
  j["delta"] = r.delta.to_string();
  j["g_is_hom"] = r.g_is_hom;
  j["exact"] = r.exact;
  return j.dump();
}

FlatnessReport flatness_probe(const GroupPtr& gp, const FunctionTable* f, const FlatnessOptions& o, Rng& rng) {
  const Group& g = *gp;
  const std::uint32_t m = o.m;
  if (m < 2 || m % 2 != 0 || m > 24) throw DomainError("flatness probe needs an even m in [2, 24]");
  const bool coeffs = o.variant == FlatnessVariant::Coefficients;
  if (coeffs && !g.is_vector_space()) throw DomainError("coefficient variant needs a vector-space group");
  const std::uint32_t q = coeffs ? g.prime() - 1 : 2;  // multipliers per chosen point
  FlatnessReport r;
  r.variant = o.variant;
  r.m = m;
  r.samples_of_X = o.x_draws;
  r.regime_ok = coeffs ? prime_uses_online_branch(g, m) : general_uses_online_branch(g, m);
  const std::uint64_t subsets = binomial(m, m / 2);
  std::uint64_t mult_patterns = 1;
  for (std::uint32_t i = 0; i < m / 2; ++i) mult_patterns *= q;
  r.full_support = coeffs ? subsets * mult_patterns : subsets;
  // Signs: y ranges over (subset, full sign vector); coefficients: (subset, coefficients on it).
  const std::uint64_t combos = coeffs ? subsets * mult_patterns : subsets * (std::uint64_t{1} << m);
  r.exact_conditional = combos <= (std::uint64_t{1} << 20);
  const auto masks = half_masks(m);

  auto chosen_sum = [&](const std::vector<GroupElement>& xs, std::uint32_t mask, auto mult_of) {
    GroupElement y = g.identity();
    std::uint32_t pos = 0;
    for (std::uint32_t j = 0; j < m; ++j) {
      if (mask >> j & 1) y = g.op(y, apply_multiplier(g, mult_of(j, pos++), xs[j]));
    }
    return y;
  };
  auto sign_of = [](std::uint32_t sigma) {
    return [sigma](std::uint32_t j, std::uint32_t) -> Multiplier { return (sigma >> j & 1) ? Sign::Minus : Sign::Plus; };
  };
  auto coeff_of = [q](std::uint64_t pattern) {
    return [pattern, q](std::uint32_t, std::uint32_t pos) -> Multiplier {
      std::uint64_t v = pattern;
      for (std::uint32_t i = 0; i < pos; ++i) v /= q;
      return Coefficient{static_cast<std::uint32_t>(1 + v % q)};
    };
  };

  std::uint64_t deficits = 0, independent = 0;
  r.min_support_non_deficit = UINT64_MAX;
  for (std::uint64_t d = 0; d < o.x_draws; ++d) {
    Rng rx = rng.split(d);
    std::vector<GroupElement> xs(m);
    for (auto& x : xs) x = g.sample(rx);
    std::unordered_map<GroupElement, std::uint64_t, GroupElementHash> mass;
    bool deficit = false;
    std::uint64_t support = 0;
    std::uint64_t total = 0;
    if (coeffs) {
      if (rank(g, xs) == m) ++independent;
      if (r.exact_conditional) {
        for (auto mask : masks) {
          for (std::uint64_t pat = 0; pat < mult_patterns; ++pat) ++mass[chosen_sum(xs, mask, coeff_of(pat))];
        }
        total = combos;
      } else {
        for (std::uint64_t s = 0; s < o.tuple_draws; ++s) {
          ++mass[chosen_sum(xs, masks[rx.below(masks.size())], coeff_of(rx.below(mult_patterns)))];
        }
        total = o.tuple_draws;
      }
      support = mass.size();
      deficit = r.exact_conditional ? support < r.full_support : rank(g, xs) < m;
    } else {
      const std::uint64_t sigmas = std::uint64_t{1} << m;
      std::uint64_t min_distinct = UINT64_MAX;
      auto sigma_support = [&](std::uint32_t sigma, bool record) {
        std::vector<GroupElement> ys;
        ys.reserve(masks.size());
        for (auto mask : masks) {
          ys.push_back(chosen_sum(xs, mask, sign_of(sigma)));
          if (record) ++mass[ys.back()];
        }
        std::sort(ys.begin(), ys.end(), [](const GroupElement& a, const GroupElement& b) { return a.bytes < b.bytes; });
        return static_cast<std::uint64_t>(std::unique(ys.begin(), ys.end()) - ys.begin());
      };
      if (r.exact_conditional) {
        for (std::uint64_t sigma = 0; sigma < sigmas; ++sigma) {
          min_distinct = std::min(min_distinct, sigma_support(static_cast<std::uint32_t>(sigma), true));
        }
        total = combos;
      } else {
        for (std::uint64_t s = 0; s < std::min<std::uint64_t>(sigmas, 64); ++s) {
          min_distinct = std::min(min_distinct, sigma_support(static_cast<std::uint32_t>(rx.below(sigmas)), false));
        }
        for (std::uint64_t s = 0; s < o.tuple_draws; ++s) {
          ++mass[chosen_sum(xs, masks[rx.below(masks.size())], sign_of(static_cast<std::uint32_t>(rx.below(sigmas))))];
        }
        total = o.tuple_draws;
      }
      support = min_distinct;
      deficit = min_distinct < subsets;
    }
    std::uint64_t peak = 0;
    for (const auto& [y, c] : mass) peak = std::max(peak, c);
    const double max_mass = static_cast<double>(peak) / static_cast<double>(total);
    r.per_X_max_mass.push_back(max_mass);
    r.per_X_deficit.push_back(deficit);
    if (deficit) {
      ++deficits;
    } else {
      r.max_mass_non_deficit = std::max(r.max_mass_non_deficit, max_mass);
      r.min_support_non_deficit = std::min(r.min_support_non_deficit, support);
    }
  }
  if (r.min_support_non_deficit == UINT64_MAX) r.min_support_non_deficit = 0;
  r.support_deficit_fraction = o.x_draws ? static_cast<double>(deficits) / static_cast<double>(o.x_draws) : 0.0;
  r.independent_fraction = o.x_draws ? static_cast<double>(independent) / static_cast<double>(o.x_draws) : 0.0;
  r.alpha_empirical = r.max_mass_non_deficit;
  r.beta_empirical = r.support_deficit_fraction;

  if (f != nullptr && o.agreement_k > 0) {
    Rng ra = rng.split(o.x_draws);
    if (f->base()) {
      r.agreement_probabilities = agreement_probabilities(*f, *f->base(), o.agreement_k, o.agreement_draws, ra);
    } else {
      const DistanceResult d = distance_to_hom(*f);
      r.agreement_probabilities = agreement_probabilities(*f, d.nearest, o.agreement_k, o.agreement_draws, ra);
    }
  }
  return r;
}

std::string flatness_csv(const FlatnessReport& r) {
  std::ostringstream out;
  out << "x_draw,max_mass,deficit\n";
  for (std::size_t i = 0; i < r.per_X_max_mass.size(); ++i) {
    out << i << ',' << r.per_X_max_mass[i] << ',' << (r.per_X_deficit[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string flatness_json(const FlatnessReport& r) {
  nlohmann::json j;
  j["variant"] = r.variant == FlatnessVariant::Signs ? "signs" : "coeffs";
  j["m"] = r.m;
  j["samples_of_X"] = r.samples_of_X;
  j["support_deficit_fraction"] = r.support_deficit_fraction;
  j["full_support"] = r.full_support;
  j["max_mass_non_deficit"] = r.max_mass_non_deficit;
  j["min_support_non_deficit"] = r.min_support_non_deficit;
  if (r.variant == FlatnessVariant::Coefficients) j["independent_fraction"] = r.independent_fraction;
  j["alpha_empirical"] = r.alpha_empirical;
  j["beta_empirical"] = r.beta_empirical;
  j["agreement_probabilities"] = r.agreement_probabilities;
  j["regime_ok"] = r.regime_ok;
  j["exact_conditional"] = r.exact_conditional;
  return j.dump();
}

std::vector<double> agreement_probabilities(const FunctionTable& f, const Homomorphism& h, std::uint32_t K,
                                            std::uint64_t draws, Rng& rng) {
  const Group& g = *f.domain();
  const Group& hc = *f.codomain();
  std::vector<double> out;
  for (std::uint32_t k = 1; k <= K; ++k) {
    Rng rk = rng.split(k);
    std::uint64_t agree = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      GroupElement u = hc.identity(), v = hc.identity();
      for (std::uint32_t i = 0; i < k; ++i) {
        const GroupElement x = g.sample(rk);
        const Sign s = draw_sign(rk);
        u = hc.op(u, signed_apply(hc, s, f.eval(x)));
        v = hc.op(v, signed_apply(hc, s, h(x)));
      }
      agree += u == v;
    }
    out.push_back(static_cast<double>(agree) / static_cast<double>(draws));
  }
  return out;
}

std::vector<double> agreement_probabilities_exact(const FunctionTable& f, const Homomorphism& h, std::uint32_t K) {
  const CayleyTable gt(f.domain());
  const CayleyTable ht(f.codomain());
  const std::uint32_t ng = gt.size(), nh = ht.size();
  // Weight of each (sigma f(x), sigma h(x)) pair for one uniform signed draw.
  std::vector<double> w(std::size_t{nh} * nh, 0.0);
  const double unit = 1.0 / (2.0 * ng);
  for (std::uint32_t x = 0; x < ng; ++x) {
    const auto u = static_cast<std::uint32_t>(f.codomain()->index_of(f.eval(gt.element(x))));
    const auto v = static_cast<std::uint32_t>(f.codomain()->index_of(h(gt.element(x))));
    w[std::size_t{u} * nh + v] += unit;
    w[std::size_t{ht.inverse(u)} * nh + ht.inverse(v)] += unit;
  }
  std::vector<double> cur(std::size_t{nh} * nh, 0.0), next(cur.size());
  cur[std::size_t{ht.identity()} * nh + ht.identity()] = 1.0;
  std::vector<double> out;
  for (std::uint32_t k = 1; k <= K; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t a = 0; a < nh; ++a) {
      for (std::uint32_t b = 0; b < nh; ++b) {
        const double c = cur[std::size_t{a} * nh + b];
        if (c == 0.0) continue;
        for (std::uint32_t u = 0; u < nh; ++u) {
          for (std::uint32_t v = 0; v < nh; ++v) {
            const double wt = w[std::size_t{u} * nh + v];
            if (wt != 0.0) next[std::size_t{ht.op(a, u)} * nh + ht.op(b, v)] += c * wt;
          }
        }
      }
    }
    cur.swap(next);
    double p = 0.0;
    for (std::uint32_t a = 0; a < nh; ++a) p += cur[std::size_t{a} * nh + a];
    out.push_back(p);
  }
  return out;
}

double linear_independence_probability(std::uint32_t p, std::uint32_t n, std::uint64_t draws, Rng& rng) {
  const GroupPtr g = Group::vector_space(p, n);
  const std::uint32_t r = (n + 1) / 2;
  std::uint64_t hits = 0;
  std::vector<GroupElement> xs(r);
  for (std::uint64_t d = 0; d < draws; ++d) {
    for (auto& x : xs) x = g->sample(rng);
    hits += rank(*g, xs) == r;
  }
  return draws ? static_cast<double>(hits) / static_cast<double>(draws) : 0.0;
}

double linear_independence_exact(std::uint32_t p, std::uint32_t n) {
  const std::uint32_t r = (n + 1) / 2;
  double prod = 1.0;
  for (std::uint32_t i = 0; i < r; ++i) prod *= 1.0 - std::pow(static_cast<double>(p), static_cast<double>(i) - n);
  return prod;
}

double binomial_even_probability(std::uint32_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  return (1.0 + std::pow(1.0 - 2.0 * p, static_cast<double>(n))) / 2.0;
}

Rational binomial_even_probability_exact(std::uint32_t n, Rational p) {
  if (p < Rational(0) || p > Rational(1)) throw DomainError("p must lie in [0, 1]");
  Rational pw(1);
  const Rational base = Rational(1) - Rational(2) * p;
  for (std::uint32_t i = 0; i < n; ++i) pw = pw * base;
  return (Rational(1) + pw) / Rational(2);
}

Rational binomial_even_by_enumeration(std::uint32_t n, Rational p) {
  if (p < Rational(0) || p > Rational(1)) throw DomainError("p must lie in [0, 1]");
  if (n > 20) throw ResourceError("enumeration limited to n <= 20");
  const Rational q = Rational(1) - p;
  Rational total(0);
  for (std::uint32_t outcome = 0; outcome < (1u << n); ++outcome) {
    if (std::popcount(outcome) % 2 != 0) continue;
    Rational pr(1);
    for (std::uint32_t i = 0; i < n; ++i) pr = pr * ((outcome >> i & 1) ? p : q);
    total = total + pr;
  }
  return total;
}

double zeta_upper_bound(double x) {
  if (!(x >= 2.0)) throw DomainError("zeta bound needs x >= 2");
  return 1.0 + 1.0 / (std::exp2(x - 1.0) - 1.0);
}

double zeta_partial(double x, std::uint64_t terms) {
  if (!(x > 1.0)) throw DomainError("zeta series needs x > 1");
  double s = 0.0;
  for (std::uint64_t j = terms; j >= 1; --j) s += std::pow(static_cast<double>(j), -x);
  return s;
}

double zeta_tail_bound(double x, std::uint64_t terms) {
  if (!(x > 1.0) || terms == 0) throw DomainError("zeta tail needs x > 1 and terms >= 1");
  return std::pow(static_cast<double>(terms), 1.0 - x) / (x - 1.0);
}

}  // namespace homtest
