#include <algorithm>
#include <unordered_set>

#include "homtest/errors.hpp"
#include "homtest/oracle.hpp"
#include "homtest/subgroup.hpp"

namespace homtest {

namespace {

Manipulation make_move(const OnlineOracle& view, const GroupElement& target, Rng& rng) {
  if (view.settings().mode == Mode::Erasure) return {target, std::nullopt};
  return {target, corrupt_value(view, target, rng)};
}

class NullStrategy final : public AdversaryStrategy {
 public:
  std::string name() const override { return "null"; }
  std::vector<Manipulation> respond(const Transcript&, std::uint64_t, const OnlineOracle&) override { return {}; }
};

class UniformEraser final : public AdversaryStrategy {
 public:
  explicit UniformEraser(Rng rng) : rng_(rng) {}
  std::string name() const override { return "uniform"; }

  std::vector<Manipulation> respond(const Transcript&, std::uint64_t budget, const OnlineOracle& view) override {
    std::vector<Manipulation> moves;
    std::vector<GroupElement> picked;
    const Group& g = view.domain();
    auto fresh = [&](const GroupElement& x) { return !view.is_manipulated(x) && std::find(picked.begin(), picked.end(), x) == picked.end(); };
    while (moves.size() < budget) {
      if (g.order_fits() && view.manipulated_count() + picked.size() >= g.order()) break;
      std::optional<GroupElement> choice;
      for (int attempt = 0; attempt < 64 && !choice && !pool_built_; ++attempt) {
        GroupElement x = g.sample(rng_);
        if (fresh(x)) choice = x;
      }
      if (!choice) {
        // Dense region: switch for good to an explicit list that holds every untouched
        // point (and possibly some touched ones, dropped lazily).
        if (!g.order_fits() || g.order() > kDenseCap) break;
        if (!pool_built_) {
          pool_.resize(g.order());
          for (std::uint64_t i = 0; i < g.order(); ++i) pool_[i] = i;
          pool_built_ = true;
        }
        while (!pool_.empty() && !choice) {
          const std::uint64_t j = rng_.below(pool_.size());
          GroupElement x = g.element_at(pool_[j]);
          pool_[j] = pool_.back();
          pool_.pop_back();
          if (fresh(x)) choice = x;
        }
        if (!choice) break;
      }
      picked.push_back(*choice);
      moves.push_back(make_move(view, *choice, rng_));
    }
    return moves;
  }

 private:
  Rng rng_;
  std::vector<std::uint64_t> pool_;
  bool pool_built_ = false;
};

// Targets signed combinations of the most recent queries that include the newest one,
// pairs first, all-plus sign patterns first.
class SumHunter final : public AdversaryStrategy {
 public:
  SumHunter(std::uint32_t w, Rng rng) : w_(w), rng_(rng) {
    if (w < 2) throw DomainError("sum_hunter needs w >= 2");
  }
  std::string name() const override { return "sum_hunter(" + std::to_string(w_) + ")"; }

  std::vector<Manipulation> respond(const Transcript& transcript, std::uint64_t budget,
                                    const OnlineOracle& view) override {
    std::vector<Manipulation> moves;
    const auto& entries = transcript.entries();
    if (budget == 0 || entries.size() < 2) return moves;
    const Group& g = view.domain();
    const std::size_t newest = entries.size() - 1;
    const std::size_t older = std::min<std::size_t>(w_ - 1, newest);
    std::unordered_set<GroupElement, GroupElementHash> picked;
    for (std::size_t size = 2; size <= older + 1 && moves.size() < budget; ++size) {
      // Subsets of the `older` previous queries with size-1 members, most recent first.
      for (std::uint32_t mask = 0; mask < (1u << older) && moves.size() < budget; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != size - 1) continue;
        std::vector<std::size_t> pos;
        for (std::size_t b = older; b-- > 0;) {
          if ((mask >> b) & 1u) pos.push_back(newest - 1 - b);
        }
        pos.push_back(newest);
        for (std::uint32_t signs = 0; signs < (1u << size) && moves.size() < budget; ++signs) {
          GroupElement sum = g.identity();
          for (std::size_t i = 0; i < size; ++i) {
            const GroupElement& x = entries[pos[i]].query;
            sum = g.op(sum, ((signs >> i) & 1u) ? g.inverse(x) : x);
          }
          if (view.is_manipulated(sum) || !picked.insert(sum).second) continue;
          moves.push_back(make_move(view, sum, rng_));
        }
      }
    }
    return moves;
  }

 private:
  std::uint32_t w_;
  Rng rng_;
};

// Erases span(queries) minus the queries, walking the span in canonical order. The
// cursor stays valid until the span grows, at which point the walk restarts.
class SpanEraser final : public AdversaryStrategy {
 public:
  SpanEraser(std::uint32_t p, Rng rng) : p_(p), rng_(rng) {}
  std::string name() const override { return "span_eraser"; }

  std::vector<Manipulation> respond(const Transcript& transcript, std::uint64_t budget,
                                    const OnlineOracle& view) override {
    const Group& g = view.domain();
    if (!g.is_vector_space() || g.prime() != p_) {
      throw DomainError("span_eraser needs an F_" + std::to_string(p_) + " vector-space domain");
    }
    if (!basis_) basis_.emplace(g);
    const GroupElement& q = transcript.back().query;
    queried_.insert(q);
    if (basis_->insert(q)) {
      cursor_.assign(basis_->rank(), 0);
      exhausted_ = false;
    }
    std::vector<Manipulation> moves;
    while (moves.size() < budget && !exhausted_) {
      GroupElement x = basis_->combine(cursor_);
      advance();
      if (queried_.count(x) || view.is_manipulated(x)) continue;
      moves.push_back(make_move(view, x, rng_));
    }
    return moves;
  }

 private:
  void advance() {
    for (auto& c : cursor_) {
      if (++c < p_) return;
      c = 0;
    }
    exhausted_ = true;
  }

  std::uint32_t p_;
  Rng rng_;
  std::optional<SpanBasis> basis_;
  std::unordered_set<GroupElement, GroupElementHash> queried_;
  std::vector<std::uint32_t> cursor_;
  bool exhausted_ = true;
};

}  // namespace

std::unique_ptr<AdversaryStrategy> strategy_null() { return std::make_unique<NullStrategy>(); }

std::unique_ptr<AdversaryStrategy> strategy_uniform_eraser(Rng rng) { return std::make_unique<UniformEraser>(rng); }

std::unique_ptr<AdversaryStrategy> strategy_sum_hunter(std::uint32_t w, Rng rng) {
  return std::make_unique<SumHunter>(w, rng);
}

std::unique_ptr<AdversaryStrategy> strategy_span_eraser(std::uint32_t p, Rng rng) {
  return std::make_unique<SpanEraser>(p, rng);
}

bool strategy_applicable(const StrategySpec& spec, const Group& domain) {
  if (spec.name == "span_eraser") return domain.is_vector_space();
  return spec.name == "null" || spec.name == "uniform" || spec.name == "sum_hunter";
}

std::unique_ptr<AdversaryStrategy> make_strategy(const StrategySpec& spec, const Group& domain, Rng rng) {
  if (spec.name == "null") return strategy_null();
  if (spec.name == "uniform") return strategy_uniform_eraser(rng);
  if (spec.name == "sum_hunter") return strategy_sum_hunter(spec.w, rng);
  if (spec.name == "span_eraser") {
    if (!domain.is_vector_space()) throw DomainError("span_eraser needs a vector-space domain, got " + domain.to_string());
    return strategy_span_eraser(domain.prime(), rng);
  }
  throw ConfigError("unknown adversary strategy '" + spec.name + "'");
}

}  // namespace homtest
