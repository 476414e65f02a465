#include <algorithm>

#include "homtest/harness.hpp"
#include "homtest/subgroup.hpp"

namespace homtest {

namespace {

constexpr std::uint64_t kPoolSize = 32;
constexpr std::uint64_t kDenseZooOrder = 4096;

std::vector<FunctionTable> hom_pool(const GroupPtr& g, const GroupPtr& h, Rng rng) {
  std::vector<Homomorphism> homs;
  if (g->is_vector_space() && h->abelian()) {
    for (std::uint64_t i = 0; i < kPoolSize; ++i) homs.push_back(random_homomorphism(g, h, rng));
  } else {
    homs = enumerate_homomorphisms(g, h);
  }
  std::vector<FunctionTable> out;
  for (auto& hom : homs) {
    if (g->order_fits() && g->order() <= kDenseZooOrder) {
      out.push_back(hom.to_function());
    } else {
      out.push_back(FunctionTable::implicit(hom, 0, 0.0));
    }
  }
  return out;
}

bool online_family(const std::string& name) { return name == "online-signs" || name == "online-coeffs"; }

}  // namespace

std::vector<std::pair<std::string, std::string>> zoo_pairs() {
  // The last pair has coprime orders, so its only homomorphism is trivial and the
  // zero tester applies.
  return {{"Z5", "Z5"}, {"Z6", "Z4"}, {"F2^8", "F2"}, {"F3^4", "F3^2"}, {"S4", "Z2"},
          {"D4", "Z2"}, {"F2^16", "Z6"}, {"F3^2", "F2"}};
}

std::vector<ZooCell> run_zoo(const ZooOptions& options) {
  const std::uint64_t trials = options.quick ? std::min<std::uint64_t>(options.trials, 300) : options.trials;
  const std::uint64_t unforced = options.quick ? std::min<std::uint64_t>(options.unforced_trials, 10)
                                               : options.unforced_trials;
  const Rng root(options.seed);
  std::vector<ZooCell> cells;
  std::uint64_t cell_id = 0;
  for (const auto& [ds, cs] : zoo_pairs()) {
    const GroupPtr g = Group::parse(ds);
    const GroupPtr h = Group::parse(cs);
    const std::vector<FunctionTable> pool = hom_pool(g, h, root.split(~cell_id));
    std::optional<double> e_of_g = exact_E(*g);
    if (!e_of_g) {
      Rng re = root.split(~cell_id - 1);
      e_of_g = estimate_E(*g, 2000, re).e_estimate;
    }
    std::vector<std::string> strategies = {"null", "uniform", "sum_hunter"};
    if (g->is_vector_space()) strategies.push_back("span_eraser");
    for (const auto& name : tester_names()) {
      if (!tester_applicable(name, *g, *h)) continue;
      // Online testers run at a forced m in the full matrix and at their own m in a
      // reduced-trial pass.
      std::vector<bool> passes = {true};
      if (online_family(name)) passes.push_back(false);
      for (bool forced_pass : passes) {
        for (const auto& strat : strategies) {
          for (std::uint64_t t : {0, 1, 4}) {
            ZooCell cell{ds, cs, name, strat, t, 0, 0, false};
            cell.trials = forced_pass ? trials : unforced;
            TesterSpec spec;
            spec.name = name;
            spec.t = t;
            spec.e_of_g = e_of_g;
            if (online_family(name) && forced_pass) spec.overrides.force_m = options.forced_m;
            const StrategySpec sspec{strat, 2};
            const OracleSettings settings{Mode::Erasure, Schedule::BudgetManaging, t};
            const Rng cr = root.split(cell_id++);
            for (std::uint64_t i = 0; i < cell.trials; ++i) {
              const Rng tr = cr.split(i);
              Rng ri = tr.split(0), rs = tr.split(1), rt = tr.split(2);
              const FunctionTable& f = pool[ri.below(pool.size())];
              OnlineOracle oracle(f, settings, make_strategy(sspec, *g, rs));
              const Verdict v = run_tester(spec, oracle, rt);
              cell.accepts += v.accepted();
              cell.forced = cell.forced || v.forced;
            }
            cells.push_back(cell);
          }
        }
      }
    }
  }
  return cells;
}

}  // namespace homtest
