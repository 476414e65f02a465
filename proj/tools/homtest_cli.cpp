#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "homtest/analysis.hpp"
#include "homtest/errors.hpp"
#include "homtest/harness.hpp"
#include "homtest/kernels.hpp"
#include "homtest/subgroup.hpp"
#include "json.hpp"

using namespace homtest;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& line, const std::string& path) {
  if (path.empty()) {
    std::cout << line << '\n';
    return;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot write " + path);
  out << line << '\n';
}

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed, trials, t, k, m;
  std::optional<std::uint32_t> workers;
  std::string domain, codomain, tester, instance, epsilon, instance_epsilon, adversary, mode, schedule;
};

int cmd_run(const RunFlags& f) {
  json j = f.config.empty() ? json::object() : json::parse(read_file(f.config), nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  if (f.seed) j["seed"] = *f.seed;
  if (f.trials) j["trials"] = *f.trials;
  if (f.workers) j["workers"] = *f.workers;
  if (f.t) j["t"] = *f.t;
  if (!f.domain.empty()) j["group_domain"] = f.domain;
  if (!f.codomain.empty()) j["group_codomain"] = f.codomain;
  if (!f.tester.empty()) j["tester"]["name"] = f.tester;
  if (f.k) j["tester"]["k"] = *f.k;
  if (f.m) j["tester"]["m"] = *f.m;
  if (!f.epsilon.empty()) j["tester"]["epsilon"] = f.epsilon;
  if (!f.instance.empty()) j["instance"]["kind"] = f.instance;
  if (!f.instance_epsilon.empty()) j["instance"]["epsilon"] = f.instance_epsilon;
  if (!f.adversary.empty()) j["adversary"]["name"] = f.adversary;
  if (!f.mode.empty()) j["adversary"]["mode"] = f.mode;
  if (!f.schedule.empty()) j["adversary"]["schedule"] = f.schedule;
  if (!f.out.empty()) j["output"]["path"] = f.out;
  const ExperimentConfig cfg = config_from_json(j.dump());
  const ExperimentReport r = run_experiment(cfg);
  emit(report_json(r), cfg.output_path);
  return 0;
}

int cmd_zoo(const ZooOptions& o, bool verbose) {
  const auto cells = run_zoo(o);
  std::uint64_t failed = 0;
  for (const auto& c : cells) {
    if (!c.passed()) ++failed;
    if (verbose || !c.passed()) {
      std::printf("%s %s->%s tester=%s adversary=%s t=%llu accepted %llu/%llu%s\n", c.passed() ? "ok  " : "FAIL",
                  c.domain.c_str(), c.codomain.c_str(), c.tester.c_str(), c.strategy.c_str(),
                  static_cast<unsigned long long>(c.t), static_cast<unsigned long long>(c.accepts),
                  static_cast<unsigned long long>(c.trials), c.forced ? " (forced m)" : "");
    }
  }
  std::printf("zoo: %zu cells, %llu failed\n", cells.size(), static_cast<unsigned long long>(failed));
  return failed ? 1 : 0;
}

int cmd_formulas() {
  bool ok = true;
  const std::vector<Rational> ps = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
  std::printf("Pr[Bin(n,p) even] = (1 + (1-2p)^n)/2\n");
  for (std::uint32_t n = 0; n <= 12; ++n) {
    std::printf("n=%2u", n);
    for (const auto& p : ps) {
      const Rational closed = binomial_even_probability_exact(n, p);
      const Rational enumerated = binomial_even_by_enumeration(n, p);
      ok = ok && closed == enumerated;
      std::printf("  p=%s: %s%s", p.to_string().c_str(), closed.to_string().c_str(), closed == enumerated ? "" : " MISMATCH");
    }
    std::printf("\n");
  }
  std::printf("zeta(x) <= 1 + 1/(2^(x-1) - 1)\n");
  for (double x : {2.0, 2.5, 3.0, 4.0}) {
    const double partial = zeta_partial(x, 100000);
    const double upper = partial + zeta_tail_bound(x, 100000);
    const double bound = zeta_upper_bound(x);
    ok = ok && upper <= bound;
    std::printf("x=%.1f  partial=%.6f  partial+tail=%.6f  bound=%.6f%s\n", x, partial, upper, bound,
                upper <= bound ? "" : " VIOLATED");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online-manipulation-resilient homomorphism testing experiments"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel set: scalar or avx2");

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run one experiment and append a JSONL report");
  run->add_option("--config", rf.config, "Experiment config (JSON)");
  run->add_option("--out", rf.out, "Output JSONL path (stdout when empty)");
  run->add_option("--seed", rf.seed);
  run->add_option("--trials", rf.trials);
  run->add_option("--workers", rf.workers);
  run->add_option("--t", rf.t, "Adversary budget");
  run->add_option("--domain", rf.domain);
  run->add_option("--codomain", rf.codomain);
  run->add_option("--tester", rf.tester);
  run->add_option("--k", rf.k);
  run->add_option("--m", rf.m);
  run->add_option("--epsilon", rf.epsilon, "Tester distance parameter");
  run->add_option("--instance", rf.instance, "random_hom, shifted_hom, random_function, planted_far, implicit_planted");
  run->add_option("--instance-epsilon", rf.instance_epsilon);
  run->add_option("--adversary", rf.adversary, "null, uniform, sum_hunter, span_eraser");
  run->add_option("--mode", rf.mode, "erasure or corruption");
  run->add_option("--schedule", rf.schedule, "fixed_rate or budget_managing");

  ZooOptions zo;
  zo.seed = 0;
  bool verbose = false;
  auto* zoo = app.add_subcommand("zoo", "Run the completeness matrix");
  zoo->add_flag("--quick", zo.quick, "Desk-scale trial counts");
  zoo->add_option("--trials", zo.trials);
  zoo->add_option("--seed", zo.seed);
  zoo->add_flag("--verbose", verbose, "Print every cell");

  std::string fgroup = "F2^24", fcod, variant = "signs", csv;
  FlatnessOptions fo;
  std::uint64_t fseed = 0;
  auto* probe = app.add_subcommand("probe-flatness", "Conditional law of the last query of the unpredictable tests");
  probe->add_option("--group", fgroup);
  probe->add_option("--codomain", fcod, "When set, agreement probabilities use a planted instance into this group");
  probe->add_option("--variant", variant, "signs or coeffs");
  probe->add_option("--m", fo.m);
  probe->add_option("--x-draws", fo.x_draws);
  probe->add_option("--tuple-draws", fo.tuple_draws);
  probe->add_option("--csv", csv, "Write per-draw max masses here");
  probe->add_option("--seed", fseed);

  std::string egroup = "S5";
  std::uint64_t etrials = 10000, eseed = 0;
  std::vector<double> betas;
  auto* est = app.add_subcommand("estimate-e", "Monte-Carlo E(G) and d^beta(G)");
  est->add_option("--group", egroup);
  est->add_option("--trials", etrials);
  est->add_option("--beta", betas);
  est->add_option("--seed", eseed);

  std::uint32_t lp = 2, ln = 3;
  std::uint64_t lt = 4, ltrials = 100000, lseed = 0;
  std::string policy = "two";
  auto* lb = app.add_subcommand("lowerbound-demo", "Total variation between D+ and D- views");
  lb->add_option("--p", lp);
  lb->add_option("--n", ln);
  lb->add_option("--t", lt);
  lb->add_option("--trials", ltrials);
  lb->add_option("--policy", policy, "two or spanned");
  lb->add_option("--seed", lseed);

  auto* formulas = app.add_subcommand("formulas", "Evaluate the binomial parity and zeta bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!isa.empty()) kernels::select(isa == "scalar" ? kernels::Isa::Scalar : kernels::Isa::Avx2);
    if (*run) return cmd_run(rf);
    if (*zoo) return cmd_zoo(zo, verbose);
    if (*formulas) return cmd_formulas();
    if (*probe) {
      fo.variant = variant == "coeffs" ? FlatnessVariant::Coefficients : FlatnessVariant::Signs;
      if (variant != "signs" && variant != "coeffs") throw ConfigError("variant must be signs or coeffs");
      const GroupPtr g = Group::parse(fgroup);
      Rng rng(fseed);
      std::optional<FunctionTable> f;
      if (!fcod.empty()) {
        InstanceSpec spec;
        spec.kind = InstanceKind::ImplicitPlanted;
        spec.epsilon = Rational(1, 8);
        Rng ri = rng.split(~std::uint64_t{0});
        f = gen_instance(spec, g, Group::parse(fcod), ri);
      }
      const FlatnessReport r = flatness_probe(g, f ? &*f : nullptr, fo, rng);
      std::cout << flatness_json(r) << '\n';
      if (!csv.empty()) {
        std::ofstream out(csv);
        out << flatness_csv(r);
      }
      return 0;
    }
    if (*est) {
      Rng rng(eseed);
      const GroupPtr g = Group::parse(egroup);
      const GeneratorStats s = estimate_E(*g, etrials, rng, betas);
      json j{{"group", s.group}, {"e_estimate", s.e_estimate}, {"e_standard_error", s.e_standard_error},
             {"trials", s.trials}};
      if (auto e = exact_E(*g)) j["e_exact"] = *e;
      for (const auto& [beta, d] : s.d_beta_estimates) j["d_beta"][json(beta).dump()] = d;
      std::cout << j.dump() << '\n';
      return 0;
    }
    if (*lb) {
      const LowerBoundResult r = lowerbound_demo(lp, ln, lt, policy, ltrials, lseed);
      std::cout << json{{"tv", r.tv}, {"distinct_plus", r.distinct_plus}, {"distinct_minus", r.distinct_minus},
                        {"policy", policy}, {"t", lt}, {"trials", ltrials}}
                       .dump()
                << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
