#include "homtest/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "homtest/errors.hpp"
#include "homtest/subgroup.hpp"
#include "json.hpp"

namespace homtest {

using nlohmann::json;

namespace {

Rational rational_from(const json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number()) return Rational::parse(v.dump());
  throw ConfigError("expected a number or fraction string, got " + v.dump());
}

template <class T>
std::optional<T> optional_from(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<T>();
}

template <class T>
json optional_to(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::vector<Sign> parse_signs(const std::string& s) {
  std::vector<Sign> out;
  for (char c : s) {
    if (c == '+') out.push_back(Sign::Plus);
    else if (c == '-') out.push_back(Sign::Minus);
    else throw ConfigError("signs must be a string of '+' and '-'");
  }
  return out;
}

std::string format_signs(const std::vector<Sign>& s) {
  std::string out;
  for (Sign x : s) out += x == Sign::Plus ? '+' : '-';
  return out;
}

struct TrialResult {
  bool accepted = true;
  std::uint64_t queries = 0;
  std::uint64_t erasures = 0;
  bool forced = false;
  std::string branch;
  std::string stratum;
};

std::string stratum_of(const FunctionTable& f, bool& heuristic) {
  if (f.certified_distance()) return f.certified_distance()->to_string();
  if (!f.is_dense()) {
    heuristic = true;
    return "heuristic:" + json(f.noise_rate()).dump();
  }
  try {
    return distance_to_hom(f).distance.to_string();
  } catch (const ResourceError&) {
    return "unknown";
  }
}

bool general_family(const std::string& name) { return name == "online-signs" || name == "dispatch-general"; }
bool prime_family(const std::string& name) { return name == "online-coeffs" || name == "dispatch-prime"; }

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HOMTEST_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end != env && *end == '\0') return v;
    throw ConfigError("HOMTEST_SEED is not an integer: " + std::string(env));
  }
  return 0;
}

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, {"group_domain", "group_codomain", "instance", "tester", "t", "adversary", "trials", "seed",
                       "workers", "range_c", "output"},
                   "config");
    cfg.group_domain = j.value("group_domain", cfg.group_domain);
    cfg.group_codomain = j.value("group_codomain", cfg.group_codomain);
    if (j.contains("instance")) {
      const json& in = j.at("instance");
      reject_unknown(in, {"kind", "epsilon", "shift", "key", "per_trial"}, "instance");
      if (in.contains("kind")) cfg.instance.kind = parse_instance_kind(in.at("kind").get<std::string>());
      if (in.contains("epsilon")) cfg.instance.epsilon = rational_from(in.at("epsilon"));
      cfg.instance.shift = optional_from<std::string>(in, "shift");
      cfg.instance.key = in.value("key", cfg.instance.key);
      cfg.instance.per_trial = in.value("per_trial", cfg.instance.per_trial);
    }
    if (j.contains("tester")) {
      const json& te = j.at("tester");
      reject_unknown(te, {"name", "k", "m", "epsilon", "signs", "e_of_g", "force_m", "force_reps", "force_sample_count"},
                     "tester");
      cfg.tester.name = te.value("name", cfg.tester.name);
      cfg.tester.k = te.value("k", cfg.tester.k);
      cfg.tester.m = te.value("m", cfg.tester.m);
      if (te.contains("epsilon")) cfg.tester.epsilon = rational_from(te.at("epsilon"));
      if (te.contains("signs")) cfg.tester.signs = parse_signs(te.at("signs").get<std::string>());
      cfg.tester.e_of_g = optional_from<double>(te, "e_of_g");
      cfg.tester.overrides.force_m = optional_from<std::uint64_t>(te, "force_m");
      cfg.tester.overrides.force_reps = optional_from<std::uint64_t>(te, "force_reps");
      cfg.tester.overrides.force_sample_count = optional_from<std::uint64_t>(te, "force_sample_count");
    }
    cfg.tester.t = j.value("t", cfg.tester.t);
    if (j.contains("adversary")) {
      const json& ad = j.at("adversary");
      reject_unknown(ad, {"name", "w", "mode", "schedule"}, "adversary");
      cfg.adversary.strategy.name = ad.value("name", cfg.adversary.strategy.name);
      cfg.adversary.strategy.w = ad.value("w", cfg.adversary.strategy.w);
      if (ad.contains("mode")) cfg.adversary.mode = parse_mode(ad.at("mode").get<std::string>());
      if (ad.contains("schedule")) cfg.adversary.schedule = parse_schedule(ad.at("schedule").get<std::string>());
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : default_seed();
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("range_c")) cfg.range_c = rational_from(j.at("range_c"));
    if (j.contains("output")) {
      const json& out = j.at("output");
      reject_unknown(out, {"path", "format"}, "output");
      cfg.output_path = out.value("path", cfg.output_path);
      cfg.output_format = out.value("format", cfg.output_format);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
  if (cfg.workers == 0) throw ConfigError("workers must be at least 1");
  if (cfg.output_format != "jsonl") throw ConfigError("output format must be jsonl");
  try {
    Group::parse(cfg.group_domain);
    Group::parse(cfg.group_codomain);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["group_domain"] = cfg.group_domain;
  j["group_codomain"] = cfg.group_codomain;
  j["instance"] = {{"kind", instance_kind_name(cfg.instance.kind)},
                   {"epsilon", cfg.instance.epsilon.to_string()},
                   {"shift", optional_to(cfg.instance.shift)},
                   {"key", cfg.instance.key},
                   {"per_trial", cfg.instance.per_trial}};
  j["tester"] = {{"name", cfg.tester.name},
                 {"k", cfg.tester.k},
                 {"m", cfg.tester.m},
                 {"epsilon", cfg.tester.epsilon.to_string()},
                 {"signs", format_signs(cfg.tester.signs)},
                 {"e_of_g", optional_to(cfg.tester.e_of_g)},
                 {"force_m", optional_to(cfg.tester.overrides.force_m)},
                 {"force_reps", optional_to(cfg.tester.overrides.force_reps)},
                 {"force_sample_count", optional_to(cfg.tester.overrides.force_sample_count)}};
  j["t"] = cfg.tester.t;
  j["adversary"] = {{"name", cfg.adversary.strategy.name},
                    {"w", cfg.adversary.strategy.w},
                    {"mode", mode_name(cfg.adversary.mode)},
                    {"schedule", schedule_name(cfg.adversary.schedule)}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["range_c"] = cfg.range_c.to_string();
  j["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
  return j.dump();
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw DomainError("successes exceed trials");
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval r{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) r.low = 0.0;
  if (successes == trials) r.high = 1.0;
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  GroupPtr g, h;
  try {
    g = Group::parse(cfg.group_domain);
    h = Group::parse(cfg.group_codomain);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!tester_applicable(cfg.tester.name, *g, *h)) {
    throw ConfigError("tester '" + cfg.tester.name + "' does not apply to " + g->to_string() + " -> " + h->to_string());
  }
  if (!strategy_applicable(cfg.adversary.strategy, *g)) {
    throw ConfigError("adversary '" + cfg.adversary.strategy.name + "' does not apply to " + g->to_string());
  }

  ExperimentReport report;
  const Rng root(cfg.seed);
  TesterSpec tester = cfg.tester;
  if ((tester.name == "generated-subgroup" || tester.name == "dispatch-prime") && !tester.e_of_g) {
    tester.e_of_g = exact_E(*g);
    if (!tester.e_of_g) {
      Rng re = root.split(~std::uint64_t{1});
      tester.e_of_g = estimate_E(*g, 2000, re).e_estimate;
      report.regime_flags.push_back("estimated-E");
    }
  }
  const double c = cfg.range_c.to_double();
  if (general_family(tester.name) || prime_family(tester.name)) {
    const RangeCheck rc = general_family(tester.name) ? general_range_check(*g, tester.epsilon, tester.t, c)
                                                      : prime_range_check(*g, tester.epsilon, tester.t, c);
    report.regime_flags.push_back(rc.within ? "range-check:pass" : "range-check:warn");
  }

  InstanceSpec ispec;
  ispec.kind = cfg.instance.kind;
  ispec.epsilon = cfg.instance.epsilon;
  ispec.key = cfg.instance.key;
  if (cfg.instance.shift) {
    try {
      ispec.shift = h->parse_element(*cfg.instance.shift);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  std::optional<FunctionTable> shared;
  std::string shared_stratum;
  bool heuristic = false;
  if (!cfg.instance.per_trial) {
    Rng ri = root.split(~std::uint64_t{0});
    shared = gen_instance(ispec, g, h, ri);
    shared_stratum = stratum_of(*shared, heuristic);
  }

  const OracleSettings settings{cfg.adversary.mode, cfg.adversary.schedule, tester.t};
  std::vector<TrialResult> results(cfg.trials);
  std::vector<char> trial_heuristic(cfg.trials, 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (std::uint64_t i = next++; i < cfg.trials && !failed; i = next++) {
        const Rng tr = root.split(i);
        Rng ri = tr.split(0), rs = tr.split(1), rt = tr.split(2);
        std::optional<FunctionTable> own;
        if (!shared) own = gen_instance(ispec, g, h, ri);
        const FunctionTable& f = shared ? *shared : *own;
        OnlineOracle oracle(f, settings, make_strategy(cfg.adversary.strategy, *g, rs));
        const Verdict v = run_tester(tester, oracle, rt);
        TrialResult& r = results[i];
        r.accepted = v.accepted();
        r.queries = v.queries_made;
        r.erasures = v.erasures_seen;
        r.forced = v.forced;
        r.branch = v.branch;
        bool heur = false;
        r.stratum = shared ? shared_stratum : stratum_of(f, heur);
        trial_heuristic[i] = heur;
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  const std::uint32_t workers = std::min<std::uint64_t>(cfg.workers, cfg.trials);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in trial order.
  std::map<std::string, Stratum> strata;
  bool forced = false;
  double queries = 0.0, erasures = 0.0;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const TrialResult& r = results[i];
    (r.accepted ? report.accept_count : report.reject_count)++;
    queries += static_cast<double>(r.queries);
    erasures += static_cast<double>(r.erasures);
    forced = forced || r.forced;
    heuristic = heuristic || trial_heuristic[i];
    if (!r.branch.empty()) ++report.branches[r.branch];
    Stratum& s = strata[r.stratum];
    s.epsilon_f = r.stratum;
    ++s.trials;
    s.rejects += !r.accepted;
  }
  for (auto& [key, s] : strata) {
    s.reject_interval = wilson_interval(s.rejects, s.trials);
    report.strata.push_back(s);
  }
  if (forced) report.regime_flags.push_back("forced");
  if (heuristic) report.regime_flags.push_back("heuristic-epsilon");
  const double n = static_cast<double>(cfg.trials);
  report.accept_rate = static_cast<double>(report.accept_count) / n;
  report.accept_interval = wilson_interval(report.accept_count, cfg.trials);
  report.mean_queries = queries / n;
  report.mean_erasures_seen = erasures / n;
  report.config_echo = config_to_json(cfg);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_json(const ExperimentReport& r, bool include_wall_time) {
  json j;
  j["accept_count"] = r.accept_count;
  j["reject_count"] = r.reject_count;
  j["accept_rate"] = r.accept_rate;
  j["accept_interval"] = {r.accept_interval.low, r.accept_interval.high};
  j["mean_queries"] = r.mean_queries;
  j["mean_erasures_seen"] = r.mean_erasures_seen;
  j["regime_flags"] = r.regime_flags;
  json strata = json::array();
  for (const auto& s : r.strata) {
    strata.push_back({{"epsilon_f", s.epsilon_f},
                      {"trials", s.trials},
                      {"rejects", s.rejects},
                      {"reject_interval", {s.reject_interval.low, s.reject_interval.high}}});
  }
  j["strata"] = std::move(strata);
  j["branches"] = r.branches;
  if (include_wall_time) j["wall_time"] = r.wall_time;
  j["config_echo"] = json::parse(r.config_echo);
  j["code_version"] = r.code_version;
  return j.dump();
}

LowerBoundResult lowerbound_demo(std::uint32_t p, std::uint32_t n, std::uint64_t t, const std::string& policy_name,
                                 std::uint64_t trials, std::uint64_t seed) {
  const GroupPtr g = Group::vector_space(p, n);
  const GroupPtr h = Group::vector_space(p, 1);
  std::vector<GroupElement> plan;
  if (policy_name == "two") {
    if (n < 2) throw ConfigError("policy 'two' needs n >= 2");
    plan = {g->unit_vector(0), g->unit_vector(1)};
  } else if (policy_name == "spanned") {
    if (n < 3) throw ConfigError("policy 'spanned' needs n >= 3");
    plan = {g->unit_vector(0), g->unit_vector(1), g->op(g->unit_vector(0), g->unit_vector(1)), g->unit_vector(2)};
  } else {
    throw ConfigError("unknown policy '" + policy_name + "' (expected two or spanned)");
  }
  const QueryPolicy policy = [plan](const std::vector<Answer>& answers) -> std::optional<GroupElement> {
    if (answers.size() >= plan.size()) return std::nullopt;
    return plan[answers.size()];
  };
  // Uniform over HOM(F_p^n, F_p): the dense table of a uniform choice of basis images.
  std::vector<FunctionTable> homs;
  for (const auto& hom : enumerate_homomorphisms(g, h)) homs.push_back(hom.to_function());
  const InstanceSampler plus = [homs](Rng& rng) { return homs[rng.below(homs.size())]; };
  const InstanceSampler minus = [g, h](Rng& rng) {
    InstanceSpec spec;
    spec.kind = InstanceKind::RandomFunction;
    return gen_instance(spec, g, h, rng);
  };
  const StrategyFactory eraser = [p](Rng rng) { return strategy_span_eraser(p, rng); };
  const OracleSettings settings{Mode::Erasure, Schedule::BudgetManaging, t};
  const Rng root(seed);
  Rng rp = root.split(0), rm = root.split(1);
  const auto dp = transcript_distribution(policy, plus, eraser, settings, trials, rp);
  const auto dm = transcript_distribution(policy, minus, eraser, settings, trials, rm);
  return {total_variation(dp, dm), dp.size(), dm.size()};
}

}  // namespace homtest
