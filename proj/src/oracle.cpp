#include "homtest/oracle.hpp"

#include <cmath>
#include <set>

#include "homtest/errors.hpp"
#include "json.hpp"

namespace homtest {

std::string mode_name(Mode m) { return m == Mode::Erasure ? "erasure" : "corruption"; }

std::string schedule_name(Schedule s) { return s == Schedule::FixedRate ? "fixed_rate" : "budget_managing"; }

Mode parse_mode(std::string_view s) {
  if (s == "erasure") return Mode::Erasure;
  if (s == "corruption") return Mode::Corruption;
  throw ConfigError("unknown adversary mode '" + std::string(s) + "'");
}

Schedule parse_schedule(std::string_view s) {
  if (s == "fixed_rate") return Schedule::FixedRate;
  if (s == "budget_managing") return Schedule::BudgetManaging;
  throw ConfigError("unknown adversary schedule '" + std::string(s) + "'");
}

std::string Transcript::to_jsonl(const Group& domain, const Group& codomain) const {
  std::string out;
  for (const auto& e : entries_) {
    nlohmann::json j;
    j["query"] = domain.format(e.query);
    j["answer"] = e.answer ? codomain.format(*e.answer) : "⊥";
    out += j.dump();
    out += '\n';
  }
  return out;
}

OnlineOracle::OnlineOracle(const FunctionTable& base, OracleSettings settings,
                           std::unique_ptr<AdversaryStrategy> strategy)
    : base_(&base), settings_(settings), strategy_(std::move(strategy)) {}

bool OnlineOracle::is_erased(const GroupElement& x) const {
  auto it = overrides_.find(x);
  return it != overrides_.end() && !it->second;
}

Answer OnlineOracle::peek(const GroupElement& x) const {
  if (!overrides_.empty()) {
    auto it = overrides_.find(x);
    if (it != overrides_.end()) return it->second;
  }
  return base_->eval(x);
}

Answer OnlineOracle::query(const GroupElement& x) {
  Answer answer = peek(x);
  transcript_.append(x, answer);
  ++queries_;
  if (settings_.schedule == Schedule::BudgetManaging) {
    budget_ += settings_.t;
  } else {
    budget_ = settings_.t;
  }
  if (strategy_) {
    std::vector<Manipulation> moves = strategy_->respond(transcript_, budget_, *this);
    if (moves.size() > budget_) {
      throw ProtocolViolation("strategy " + strategy_->name() + " returned " + std::to_string(moves.size()) +
                              " manipulations with budget " + std::to_string(budget_));
    }
    for (const auto& m : moves) {
      if (!domain().contains(m.target)) throw ProtocolViolation("manipulation target outside the domain");
      if (settings_.mode == Mode::Erasure) {
        if (m.value) throw ProtocolViolation("erasure-mode strategy supplied a corruption value");
        overrides_[m.target] = std::nullopt;
      } else {
        if (!m.value) throw ProtocolViolation("corruption-mode strategy supplied no value");
        if (!codomain().contains(*m.value)) throw ProtocolViolation("corruption value outside the codomain");
        overrides_[m.target] = m.value;
      }
    }
    manipulations_ += moves.size();
    budget_ -= moves.size();
  }
  if (settings_.schedule == Schedule::FixedRate) budget_ = 0;
  return answer;
}

GroupElement corrupt_value(const OnlineOracle& view, const GroupElement& x, Rng& rng) {
  const Group& h = view.codomain();
  const std::uint64_t n = h.order();
  if (n < 2) throw DomainError("cannot corrupt into a trivial codomain");
  Answer cur = view.peek(x);
  GroupElement base = cur ? *cur : view.base().eval(x);
  return h.element_at((h.index_of(base) + 1 + rng.below(n - 1)) % n);
}

std::string answer_string(const Group& codomain, const std::vector<Answer>& answers) {
  std::string s;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i) s += '|';
    s += answers[i] ? codomain.format(*answers[i]) : "⊥";
  }
  return s;
}

std::map<std::string, std::uint64_t> transcript_distribution(const QueryPolicy& policy, const InstanceSampler& sampler,
                                                             const StrategyFactory& strategy, OracleSettings settings,
                                                             std::uint64_t trials, Rng& rng) {
  std::map<std::string, std::uint64_t> hist;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng stream = rng.split(trial);
    Rng instance_rng = stream.split(0);
    FunctionTable f = sampler(instance_rng);
    OnlineOracle oracle(f, settings, strategy ? strategy(stream.split(1)) : nullptr);
    std::vector<Answer> answers;
    while (auto q = policy(answers)) answers.push_back(oracle.query(*q));
    ++hist[answer_string(f.codomain() ? *f.codomain() : oracle.codomain(), answers)];
  }
  return hist;
}

double total_variation(const std::map<std::string, std::uint64_t>& a, const std::map<std::string, std::uint64_t>& b) {
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  if (na == 0.0 || nb == 0.0) throw DomainError("total variation of an empty histogram");
  std::set<std::string> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double sum = 0.0;
  for (const auto& k : keys) {
    auto ia = a.find(k);
    auto ib = b.find(k);
    double pa = ia == a.end() ? 0.0 : static_cast<double>(ia->second) / na;
    double pb = ib == b.end() ? 0.0 : static_cast<double>(ib->second) / nb;
    sum += std::fabs(pa - pb);
  }
  return sum / 2.0;
}

}  // namespace homtest
