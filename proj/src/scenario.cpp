#include "dcsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "dcsim/choice.hpp"

namespace dcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void reject(const std::string& what) { throw ValidationError(what); }

void check_event(const ChoiceDecl& c, std::size_t choice, MaybeEvent e, const char* role) {
  if (e && *e >= c.events.size()) {
    reject(std::string(role) + " e" + std::to_string(*e) + " does not exist in choice " +
           std::to_string(choice));
  }
}

}  // namespace

void validate(const Scenario& s) {
  if (s.semantics != default_semantics(s.variant.architecture)) {
    reject(to_string(s.variant) + " oracles cannot run " + std::string(to_string(s.semantics)) +
           " semantics");
  }
  std::set<std::string, std::less<>> names;
  for (const auto& o : s.oracles) {
    if (o.name.empty()) reject("oracle without a name");
    if (!names.insert(o.name).second) reject("duplicate oracle '" + o.name + "'");
  }
  for (std::size_t ci = 0; ci < s.choices.size(); ++ci) {
    const auto& events = s.choices[ci].events;
    if (events.empty()) reject("choice " + std::to_string(ci) + " has no events");
    try {
      validate_events(events);
    } catch (const ContractViolation& e) {
      reject("choice " + std::to_string(ci) + ": " + e.what());
    }
    for (const auto& e : events) {
      if (!e.is_conditional()) continue;
      const auto& c = std::get<ConditionalEvent>(e.kind);
      if (!names.contains(c.binding.oracle)) {
        reject("e" + std::to_string(e.id) + " of choice " + std::to_string(ci) +
               " is bound to unknown oracle '" + c.binding.oracle + "'");
      }
      for (const auto& v : expr::variables(c.condition)) {
        if (v != c.binding.oracle) {
          reject("condition of e" + std::to_string(e.id) + " references '" + v +
                 "', which oracle '" + c.binding.oracle + "' does not provide");
        }
      }
    }
  }

  Timestamp prev = 0;
  std::map<std::string, Timestamp, std::less<>> last_update;
  for (const auto& entry : s.timeline) {
    if (entry.step == 0) reject("timeline steps start at 1");
    if (entry.step < prev) reject("timeline steps must be non-decreasing");
    if (entry.step >= kTop - 1) reject("timeline step too large");
    prev = entry.step;
    std::visit(overloaded{
                   [&](const action::OracleUpdate& a) {
                     if (!names.contains(a.oracle)) reject("update of unknown oracle '" + a.oracle + "'");
                     const auto it = last_update.find(a.oracle);
                     if (it != last_update.end() && it->second == entry.step) {
                       reject("two updates of '" + a.oracle + "' at step " + std::to_string(entry.step));
                     }
                     last_update[a.oracle] = entry.step;
                   },
                   [&](const action::Activate& a) {
                     if (a.choice >= s.choices.size()) reject("unknown choice " + std::to_string(a.choice));
                     check_event(s.choices[a.choice], a.choice, a.preferred, "preferred");
                   },
                   [&](const action::Trigger& a) {
                     if (a.choice >= s.choices.size()) reject("unknown choice " + std::to_string(a.choice));
                     check_event(s.choices[a.choice], a.choice, a.preferred, "preferred");
                     check_event(s.choices[a.choice], a.choice, a.message_event, "message");
                   },
                   [&](const action::Message& a) {
                     if (a.choice >= s.choices.size()) reject("unknown choice " + std::to_string(a.choice));
                     check_event(s.choices[a.choice], a.choice, a.event, "message");
                     if (!s.choices[a.choice].events[a.event].is_message()) {
                       reject("e" + std::to_string(a.event) + " of choice " + std::to_string(a.choice) +
                              " is not a message event");
                     }
                   },
               },
               entry.action);
  }
}

std::size_t update_count(const Scenario& s) {
  return static_cast<std::size_t>(std::count_if(s.timeline.begin(), s.timeline.end(), [](const auto& e) {
    return std::holds_alternative<action::OracleUpdate>(e.action);
  }));
}

EnvironmentTrace induced_trace(const Scenario& s, Timestamp from, Timestamp to) {
  if (to < from) throw ContractViolation("trace end precedes its start");
  Valuation nu;
  for (const auto& o : s.oracles) nu[o.name] = o.initial;
  auto it = s.timeline.begin();
  const auto apply_through = [&](Timestamp t) {
    for (; it != s.timeline.end() && it->step <= t; ++it) {
      if (const auto* u = std::get_if<action::OracleUpdate>(&it->action)) nu[u->oracle] = u->value;
    }
  };
  apply_through(from);
  EnvironmentTrace trace({from, nu});
  for (Timestamp t = from + 1; t <= to; ++t) {
    apply_through(t);
    trace.append({t, nu});
  }
  return trace;
}

std::vector<MaybeEvent> ground_truth(const Scenario& s, const std::vector<ConsumerOutcome>& outcomes) {
  const Timestamp horizon = s.timeline.empty() ? 0 : s.timeline.back().step;
  std::vector<MaybeEvent> out(s.choices.size());
  for (std::size_t ci = 0; ci < s.choices.size(); ++ci) {
    std::optional<Timestamp> activation;
    std::map<Timestamp, MaybeEvent> preference;  // first successful action per step
    ExplicitLog log;
    for (const auto& o : outcomes) {
      if (o.choice != ci || !o.ok) continue;
      if (o.activation && !activation) activation = o.step;
      if (!activation) continue;
      preference.try_emplace(o.step, o.preferred);
      if (o.message) log.push_back({*o.message, o.step});
    }
    if (!activation) continue;

    const auto& events = s.choices[ci].events;
    const auto trace = induced_trace(s, *activation, horizon);
    const auto pref = [&](Timestamp t) -> MaybeEvent {
      const auto it = preference.find(t);
      return it == preference.end() ? std::nullopt : it->second;
    };
    ChoiceState cs = initial_state(events, trace.start(), explicit_at(log, trace.start().t),
                                   pref(trace.start().t));
    for (const auto& st : trace.states()) {
      if (cs.is_final()) break;
      cs = continual_step(events, cs, st, explicit_at(log, st.t), pref(st.t));
    }
    out[ci] = cs.winner;
  }
  return out;
}

RunResult run_detailed(const Scenario& s, const RunOptions& options) {
  validate(s);
  Chain chain(options.schedule);

  // One instance per oracle, plus extra instances when a single choice binds
  // the same oracle more than once (one subscription per consumer and oracle).
  std::map<std::string, std::vector<OracleInstance>, std::less<>> instances;
  for (const auto& o : s.oracles) {
    instances[o.name].push_back(deploy_oracle(chain, s.variant, o.name, o.initial, options.provider));
  }
  std::vector<ChoiceConfig> configs;
  for (const auto& c : s.choices) {
    ChoiceConfig cfg{c.events, s.semantics, s.variant, {}};
    std::map<std::string, std::size_t, std::less<>> uses;
    for (const auto& e : c.events) {
      if (!e.is_conditional()) continue;
      const auto& name = std::get<ConditionalEvent>(e.kind).binding.oracle;
      const std::size_t k = uses[name]++;
      auto& pool = instances.at(name);
      if (k == pool.size()) {
        const auto& decl = *std::find_if(s.oracles.begin(), s.oracles.end(),
                                         [&](const auto& o) { return o.name == name; });
        pool.push_back(deploy_oracle(chain, s.variant, name, decl.initial, options.provider));
      }
      cfg.oracles[e.id] = pool[k].contract;
    }
    configs.push_back(std::move(cfg));
  }
  std::vector<Address> choices;
  for (auto& cfg : configs) choices.push_back(chain.deploy(std::make_unique<ChoiceContract>(std::move(cfg))));
  const Address engine = chain.new_account();

  RunResult result;
  std::size_t next = 0;
  while (next < s.timeline.size()) {
    const Timestamp step = s.timeline[next].step;
    while (chain.height() + 1 < step) chain.step();

    // Oracle updates first: the environment changes, then consumers act.
    std::size_t end = next;
    while (end < s.timeline.size() && s.timeline[end].step == step) ++end;
    for (std::size_t i = next; i < end; ++i) {
      if (const auto* u = std::get_if<action::OracleUpdate>(&s.timeline[i].action)) {
        for (auto& inst : instances.at(u->oracle)) inst.provider->update(u->value, step);
      }
    }
    const std::size_t first_outcome = result.outcomes.size();
    for (std::size_t i = next; i < end; ++i) {
      std::visit(overloaded{
                     [](const action::OracleUpdate&) {},
                     [&](const action::Activate& a) {
                       chain.submit({engine, choices[a.choice], "activate", encode_activate(a.preferred), 0});
                       result.outcomes.push_back({step, a.choice, true, a.preferred, std::nullopt, false});
                     },
                     [&](const action::Trigger& a) {
                       chain.submit({engine, choices[a.choice], "try_trigger",
                                     encode_trigger(a.preferred, a.message_event), 0});
                       result.outcomes.push_back({step, a.choice, false, a.preferred, a.message_event, false});
                     },
                     [&](const action::Message& a) {
                       chain.submit({engine, choices[a.choice], "try_trigger", encode_trigger(a.event, a.event), 0});
                       result.outcomes.push_back({step, a.choice, false, a.event, a.event, false});
                     },
                 },
                 s.timeline[i].action);
    }
    const auto block = chain.step();
    std::size_t k = first_outcome;
    for (const auto& r : block) {
      if (r.tx.from == engine) result.outcomes.at(k++).ok = r.ok();
    }
    next = end;
  }
  for (Timestamp i = 0; i < options.drain_limit && chain.has_pending(); ++i) chain.step();

  auto& rep = result.report;
  rep.scenario_id = s.id;
  rep.variant = s.variant;
  rep.semantics = s.semantics;
  rep.c = s.choices.size();
  rep.u = update_count(s);
  for (const auto addr : choices) {
    const auto& contract = chain.contract_as<ChoiceContract>(addr);
    rep.winners.push_back(contract.winner());
    result.winner_detection.push_back(contract.winner_detection());
    result.decided_at.push_back(contract.decided_at());
  }
  rep.truths = ground_truth(s, result.outcomes);
  rep.correct = rep.winners == rep.truths;
  rep.gas_deploy = chain.deployment_gas();
  rep.gas_total = chain.deployment_gas() + chain.operating_gas();
  rep.gas_per_consumer =
      rep.c == 0 ? 0.0 : static_cast<double>(rep.gas_total - rep.gas_deploy) / static_cast<double>(rep.c);
  result.receipts = chain.receipts();
  return result;
}

ExperimentReport run(const Scenario& s, const RunOptions& options) { return run_detailed(s, options).report; }

std::vector<ExperimentReport> run_batch(const std::vector<Scenario>& scenarios, const RunOptions& options,
                                        unsigned jobs) {
  std::vector<ExperimentReport> out(scenarios.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, scenarios.size())));

  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto worker = [&] {
    for (std::size_t i = cursor++; i < scenarios.size(); i = cursor++) {
      try {
        out[i] = run(scenarios[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace dcsim
