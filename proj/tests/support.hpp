#pragma once
// Shared fixtures: the running example's environment and brute-force
// reference implementations used by property and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "dcsim/expr.hpp"
#include "dcsim/generators.hpp"
#include "dcsim/scenario.hpp"
#include "dcsim/semantics.hpp"

namespace testkit {

using namespace dcsim;

inline constexpr EventId kEd = 0, kEw = 1, kEc = 2, kEt = 3;

inline std::vector<EventSpec> running_example_events() {
  return {
      {kEd, AbsoluteTimer{76}, "e_d"},
      {kEw, ConditionalEvent{expr::parse("d_w >= 2"), OracleBinding{"d_w"}}, "e_w"},
      {kEc, MessageEvent{}, "e_c"},
      {kEt, MessageEvent{}, "e_t"},
  };
}

/// s1..s6 at t = 73..78; index 1-based like the table.
inline EnvironmentState running_example_state(int i) {
  static const DataWord dw[] = {0, 0, 1, 1, 1, 2, 2};
  return {static_cast<Timestamp>(72 + i), {{"d_w", dw[i]}}};
}

/// States s_from..s_to as a trace.
inline EnvironmentTrace running_example_trace(int from, int to) {
  EnvironmentTrace t(running_example_state(from));
  for (int i = from + 1; i <= to; ++i) t.append(running_example_state(i));
  return t;
}

/// Table 1 timeline for any variant (activation at 73, e_c delivered at 78).
inline Scenario running_example_scenario(const OracleVariant& v) {
  Scenario s;
  s.id = "running_example-" + to_string(v);
  s.variant = v;
  s.semantics = default_semantics(v.architecture);
  s.oracles = {{"d_w", 0}};
  s.choices = {{running_example_events()}};
  const DataWord dw[] = {0, 1, 1, 1, 2, 2};
  for (int i = 0; i < 6; ++i) {
    const Timestamp t = 73 + static_cast<Timestamp>(i);
    s.timeline.push_back({t, action::OracleUpdate{"d_w", dw[i]}});
    if (t == 73) s.timeline.push_back({t, action::Activate{0, std::nullopt}});
  }
  s.timeline.push_back({78, action::Message{0, kEc}});
  return s;
}

// ---- random generation ----

inline expr::Expr random_expr(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars) {
  const auto pick = [&](std::uint64_t n) { return rng() % n; };
  if (depth == 0 || pick(3) == 0) {
    static const expr::CmpOp ops[] = {expr::CmpOp::Lt, expr::CmpOp::Le, expr::CmpOp::Eq,
                                      expr::CmpOp::Ne, expr::CmpOp::Ge, expr::CmpOp::Gt};
    const DataWord c = pick(4) == 0 ? rng() : pick(8);
    return expr::Expr::compare(vars[pick(vars.size())], ops[pick(6)], c);
  }
  switch (pick(3)) {
    case 0: return expr::Expr::negate(random_expr(rng, depth - 1, vars));
    case 1: return expr::Expr::all_of(random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars));
    default: return expr::Expr::any_of(random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars));
  }
}

/// Brute force det_T for a conditional: scan every state of the trace.
inline Timestamp scan_conditional(const expr::Expr& e, const EnvironmentTrace& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (expr::eval(e, trace.at(i).nu)) return trace.at(i).t;
  }
  return kTop;
}

/// Brute force det_T for a timer: first state of the trace at or after the due time.
inline Timestamp scan_timer(Timestamp due, const EnvironmentTrace& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.at(i).t >= due) return trace.at(i).t;
  }
  return kTop;
}

/**
 * Random scenario for equivalence checks: up to `max_events` events, at most
 * `max_steps` steps, NIL preferences except on message deliveries, at most one
 * consumer action per step, and a final trigger at the horizon.
 */
inline Scenario random_equivalence_scenario(std::mt19937_64& rng, const OracleVariant& v,
                                            std::size_t max_events = 6, Timestamp max_steps = 50) {
  const auto pick = [&](std::uint64_t n) { return rng() % n; };
  Scenario s;
  s.variant = v;
  s.semantics = default_semantics(v.architecture);
  const Timestamp horizon = 8 + pick(max_steps - 7);  // 8..max_steps
  const Timestamp activation = 1 + pick(horizon / 2);

  const std::size_t n_vars = 1 + pick(2);
  for (std::size_t i = 0; i < n_vars; ++i) s.oracles.push_back({"v" + std::to_string(i), pick(3)});

  ChoiceDecl choice;
  const std::size_t k = 1 + pick(max_events);
  for (EventId id = 0; id < k; ++id) {
    EventSpec e;
    e.id = id;
    switch (pick(4)) {
      case 0: e.kind = MessageEvent{}; break;
      case 1: e.kind = AbsoluteTimer{pick(horizon + 4)}; break;
      case 2: e.kind = RelativeTimer{pick(horizon)}; break;
      default: {
        const auto var = "v" + std::to_string(pick(n_vars));
        static const expr::CmpOp ops[] = {expr::CmpOp::Ge, expr::CmpOp::Eq, expr::CmpOp::Le, expr::CmpOp::Gt};
        auto cond = expr::Expr::compare(var, ops[pick(4)], pick(5));
        if (pick(4) == 0) cond = expr::Expr::negate(cond);
        e.kind = ConditionalEvent{cond, OracleBinding{var}};
      }
    }
    choice.events.push_back(std::move(e));
  }
  s.choices.push_back(choice);

  std::vector<EventId> messages;
  for (const auto& e : choice.events) {
    if (e.is_message()) messages.push_back(e.id);
  }
  for (Timestamp t = 1; t <= horizon; ++t) {
    for (const auto& o : s.oracles) {
      if (pick(3) == 0) s.timeline.push_back({t, action::OracleUpdate{o.name, pick(5)}});
    }
    if (t == activation) {
      s.timeline.push_back({t, action::Activate{0, std::nullopt}});
    } else if (t == horizon) {
      s.timeline.push_back({t, action::Trigger{0, std::nullopt, std::nullopt}});
    } else if (t > activation) {
      const auto r = pick(6);
      if (r == 0) {
        s.timeline.push_back({t, action::Trigger{0, std::nullopt, std::nullopt}});
      } else if (r == 1 && !messages.empty()) {
        s.timeline.push_back({t, action::Message{0, messages[pick(messages.size())]}});
      }
    }
  }
  return s;
}

/// The six variants that run the transaction-driven semantics.
inline std::vector<OracleVariant> transaction_driven_variants() {
  std::vector<OracleVariant> out;
  for (const auto& v : all_variants()) {
    if (default_semantics(v.architecture) == Semantics::TransactionDriven) out.push_back(v);
  }
  return out;
}

}  // namespace testkit
