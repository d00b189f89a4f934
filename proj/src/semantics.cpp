#include "dcsim/semantics.hpp"

#include <algorithm>

namespace dcsim {

std::string format_event(MaybeEvent e) { return e ? "e" + std::to_string(*e) : "nil"; }

EnvironmentTrace::EnvironmentTrace(EnvironmentState start) : start_(std::move(start)) {}

EnvironmentTrace::EnvironmentTrace(EnvironmentState start, std::vector<EnvironmentState> states)
    : start_(std::move(start)) {
  states_.reserve(states.size());
  for (auto& s : states) append(std::move(s));
}

void EnvironmentTrace::append(EnvironmentState next) {
  if (back().t == kTop || next.t != back().t + 1) {
    throw ContractViolation("trace state at t=" + std::to_string(next.t) +
                            " does not succeed t=" + std::to_string(back().t));
  }
  states_.push_back(std::move(next));
}

EnvironmentTrace EnvironmentTrace::prefix(std::size_t count) const {
  if (count == 0 || count > size()) throw ContractViolation("invalid trace prefix length");
  return EnvironmentTrace(start_, {states_.begin(), states_.begin() + (count - 1)});
}

void validate_events(std::span<const EventSpec> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].id != i) {
      throw ContractViolation("event ids must be contiguous from 0; position " +
                              std::to_string(i) + " has id " + std::to_string(events[i].id));
    }
  }
}

EnvironmentState successor(const EnvironmentState& s, Valuation nu_next) {
  if (s.t >= kTop - 1) throw SimulationError("timestamp overflow");
  return {s.t + 1, std::move(nu_next)};
}

namespace {

Timestamp saturating_add(Timestamp a, Timestamp b) { return a > kTop - b ? kTop : a + b; }

void require_open(const ChoiceState& cs) {
  if (cs.is_final()) throw ContractViolation("choice is already final");
}

}  // namespace

bool detect(const EventSpec& e, const EnvironmentState& activation, const EnvironmentState& s,
            const EventSet& explicit_now) {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, MessageEvent>) {
          return explicit_now.contains(e.id);
        } else if constexpr (std::is_same_v<T, AbsoluteTimer>) {
          return s.t >= k.deadline;
        } else if constexpr (std::is_same_v<T, RelativeTimer>) {
          return s.t >= saturating_add(activation.t, k.delta);
        } else {
          return expr::eval(k.condition, s.nu);
        }
      },
      e.kind);
}

EventSet detected_set(std::span<const EventSpec> events, const EnvironmentState& activation,
                      const EnvironmentState& s, const EventSet& explicit_now) {
  EventSet out;
  for (const auto& e : events) {
    if (detect(e, activation, s, explicit_now)) out.insert(e.id);
  }
  return out;
}

MaybeEvent select_winner(const EventSet& candidates, MaybeEvent preferred) {
  if (candidates.empty()) return std::nullopt;
  if (preferred && candidates.contains(*preferred)) return preferred;
  return *candidates.begin();
}

ChoiceState initial_state(std::span<const EventSpec> events, const EnvironmentState& s,
                          const EventSet& explicit_now, MaybeEvent preferred) {
  validate_events(events);
  return {s, s, select_winner(detected_set(events, s, s, explicit_now), preferred)};
}

ChoiceState continual_step(std::span<const EventSpec> events, const ChoiceState& cs,
                           const EnvironmentState& next, const EventSet& explicit_now,
                           MaybeEvent preferred) {
  require_open(cs);
  if (cs.observed.t == kTop || next.t != cs.observed.t + 1) {
    throw ContractViolation("continual step requires the direct successor of t=" +
                            std::to_string(cs.observed.t));
  }
  validate_events(events);
  return {cs.activation, next,
          select_winner(detected_set(events, cs.activation, next, explicit_now), preferred)};
}

Timestamp timed_detection(const EventSpec& e, const EnvironmentState& activation,
                          const EnvironmentTrace& history, const ExplicitLog& explicit_log) {
  if (history.start().t != activation.t) {
    throw ContractViolation("history must start at the activation state");
  }
  const Timestamp now = history.back().t;
  return std::visit(
      [&](const auto& k) -> Timestamp {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, MessageEvent>) {
          Timestamp best = kTop;
          for (const auto& m : explicit_log) {
            if (m.event != e.id) continue;
            if (m.at < activation.t) {
              throw ContractViolation("explicit message at t=" + std::to_string(m.at) +
                                      " precedes activation");
            }
            if (m.at <= now) best = std::min(best, m.at);
          }
          return best;
        } else if constexpr (std::is_same_v<T, AbsoluteTimer>) {
          return k.deadline <= now ? std::max(k.deadline, activation.t) : kTop;
        } else if constexpr (std::is_same_v<T, RelativeTimer>) {
          const Timestamp due = saturating_add(activation.t, k.delta);
          return due <= now ? due : kTop;
        } else {
          for (std::size_t i = 0; i < history.size(); ++i) {
            const auto& s = history.at(i);
            if (expr::eval(k.condition, s.nu)) return s.t;
          }
          return kTop;
        }
      },
      e.kind);
}

Timestamp earliest_detection(std::span<const EventSpec> events, const EnvironmentState& activation,
                             const EnvironmentTrace& history, const ExplicitLog& explicit_log) {
  Timestamp best = kTop;
  for (const auto& e : events) {
    best = std::min(best, timed_detection(e, activation, history, explicit_log));
  }
  return best;
}

ChoiceState txn_step(std::span<const EventSpec> events, const ChoiceState& cs,
                     const EnvironmentState& now, const EnvironmentTrace& history,
                     const ExplicitLog& explicit_log, MaybeEvent preferred) {
  require_open(cs);
  if (now.t <= cs.observed.t) {
    throw ContractViolation("transaction-driven step must move forward in time");
  }
  if (history.back().t != now.t) throw ContractViolation("history must end at the new state");
  validate_events(events);

  std::vector<Timestamp> det(events.size());
  Timestamp first = kTop;
  for (std::size_t i = 0; i < events.size(); ++i) {
    det[i] = timed_detection(events[i], cs.activation, history, explicit_log);
    first = std::min(first, det[i]);
  }
  EventSet earliest;
  if (first != kTop) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (det[i] == first) earliest.insert(events[i].id);
    }
  }
  return {cs.activation, now, select_winner(earliest, preferred)};
}

EventSet explicit_at(const ExplicitLog& log, Timestamp t) {
  EventSet out;
  for (const auto& m : log) {
    if (m.at == t) out.insert(m.event);
  }
  return out;
}

ChoiceState run_continual(std::span<const EventSpec> events, const EnvironmentTrace& trace,
                          const ExplicitLog& explicit_log, MaybeEvent preferred) {
  ChoiceState cs =
      initial_state(events, trace.start(), explicit_at(explicit_log, trace.start().t), preferred);
  for (const auto& s : trace.states()) {
    if (cs.is_final()) break;
    cs = continual_step(events, cs, s, explicit_at(explicit_log, s.t), preferred);
  }
  return cs;
}

}  // namespace dcsim
