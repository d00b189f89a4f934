#include "dcsim/generators.hpp"

#include <random>

namespace dcsim {

namespace {

// Small helper over mt19937_64 so draws do not depend on the standard
// library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b + 0x632be59bd9b4e5ffULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<Scenario> gen_correctness(std::size_t n, std::size_t k, const OracleVariant& variant,
                                      std::uint64_t seed) {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (k < 2) throw ValidationError("k must be at least 2");
  const Timestamp a = kCorrectnessActivation;

  std::vector<Scenario> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Draw draw(mix(mix(seed, k), j));
    Scenario s;
    s.id = "corr-k" + std::to_string(k) + "-" + std::to_string(j) + "-" + to_string(variant);
    s.variant = variant;
    s.semantics = default_semantics(variant.architecture);
    s.seed = seed;

    ChoiceDecl choice;
    std::vector<TimelineEntry> updates;
    std::vector<TimelineEntry> consumer;
    consumer.push_back({a, action::Activate{0, std::nullopt}});
    for (std::size_t i = 0; i < k; ++i) {
      const Timestamp at = occurrence_step(i);
      EventSpec e;
      e.id = static_cast<EventId>(i);
      switch (draw.below(3)) {
        case 0:
          e.kind = MessageEvent{};
          consumer.push_back({at, action::Message{0, e.id}});
          break;
        case 1:
          e.kind = RelativeTimer{at - a};
          break;
        default: {
          const std::string var = "x" + std::to_string(i);
          const DataWord threshold = draw.between(2, 6);
          e.kind = ConditionalEvent{expr::Expr::compare(var, expr::CmpOp::Ge, threshold), OracleBinding{var}};
          s.oracles.push_back({var, draw.below(threshold)});
          // Noise below the threshold, then the crossing, then values that
          // keep the condition true.
          for (Timestamp t = 1 + draw.below(3); t < at; t += 1 + draw.below(4)) {
            updates.push_back({t, action::OracleUpdate{var, draw.below(threshold)}});
          }
          updates.push_back({at, action::OracleUpdate{var, threshold + draw.below(3)}});
          const Timestamp later = at + 1 + draw.below(3);
          updates.push_back({later, action::OracleUpdate{var, threshold + draw.below(4)}});
          break;
        }
      }
      choice.events.push_back(std::move(e));
    }
    const Timestamp horizon = occurrence_step(k - 1) + kOccurrenceSpacing;
    consumer.push_back({horizon, action::Trigger{0, static_cast<EventId>(k - 1), std::nullopt}});
    s.choices.push_back(std::move(choice));

    // Merge by step; updates precede consumer actions of the same step.
    std::stable_sort(updates.begin(), updates.end(),
                     [](const auto& x, const auto& y) { return x.step < y.step; });
    std::size_t ui = 0;
    for (auto& c : consumer) {
      while (ui < updates.size() && updates[ui].step <= c.step) s.timeline.push_back(updates[ui++]);
      s.timeline.push_back(std::move(c));
    }
    while (ui < updates.size() && updates[ui].step <= horizon) s.timeline.push_back(updates[ui++]);
    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

Scenario gen_cost(std::size_t c, std::size_t u, const OracleVariant& variant) {
  if (c < 1) throw ValidationError("c must be at least 1");
  if (u < 1) throw ValidationError("u must be at least 1");
  Scenario s;
  s.id = "cost-c" + std::to_string(c) + "-u" + std::to_string(u) + "-" + to_string(variant);
  s.variant = variant;
  s.semantics = default_semantics(variant.architecture);
  s.oracles.push_back({"x", 0});
  const auto condition = expr::Expr::compare("x", expr::CmpOp::Ge, 3);
  for (std::size_t i = 0; i < c; ++i) {
    EventSpec e{0, ConditionalEvent{condition, OracleBinding{"x"}}, "x_reached"};
    s.choices.push_back({{std::move(e)}});
  }
  for (std::size_t i = 0; i < c; ++i) s.timeline.push_back({1, action::Activate{i, std::nullopt}});
  for (std::size_t i = 1; i <= u; ++i) {
    const Timestamp step = i + 1;
    const DataWord value = i == u ? 3 : (i % 2 == 1 ? 1 : 2);
    s.timeline.push_back({step, action::OracleUpdate{"x", value}});
    if (i % 5 == 0 || i == u) {
      for (std::size_t ci = 0; ci < c; ++ci) {
        s.timeline.push_back({step, action::Trigger{ci, std::nullopt, std::nullopt}});
      }
    }
  }
  validate(s);
  return s;
}

}  // namespace dcsim
