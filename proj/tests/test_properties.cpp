#include <doctest.h>

#include <algorithm>
#include <map>

#include "dcsim/choice.hpp"
#include "dcsim/oracles.hpp"
#include "support.hpp"

using namespace testkit;

namespace {

// Random single-variable trace starting at `start`, `len` states long.
EnvironmentTrace random_trace(std::mt19937_64& rng, Timestamp start, std::size_t len) {
  EnvironmentTrace t({start, {{"v", rng() % 4}}});
  for (std::size_t i = 1; i < len; ++i) t.append(successor(t.back(), {{"v", rng() % 4}}));
  return t;
}

std::vector<EventSpec> random_events(std::mt19937_64& rng, Timestamp horizon) {
  std::vector<EventSpec> out;
  const std::size_t k = 1 + rng() % 5;
  for (EventId id = 0; id < k; ++id) {
    switch (rng() % 3) {
      case 0: out.push_back({id, AbsoluteTimer{rng() % horizon}, ""}); break;
      case 1: out.push_back({id, RelativeTimer{rng() % horizon}, ""}); break;
      default: out.push_back({id, ConditionalEvent{random_expr(rng, 2, {"v"}), {"v"}}, ""});
    }
  }
  return out;
}

std::vector<MaybeEvent> winners_of(const Scenario& s) { return run(s).winners; }

std::size_t count_topic(const std::vector<Receipt>& receipts, std::string_view topic) {
  std::size_t n = 0;
  for (const auto& r : receipts) {
    for (const auto& l : r.logs) n += l.topic == topic ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("transaction-driven step refines the continual executor") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const auto trace = random_trace(rng, 1 + rng() % 20, 2 + rng() % 25);
    const auto events = random_events(rng, 40);
    const auto cont = run_continual(events, trace, {});
    const ChoiceState start{trace.start(), trace.start(), std::nullopt};
    const auto td = trace.size() > 1 ? txn_step(events, start, trace.back(), trace, {}, std::nullopt)
                                     : start;
    CAPTURE(iter);
    CHECK(td.winner == cont.winner);
  }
}

TEST_CASE("detections only move from TOP to a fixed time as the history grows") {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 200; ++iter) {
    const auto trace = random_trace(rng, 5, 2 + rng() % 30);
    const auto events = random_events(rng, 40);
    for (const auto& e : events) {
      const Timestamp full = timed_detection(e, trace.start(), trace, {});
      Timestamp prev = kTop;
      for (std::size_t n = 1; n <= trace.size(); ++n) {
        const Timestamp d = timed_detection(e, trace.start(), trace.prefix(n), {});
        CHECK((d == kTop || d == full));
        CHECK((prev == kTop || d == prev));
        prev = d;
      }
    }
  }
}

TEST_CASE("TOP means nothing was ever detected") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 200; ++iter) {
    const auto trace = random_trace(rng, 3, 1 + rng() % 20);
    const auto events = random_events(rng, 60);
    const bool none = earliest_detection(events, trace.start(), trace, {}) == kTop;
    CHECK(none == !run_continual(events, trace, {}).winner.has_value());
  }
}

TEST_CASE("on-chain and off-chain histories agree") {
  std::mt19937_64 rng(14);
  for (int iter = 0; iter < 60; ++iter) {
    auto s = random_equivalence_scenario(rng, {Architecture::OnChainHistory, false});
    const auto on = winners_of(s);
    s.variant = {Architecture::OffChainHistory, false};
    CHECK(winners_of(s) == on);
  }
}

TEST_CASE("conditional variants agree with their regular counterparts") {
  std::mt19937_64 rng(15);
  for (int iter = 0; iter < 40; ++iter) {
    for (const auto a : kArchitectures) {
      auto s = random_equivalence_scenario(rng, {a, false});
      const auto regular = winners_of(s);
      s.variant.conditional = true;
      CAPTURE(to_string(a));
      CHECK(winners_of(s) == regular);
    }
  }
}

TEST_CASE("conditional pub-sub signals each subscription at most once") {
  std::mt19937_64 rng(16);
  for (int iter = 0; iter < 60; ++iter) {
    const auto s = random_equivalence_scenario(rng, {Architecture::PubSub, true});
    const auto r = run_detailed(s);
    std::map<std::uint64_t, int> signals;  // oracle -> non-TOP pushes
    for (const auto& rc : r.receipts) {
      if (rc.tx.function != "push") continue;
      AbiReader p(rc.tx.payload);
      const auto oracle = p.word();
      if (p.word() != kTop) ++signals[oracle];
    }
    for (const auto& [oracle, n] : signals) CHECK(n == 1);
  }
}

TEST_CASE("every asynchronous query is answered") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 60; ++iter) {
    for (const auto a : {Architecture::RequestResponse, Architecture::OffChainHistory}) {
      const auto s = random_equivalence_scenario(rng, {a, iter % 2 == 1});
      const auto r = run_detailed(s);
      std::size_t callbacks = 0;
      for (const auto& rc : r.receipts) callbacks += rc.tx.function == "oracle_callback" && rc.ok() ? 1 : 0;
      CHECK(callbacks == count_topic(r.receipts, topic::kQuery));
    }
  }
}

TEST_CASE("the winner is written once") {
  std::mt19937_64 rng(18);
  for (int iter = 0; iter < 40; ++iter) {
    for (const auto& v : all_variants()) {
      const auto r = run_detailed(random_equivalence_scenario(rng, v));
      CHECK(count_topic(r.receipts, topic::kDecided) <= 1);
      if (!r.report.winners[0]) CHECK(count_topic(r.receipts, topic::kDecided) == 0);
    }
  }
}

TEST_CASE("runs reproduce bit for bit") {
  std::mt19937_64 rng(19);
  for (int iter = 0; iter < 20; ++iter) {
    for (const auto& v : all_variants()) {
      const auto s = random_equivalence_scenario(rng, v);
      const auto a = run_detailed(s);
      const auto b = run_detailed(s);
      CHECK(a.report == b.report);
      CHECK(a.receipts == b.receipts);
    }
  }
}

TEST_CASE("transaction-driven variants match the continual reference") {
  std::mt19937_64 rng(20);
  for (int iter = 0; iter < 50; ++iter) {
    for (const auto& v : transaction_driven_variants()) {
      const auto r = run(random_equivalence_scenario(rng, v));
      CAPTURE(to_string(v));
      CHECK(r.winners == r.truths);
    }
  }
}

}  // TEST_SUITE
