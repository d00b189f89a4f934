#include <doctest.h>

#include "support.hpp"

using namespace testkit;

TEST_SUITE("semantics") {

TEST_CASE("successor advances time by one") {
  const auto s = successor({73, {{"d_w", 0}}}, {{"d_w", 1}});
  CHECK(s == EnvironmentState{74, {{"d_w", 1}}});
  CHECK(successor({0, {{"x", 5}}}, {{"x", 5}}).t == 1);
  CHECK(successor({77, {{"d_w", 2}}}, {{"d_w", 2}}) == running_example_state(6));
  CHECK_THROWS_AS(successor({kTop - 1, {}}, {}), SimulationError);
}

TEST_CASE("trace rejects gaps") {
  EnvironmentTrace t(running_example_state(1));
  t.append(running_example_state(2));
  CHECK_THROWS_AS(t.append(running_example_state(4)), ContractViolation);
  CHECK(t.size() == 2);
  CHECK(running_example_trace(1, 6).prefix(3).back() == running_example_state(3));
}

TEST_CASE("detect") {
  const auto events = running_example_events();
  CHECK(detect(events[kEd], running_example_state(1), running_example_state(4), {}));
  CHECK_FALSE(detect(events[kEd], running_example_state(1), running_example_state(3), {}));
  CHECK_FALSE(detect(events[kEw], running_example_state(1), running_example_state(4), {}));
  CHECK(detect(events[kEw], running_example_state(1), running_example_state(5), {}));
  CHECK_FALSE(detect(events[kEc], running_example_state(1), running_example_state(6), {}));
  CHECK(detect(events[kEc], running_example_state(1), running_example_state(6), {kEc}));

  const EventSpec relative{0, RelativeTimer{3}, ""};
  CHECK_FALSE(detect(relative, running_example_state(1), running_example_state(3), {}));
  CHECK(detect(relative, running_example_state(1), running_example_state(4), {}));

  const EventSpec unknown{0, ConditionalEvent{expr::parse("zz > 1"), {"zz"}}, ""};
  CHECK_THROWS_AS(detect(unknown, running_example_state(1), running_example_state(1), {}), expr::EvalError);
}

TEST_CASE("detected_set") {
  const auto events = running_example_events();
  CHECK(detected_set(events, running_example_state(1), running_example_state(5), {}) == EventSet{kEd, kEw});
  CHECK(detected_set(events, running_example_state(1), running_example_state(1), {}).empty());
  CHECK(detected_set({}, running_example_state(1), running_example_state(5), {}).empty());
}

TEST_CASE("initial_state tie-break") {
  const auto events = running_example_events();
  const auto s5 = running_example_state(5);
  CHECK(initial_state(events, s5, {}, std::nullopt) == ChoiceState{s5, s5, kEd});
  CHECK(initial_state(events, s5, {}, kEw) == ChoiceState{s5, s5, kEw});
  const auto s1 = running_example_state(1);
  CHECK(initial_state(events, s1, {}, std::nullopt) == ChoiceState{s1, s1, std::nullopt});
  // a preference that is not detected is ignored
  CHECK(initial_state(events, s5, {}, kEt).winner == kEd);
}

TEST_CASE("continual_step") {
  const auto events = running_example_events();
  const auto s1 = running_example_state(1);
  const ChoiceState at3{s1, running_example_state(3), std::nullopt};
  CHECK(continual_step(events, at3, running_example_state(4), {}, std::nullopt) == ChoiceState{s1, running_example_state(4), kEd});

  const ChoiceState at1{s1, s1, std::nullopt};
  CHECK(continual_step(events, at1, running_example_state(2), {}, std::nullopt) == ChoiceState{s1, running_example_state(2), std::nullopt});
  CHECK_THROWS_AS(continual_step(events, at1, running_example_state(3), {}, std::nullopt), ContractViolation);

  const ChoiceState done{s1, running_example_state(4), kEd};
  CHECK_THROWS_AS(continual_step(events, done, running_example_state(5), {}, std::nullopt), ContractViolation);
}

TEST_CASE("timed detection") {
  const auto events = running_example_events();
  const auto s1 = running_example_state(1);
  CHECK(timed_detection(events[kEd], s1, running_example_trace(1, 6), {}) == 76);
  CHECK(timed_detection(events[kEw], s1, running_example_trace(1, 6), {}) == 77);
  CHECK(timed_detection(events[kEw], s1, running_example_trace(1, 4), {}) == kTop);
  CHECK(timed_detection(events[kEc], s1, running_example_trace(1, 6), {{kEc, 78}}) == 78);
  CHECK(timed_detection(events[kEc], s1, running_example_trace(1, 5), {{kEc, 78}}) == kTop);

  SUBCASE("deadline already passed at activation counts from activation") {
    const EventSpec early{0, AbsoluteTimer{10}, ""};
    CHECK(timed_detection(early, s1, running_example_trace(1, 1), {}) == 73);
  }
  SUBCASE("activation-only history is legal") {
    CHECK(timed_detection(events[kEw], s1, running_example_trace(1, 1), {}) == kTop);
  }
  SUBCASE("messages before activation are rejected") {
    CHECK_THROWS_AS(timed_detection(events[kEc], s1, running_example_trace(1, 6), {{kEc, 70}}), ContractViolation);
  }
  SUBCASE("history must start at activation") {
    CHECK_THROWS_AS(timed_detection(events[kEd], s1, running_example_trace(2, 6), {}), ContractViolation);
  }
}

TEST_CASE("earliest_detection") {
  const auto events = running_example_events();
  const auto s1 = running_example_state(1);
  CHECK(earliest_detection(events, s1, running_example_trace(1, 6), {}) == 76);
  CHECK(earliest_detection(events, s1, running_example_trace(1, 3), {}) == kTop);
  const std::vector<EventSpec> single{{0, MessageEvent{}, ""}};
  CHECK(earliest_detection(single, s1, running_example_trace(1, 6), {{0, 78}}) == 78);
}

TEST_CASE("txn_step") {
  const auto events = running_example_events();
  const auto s1 = running_example_state(1);
  const ChoiceState start{s1, s1, std::nullopt};
  CHECK(txn_step(events, start, running_example_state(6), running_example_trace(1, 6), {{kEc, 78}}, std::nullopt) ==
        ChoiceState{s1, running_example_state(6), kEd});
  const ChoiceState at2{s1, running_example_state(2), std::nullopt};
  CHECK(txn_step(events, at2, running_example_state(5), running_example_trace(1, 5), {}, std::nullopt).winner == kEd);
  CHECK(txn_step(events, at2, running_example_state(3), running_example_trace(1, 3), {}, std::nullopt).winner == std::nullopt);
  CHECK_THROWS_AS(txn_step(events, at2, running_example_state(2), running_example_trace(1, 2), {}, std::nullopt), ContractViolation);

  const std::vector<EventSpec> twins{{0, AbsoluteTimer{76}, ""}, {1, RelativeTimer{3}, ""}};
  CHECK(txn_step(twins, start, running_example_state(6), running_example_trace(1, 6), {}, std::nullopt).winner == 0);
  CHECK(txn_step(twins, start, running_example_state(6), running_example_trace(1, 6), {}, 1).winner == 1);
}

TEST_CASE("reference executor reproduces trace (a)") {
  const auto cs = run_continual(running_example_events(), running_example_trace(1, 6), {{kEc, 78}});
  CHECK(cs == ChoiceState{running_example_state(1), running_example_state(4), kEd});
}

TEST_CASE("event ids must be contiguous") {
  std::vector<EventSpec> bad{{0, MessageEvent{}, ""}, {2, MessageEvent{}, ""}};
  CHECK_THROWS_AS(validate_events(bad), ContractViolation);
}

}  // TEST_SUITE
