#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ffsim/rng.hpp"
#include "ffsim/scheduler.hpp"

using namespace ffsim;

TEST_CASE("activation_increment costs tau or tau root two", "[scheduler]") {
  CHECK(activation_increment(MoveKind::stay, 0.25) == 0.25);
  CHECK(activation_increment(MoveKind::straight, 0.25) == 0.25);
  CHECK(activation_increment(MoveKind::diagonal, 0.25) == 0.25 * std::numbers::sqrt2);
  CHECK(activation_increment(MoveKind::diagonal, 0.4) == 0.4 * std::numbers::sqrt2);
}

TEST_CASE("due_before is strict and ordered by time then id", "[scheduler]") {
  ActivationQueue q;
  q.insert(7, 0.30);
  q.insert(3, 0.10);
  q.insert(9, 0.10);
  q.insert(1, 0.05);
  auto due = q.due_before(0.30);  // the boundary itself is not due
  REQUIRE(due.size() == 3);
  CHECK(due[0] == ActivationQueue::Entry{0.05, 1});
  CHECK(due[1] == ActivationQueue::Entry{0.10, 3});
  CHECK(due[2] == ActivationQueue::Entry{0.10, 9});
  CHECK(q.due_before(0.05).empty());
  CHECK(q.due_before(1.0).size() == 4);
  // Non-mutating: asking twice gives the same answer.
  CHECK(q.due_before(0.30).size() == 3);
}

TEST_CASE("insert, remove and reschedule keep the index consistent", "[scheduler]") {
  ActivationQueue q;
  CHECK(q.empty());
  q.insert(5, 1.0);
  CHECK(q.contains(5));
  CHECK(q.time_of(5) == 1.0);
  CHECK(q.size() == 1);
  CHECK_THROWS_AS(q.insert(5, 2.0), std::logic_error);  // double-schedule
  q.reschedule(5, MoveKind::straight, 0.4);
  CHECK(q.time_of(5) == 1.0 + 0.4);
  q.remove(5);
  CHECK(q.empty());
  CHECK_THROWS_AS(q.remove(5), std::logic_error);
  CHECK_THROWS_AS(q.time_of(5), std::logic_error);
  CHECK_THROWS_AS(q.reschedule(5, MoveKind::stay, 0.25), std::logic_error);
}

TEST_CASE("activation times accumulate bitwise, with no grid attraction",
          "[scheduler]") {
  // The queue must store exactly the running sum t += increment. Any
  // snapping to step boundaries or recomputation from counts would break
  // bitwise equality against this replay.
  for (double tau : {0.25, 0.4}) {
    ActivationQueue q;
    RandomStream rng(17);
    double expected = 0.1 + tau;  // entry at the end of step 0, then one period
    q.insert(0, expected);
    for (int n = 0; n < 4000; ++n) {
      MoveKind kind = rng.uniform01() < 0.3 ? MoveKind::diagonal
                      : rng.uniform01() < 0.5 ? MoveKind::straight
                                              : MoveKind::stay;
      q.reschedule(0, kind, tau);
      expected += activation_increment(kind, tau);
      REQUIRE(q.time_of(0) == expected);
    }
  }
}

TEST_CASE("dyadic periods make the closed form exact", "[scheduler]") {
  // tau = 0.25 is a power of two, so t0 + n*tau has a single rounding and
  // the accumulated time must equal it bit for bit.
  const double tau = 0.25;
  const double t0 = 0.1 + tau;
  ActivationQueue q;
  q.insert(0, t0);
  for (int n = 1; n <= 4000; ++n) {
    q.reschedule(0, MoveKind::straight, tau);
    REQUIRE(q.time_of(0) == t0 + static_cast<double>(n) * tau);
  }
}

TEST_CASE("non-dyadic periods stay within accumulation tolerance of the"
          " closed form", "[scheduler]") {
  const double tau = 0.4;
  const double t0 = 0.1 + tau;
  ActivationQueue q;
  q.insert(0, t0);
  double worst = 0.0;
  for (int n = 1; n <= 2500; ++n) {
    q.reschedule(0, MoveKind::straight, tau);
    worst = std::max(worst, std::abs(q.time_of(0) - (t0 + static_cast<double>(n) * tau)));
  }
  // Linear worst case: 2500 roundings of at most half an ulp near t = 1000,
  // 2500 * 2^-53 * 2^10 = 2.8e-10. Measured drift sits well inside it.
  CHECK(worst <= 2.8e-10);
  CHECK(worst > 0.0);  // the closed form genuinely differs for tau = 0.4
}
