#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "swinv/integrator.hpp"
#include "swinv/reduced_problem.hpp"

using namespace swinv;

namespace {

FunctionSystem scalar(std::function<double(double, double)> f) {
  return FunctionSystem(1, [f = std::move(f)](double s, std::span<const double> x) {
    return StateVector{f(s, x[0])};
  });
}

// x' = -1/(2x), x(0) = 1: x = sqrt(1 - s), the monitored denominator x reaches zero at s = 1.
class SqrtCollapse final : public OdeSystem {
 public:
  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] StateVector derivative(double s, std::span<const double> x) const override {
    if (std::abs(x[0]) < 1e-300) throw DenominatorVanished(Denominator::case1_den, s, x[0]);
    return {-0.5 / x[0]};
  }
  [[nodiscard]] std::vector<DenominatorEntry> denominators(double,
                                                           std::span<const double> x) const override {
    return {{Denominator::case1_den, x[0]}};
  }
};

IntegrationConfig window(double a, double b, double step) {
  IntegrationConfig cfg;
  cfg.s_start = a;
  cfg.s_end = b;
  cfg.step = step;
  return cfg;
}

const ModelParams kParams{5, 5, 1, 0};

Trajectory stationary_run(double U_a, double step = 1e-3) {
  const auto c = stationary_constants_from_ic(1.4, 1.5, U_a, 6.0, kParams);
  const auto problem = ReducedProblem::stationary(kParams, c);
  return integrate(problem, window(1.4, -1.4, step), ReducedState{1.4, 1.5, U_a, 6.0});
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("tableau satisfies the order conditions") {
    CHECK_NOTHROW(verify_rk6_tableau());
    const auto& t = rk6_tableau();
    CHECK(t.stages == 7);
    CHECK(order_condition_defect(t, 6) < 1e-14);
    double bsum = 0.0;
    for (double b : t.b) bsum += b;
    CHECK(bsum == doctest::Approx(1.0).epsilon(1e-15));
    // Forward Euler has order one only.
    const ButcherTableau euler{1, {{}}, {1.0}, {0.0}};
    CHECK(order_condition_defect(euler, 1) < 1e-15);
    CHECK(order_condition_defect(euler, 2) == doctest::Approx(0.5));
  }

  TEST_CASE("single steps on closed-form problems") {
    const auto zero = scalar([](double, double) { return 0.0; });
    const std::vector<double> x0{3.25};
    CHECK(rk6_step(zero, 0.0, x0, 0.7)[0] == 3.25);

    const auto quintic = scalar([](double s, double) { return std::pow(s, 5); });
    const std::vector<double> origin{0.0};
    CHECK(std::abs(rk6_step(quintic, 0.0, origin, 1.0)[0] - 1.0 / 6.0) < 1e-14);

    const auto relax = scalar([](double, double x) { return 1.0 - x; });
    const std::vector<double> one{1.0};
    CHECK(rk6_step(relax, 0.0, one, 0.3)[0] == 1.0);
  }

  TEST_CASE("polynomial right-hand sides of degree five are integrated exactly") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int n = 0; n < 50; ++n) {
      std::array<double, 6> a{};
      for (auto& v : a) v = U(rng);
      const auto sys = scalar([a](double s, double) {
        double acc = 0.0;
        for (int i = 5; i >= 0; --i) acc = acc * s + a[i];
        return acc;
      });
      const double s0 = U(rng);
      const double h = 0.5 * U(rng);
      const auto antiderivative = [&](double s) {
        double acc = 0.0;
        for (int i = 5; i >= 0; --i) acc = acc * s + a[i] / (i + 1);
        return acc * s;
      };
      const std::vector<double> x0{0.0};
      const double got = rk6_step(sys, s0, x0, h)[0];
      CHECK(got == doctest::Approx(antiderivative(s0 + h) - antiderivative(s0)).epsilon(1e-13).scale(1.0));
    }
  }

  TEST_CASE("exponential growth") {
    const auto grow = scalar([](double, double x) { return x; });
    const std::vector<double> x0{1.0};
    const auto traj = integrate(grow, window(0.0, 1.0, 0.01), x0);
    REQUIRE(traj.samples().size() == 101);
    CHECK(std::abs(traj.samples().back().state[0] - std::exp(1.0)) < 1e-10);
    CHECK_FALSE(traj.event());
  }

  TEST_CASE("empirical convergence order") {
    const auto grow = scalar([](double, double x) { return x; });
    const std::vector<double> x0{1.0};
    const std::vector<StepPair> pairs{{0.1, 0.05}, {0.05, 0.025}};
    const auto est = estimate_convergence_order(grow, window(0.0, 1.0, 0.1), x0, pairs,
                                                StateVector{std::exp(1.0)});
    REQUIRE(est.order);
    CHECK(*est.order >= 5.5);
    CHECK(*est.order <= 6.5);

    const auto without_exact = estimate_convergence_order(grow, window(0.0, 1.0, 0.1), x0, pairs);
    REQUIRE(without_exact.order);
    CHECK(*without_exact.order >= 5.5);

    const auto zero = scalar([](double, double) { return 0.0; });
    const auto flat = estimate_convergence_order(zero, window(0.0, 1.0, 0.1), x0, pairs, StateVector{1.0});
    CHECK(flat.exact);
    CHECK_FALSE(flat.order);
  }

  TEST_CASE("stationary run conserves the third integral") {
    const auto c = stationary_constants_from_ic(1.4, 1.5, 0.317, 6.0, kParams);
    const auto traj = stationary_run(0.317);
    CHECK_FALSE(traj.event());
    CHECK(traj.s_back() == doctest::Approx(-1.4));
    double drift = 0.0;
    for (const auto& smp : traj.samples())
      drift = std::max(drift, std::abs(conserved_case1(smp.s, smp.state[0], c, kParams)));
    CHECK(drift < 1e-8);
  }

  TEST_CASE("integrating back recovers the initial state") {
    const auto c = stationary_constants_from_ic(1.4, 1.5, 0.317, 6.0, kParams);
    const auto problem = ReducedProblem::stationary(kParams, c);
    const auto forward = integrate(problem, window(1.4, -1.4, 1e-3), ReducedState{1.4, 1.5, 0.317, 6.0});
    REQUIRE_FALSE(forward.event());
    const double H_end = forward.samples().back().state[0];
    const std::vector<double> back_start{H_end};
    const auto back = integrate(problem, window(-1.4, 1.4, 1e-3), back_start);
    REQUIRE_FALSE(back.event());
    CHECK(std::abs(back.samples().back().state[0] - 1.5) < 1e-7);
  }

  TEST_CASE("runs are deterministic") {
    const auto a = stationary_run(0.31);
    const auto b = stationary_run(0.31);
    REQUIRE(a.samples().size() == b.samples().size());
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
      CHECK(same_bits(a.samples()[i].s, b.samples()[i].s));
      CHECK(same_bits(a.samples()[i].state[0], b.samples()[i].state[0]));
    }
    REQUIRE(a.event());
    REQUIRE(b.event());
    CHECK(same_bits(a.event()->s, b.event()->s));
  }

  TEST_CASE("fold of the stationary solution is located") {
    const auto traj = stationary_run(0.31);
    REQUIRE(traj.event());
    const auto& ev = *traj.event();
    CHECK(ev.which == Denominator::case1_den);
    CHECK(ev.s == doctest::Approx(0.7085).epsilon(1e-3));
    CHECK(ev.bracket_width <= 1e-9);
    // The trajectory stops at the last grid node on the safe side.
    CHECK(traj.s_back() > ev.s);
    CHECK(traj.s_back() - ev.s < 1e-3 + 1e-12);
    // Halving the step moves the event by far less than one step.
    const auto fine = stationary_run(0.31, 5e-4);
    REQUIRE(fine.event());
    CHECK(std::abs(fine.event()->s - ev.s) < 1e-5);
  }

  TEST_CASE("event is sound on a closed-form collapse") {
    const SqrtCollapse sys;
    const std::vector<double> x0{1.0};
    const auto traj = integrate(sys, window(0.0, 2.0, 0.01), x0);
    REQUIRE(traj.event());
    const auto& ev = *traj.event();
    CHECK(ev.s <= 1.0);
    CHECK(ev.s > 1.0 - 1e-4);
    CHECK(ev.den_safe > 0.0);
    CHECK(std::abs(ev.den_safe) <= 1e-5);
    CHECK(ev.s_safe <= ev.s_unsafe);
    for (const auto& smp : traj.samples()) {
      CHECK(smp.s < ev.s + 1e-15);
      CHECK(std::abs(smp.state[0] - std::sqrt(1.0 - smp.s)) < 1e-6);
    }
  }

  TEST_CASE("error paths") {
    const SqrtCollapse sys;
    const std::vector<double> tiny{1e-8};
    try {
      (void)integrate(sys, window(0.0, 1.0, 0.01), tiny);
      FAIL("expected singular_start");
    } catch (const IntegrationError& e) {
      CHECK(e.kind() == IntegrationError::Kind::singular_start);
    }

    const auto grow = scalar([](double, double x) { return x; });
    const std::vector<double> x0{1.0};
    auto cfg = window(0.0, 1.0, 0.01);
    cfg.max_steps = 10;
    try {
      (void)integrate(grow, cfg, x0);
      FAIL("expected step_limit");
    } catch (const IntegrationError& e) {
      CHECK(e.kind() == IntegrationError::Kind::step_limit);
    }

    CHECK_THROWS_AS((void)integrate(grow, window(0.0, 1.0, -0.1), x0), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(grow, window(0.0, NAN, 0.1), x0), std::invalid_argument);
  }

  TEST_CASE("dense output") {
    const auto cubic = scalar([](double s, double) { return 3.0 * s * s; });
    const std::vector<double> x0{0.0};
    const auto traj = integrate(cubic, window(0.0, 1.0, 0.1), x0);
    for (double s : {0.05, 0.333, 0.5, 0.91, 1.0}) CHECK(traj.interpolate(s)[0] == doctest::Approx(s * s * s).epsilon(1e-13));
    CHECK(traj.covers(0.5));
    CHECK_FALSE(traj.covers(1.5));
    CHECK_THROWS_AS((void)traj.interpolate(-0.01), std::out_of_range);

    const auto back = integrate(cubic, window(1.0, 0.0, 0.1), std::vector<double>{1.0});
    CHECK(back.s_min() == 0.0);
    CHECK(back.s_max() == 1.0);
    CHECK(back.interpolate(0.25)[0] == doctest::Approx(0.015625).epsilon(1e-13));
  }
}
