#include <cmath>
#include <random>

#include "doctest.h"
#include "swinv/reconstruction.hpp"

using namespace swinv;

namespace {

IntegrationConfig window(double a, double b, double step = 1e-3) {
  IntegrationConfig cfg;
  cfg.s_start = a;
  cfg.s_end = b;
  cfg.step = step;
  return cfg;
}

const ModelParams kPaper{5, 5, 1, 0};
const ReducedState kTravelingIcs{-30.0, 2.0, -3.0, 5.0};

// Uniform zonal flow u = c over a parabolic bottom: an exact solution for q3 = 0 whose
// fields are at most quadratic, so central differences carry no truncation error.
FieldSampler zonal_flow(const ModelParams& p, double c) {
  return [p, c](double t, double x, double y) {
    const double h = 3.0 - 0.5 * (p.q + 0.5 * p.omega * c) * y * y;
    return FieldSample{t, x, y, h, c, 0.0};
  };
}

}  // namespace

TEST_SUITE("reconstruction") {
  TEST_CASE("bottom and gradient") {
    const auto b = bottom_and_gradient(kPaper, 7.0, 1.0);
    CHECK(b.B == 0.0);
    CHECK(b.Bx == 0.0);
    CHECK(b.By == doctest::Approx(10.0));
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int n = 0; n < 50; ++n) {
      const ModelParams p{U(rng), U(rng), 1.0, 0};
      const double y = U(rng);
      const double e = 1e-6;
      const double fd = (bottom_and_gradient(p, 0, y + e).B - bottom_and_gradient(p, 0, y - e).B) / (2 * e);
      CHECK(bottom_and_gradient(p, 0, y).By == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }

  TEST_CASE("reduced coordinates") {
    CHECK(reduced_coordinate(InvariantCase::stationary_x1x3, kPaper, 3, 4, 0.25) == 0.25);
    CHECK(reduced_coordinate(InvariantCase::traveling_x2x1, kPaper, 1.0, 2.0, 2.0) == doctest::Approx(6.0));
    CHECK(reduced_coordinate(InvariantCase::similarity_x2x3, kPaper, 2.0, 9.0, 1.5) == doctest::Approx(3.0));
  }

  TEST_CASE("stationary sampler reproduces the initial data") {
    const auto c = stationary_constants_from_ic(1.4, 1.5, 0.317, 6.0, kPaper);
    const auto problem = ReducedProblem::stationary(kPaper, c);
    const auto traj = integrate(problem, window(1.4, 0.0), ReducedState{1.4, 1.5, 0.317, 6.0});
    const auto f = sample_case1(traj, c, kPaper, 12.0, -3.0, 1.4);
    CHECK(f.h == doctest::Approx(1.5));
    CHECK(f.u == doctest::Approx(0.317));
    CHECK(f.v == doctest::Approx(6.0));
    CHECK_THROWS_AS((void)sample_case1(traj, c, kPaper, 0, 0, 2.0), std::out_of_range);
  }

  TEST_CASE("traveling and similarity samplers") {
    const auto trav = ReducedProblem::traveling(kPaper, Case2Variant::as_printed);
    const auto ttraj = integrate(trav, window(-30.0, -29.0), kTravelingIcs);
    const double k = kPaper.ratio();
    // z = -30 at y = 0.5, t = 1.
    const auto f = sample_case2(ttraj, kPaper, 1.0, -30.0 * 0.5 - 2.0 * k, 0.5);
    CHECK(f.h == doctest::Approx(2.0 * 0.0625));
    CHECK(f.u == doctest::Approx(-2.0 * k - 3.0 * 0.25));
    CHECK(f.v == doctest::Approx(5.0 * 0.25));
    CHECK_THROWS_AS((void)sample_case2(ttraj, kPaper, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_case2(ttraj, kPaper, 0.0, 0.0, 1.0), std::out_of_range);

    const ModelParams p3{5, 1, 1, 0};
    const auto sim = ReducedProblem::similarity(p3);
    const auto straj = integrate(sim, window(1.0, 2.0), ReducedState{1.0, 5.0, 0.5, 0.0});
    // At t = 2 and y = 0.75 the coordinate is z = 1.5; h = H(1.5)/16.
    const double H15 = straj.interpolate(1.5)[0];
    const auto g = sample_case3(straj, p3, 2.0, 0.0, 0.75);
    CHECK(g.h == doctest::Approx(H15 / 16.0).epsilon(1e-14));
    CHECK(g.u == doctest::Approx(-10.0 + straj.interpolate(1.5)[1] / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)sample_case3(straj, p3, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_case3(straj, p3, 1.0, 0.0, 5.0), std::out_of_range);
  }

  TEST_CASE("central differences are exact on linear fields") {
    const FieldSampler lin = [](double t, double x, double y) {
      return FieldSample{t, x, y, 1 + 2 * t - x + 3 * y, 4 * x, -y + 0.5 * t};
    };
    const auto d = central_differences(lin, {0.3, -0.2, 1.1}, 1e-3);
    CHECK(d.h[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(d.h[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(d.h[2] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(d.u[1] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(d.v[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(d.v[2] == doctest::Approx(-1.0).epsilon(1e-10));
  }

  TEST_CASE("exact solutions have vanishing residual") {
    for (double c : {0.0, 0.7, -2.0}) {
      const ModelParams p{3.0, 0.0, 1.3, 0};
      const auto f = zonal_flow(p, c);
      for (double y : {-1.0, 0.4, 2.0}) {
        const auto r = pde_residual(f, p, {0.5, 1.0, y}, 1e-3);
        CHECK(r.is_finite());
        CHECK(r.max_abs() < 1e-9);
      }
      // The wrong Coriolis sign breaks momentum balance whenever the flow moves.
      const auto wrong = pde_residual(zonal_flow(p, c), ModelParams{3.0, 0.0, -1.3, 0}, {0, 0, 1.0}, 1e-3);
      CHECK((c == 0.0) == (wrong.max_abs() < 1e-9));
    }
    const auto study = residual_study(zonal_flow(kPaper, 0.5), ModelParams{5, 0, 1, 0},
                                      {{0, 0, 0.5}, {1, 2, 1.5}});
    CHECK(study.passed());
    CHECK_FALSE(study.ratios[0]);
  }

  TEST_CASE("stationary reconstruction satisfies the PDE at second order") {
    const auto c = stationary_constants_from_ic(1.4, 1.5, 0.317, 6.0, kPaper);
    const auto problem = ReducedProblem::stationary(kPaper, c);
    const auto traj = integrate(problem, window(1.4, -1.4), ReducedState{1.4, 1.5, 0.317, 6.0});
    const auto study = residual_study(problem, traj);
    INFO(study.to_text());
    CHECK(study.passed());
    CHECK(study.max_residual < 1e-4);
    for (const auto& r : study.ratios)
      if (r) CHECK(*r == doctest::Approx(4.0).epsilon(0.05));
    // Stationary and x-independent fields.
    const auto f = make_sampler(problem, traj);
    const auto a = f(0.0, 0.0, 0.3);
    const auto b = f(5.0, -2.0, 0.3);
    CHECK(a.h == b.h);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
  }

  TEST_CASE("traveling reconstruction satisfies the PDE at second order") {
    const auto problem = ReducedProblem::traveling(kPaper, Case2Variant::as_printed);
    const auto traj = integrate(problem, window(-30.0, 0.0), kTravelingIcs);
    const auto study = residual_study(problem, traj);
    INFO(study.to_text());
    CHECK_FALSE(study.points.empty());
    CHECK(study.passed());
    for (const auto& r : study.ratios)
      if (r) CHECK(*r == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("similarity residual does not depend on q") {
    const ReducedState ics{1.0, 5.0, 0.5, 0.0};
    double reference = 0.0;
    for (double q : {0.0, 5.0, 10.0}) {
      const ModelParams p{q, 1.0, 1.0, 0};
      const auto problem = ReducedProblem::similarity(p);
      const auto traj = integrate(problem, window(1.0, 2.0), ics);
      const auto study = residual_study(problem, traj);
      INFO(study.to_text());
      REQUIRE_FALSE(study.points.empty());
      for (const auto& r : study.ratios)
        if (r) CHECK(*r == doctest::Approx(4.0).epsilon(0.1));
      if (q == 0.0) reference = study.max_residual;
      CHECK(std::abs(study.max_residual - reference) <= 1e-10 * reference);
    }
  }

  TEST_CASE("variant resolution") {
    const auto res = resolve_case2_variant(kPaper, kTravelingIcs);
    INFO(res.to_text());
    REQUIRE(res.winner);
    CHECK(*res.winner == Case2Variant::as_printed);
    CHECK(res.trials.size() == 2);
    CHECK(res.to_text().find("selected: as_printed") != std::string::npos);

    const auto bad = resolve_case2_variant(kPaper, kTravelingIcs, RhsCorruption::flip_height_numerator);
    CHECK_FALSE(bad.winner);
    CHECK(bad.to_text().find("selected: inconclusive") != std::string::npos);
  }
}
