#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swinv/integrator.hpp"
#include "swinv/reduced_problem.hpp"
#include "swinv/reduced_systems.hpp"

namespace swinv {

struct FieldSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct ResidualTriple {
  double r_mass = 0.0;
  double r_momx = 0.0;
  double r_momy = 0.0;

  [[nodiscard]] std::array<double, 3> components() const { return {r_mass, r_momx, r_momy}; }
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool is_finite() const;
};

struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct BottomGradient {
  double B = 0.0;
  double Bx = 0.0;
  double By = 0.0;
};

/// B = q3 y^4 - q y^2 and its gradient.
BottomGradient bottom_and_gradient(const ModelParams& p, double x, double y);

using FieldSampler = std::function<FieldSample(double t, double x, double y)>;

/// Stationary fields: h = H(y), u and v from the first integrals. Throws std::out_of_range
/// when y is outside the trajectory.
FieldSample sample_case1(const Trajectory& traj, const StationaryConstants& c, const ModelParams& p,
                         double t, double x, double y);

/// h = y^4 H(z), u = -2q/omega + y^2 U(z), v = y^2 V(z), z = (x + 2(q/omega) t)/y.
/// Throws std::invalid_argument at y = 0 and std::out_of_range when z is not covered.
FieldSample sample_case2(const Trajectory& traj, const ModelParams& p, double t, double x, double y);

/// h = t^-4 H(z), u = -2q/omega + t^-2 U(z), v = t^-2 V(z), z = y t.
/// Throws std::invalid_argument at t = 0 and std::out_of_range when z is not covered.
FieldSample sample_case3(const Trajectory& traj, const ModelParams& p, double t, double x, double y);

/// Invariant coordinate of a spacetime point for the given case (y for the stationary case).
double reduced_coordinate(InvariantCase kind, const ModelParams& p, double t, double x, double y);

/// Sampler bound to a problem and its trajectory. The trajectory is copied into the closure.
FieldSampler make_sampler(const ReducedProblem& problem, const Trajectory& traj);

/// Central differences of the three fields along t, x and y.
struct FieldDerivatives {
  FieldSample center;
  std::array<double, 3> h{};  // (d/dt, d/dx, d/dy)
  std::array<double, 3> u{};
  std::array<double, 3> v{};
};

FieldDerivatives central_differences(const FieldSampler& sampler, const SpacetimePoint& point,
                                     double delta);

/// Residual of the mass and momentum equations with f = omega*y, from second-order central
/// differences of spacing delta on the 7-point stencil around `point`.
ResidualTriple pde_residual(const FieldSampler& sampler, const ModelParams& p,
                            const SpacetimePoint& point, double delta);

struct ResidualOptions {
  double delta = 1e-3;
  double threshold = 1e-4;
  double ratio_lo = 3.5;
  double ratio_hi = 4.5;
  double noise_floor = 1e-9;         // components below this are exempt from the ratio test
  double endpoint_margin = 5.0;      // in units of delta
  double singularity_margin = 0.1;
  int abscissae = 5;                 // reduced-coordinate samples per (t, y) line
};

/// Default evaluation grid. The reduced coordinate runs over evenly spaced interior values
/// of the admissible window; a point is kept only if its whole stencil stays inside it.
/// Stationary: t = 0, x = 0. Traveling: y in {0.5, 1, 2}, t in {0, 1}. Similarity: t in
/// {0.5, 1, 2}, x = 0.
std::vector<SpacetimePoint> default_residual_points(const ReducedProblem& problem,
                                                    const Trajectory& traj,
                                                    const ResidualOptions& options = {});

struct ResidualPointReport {
  SpacetimePoint point;
  ResidualTriple coarse;  // spacing delta
  ResidualTriple fine;    // spacing delta/2
};

struct ResidualStudy {
  double delta = 0.0;
  double noise_floor = 0.0;  // components below it print as noise
  std::vector<ResidualPointReport> points;
  std::array<double, 3> max_coarse{};
  std::array<double, 3> max_fine{};
  std::array<std::optional<double>, 3> ratios;  // empty: below the noise floor
  double max_residual = 0.0;
  bool residual_ok = false;
  bool ratios_ok = false;
  std::string failure;  // empty when passed

  [[nodiscard]] bool passed() const { return failure.empty(); }
  /// Deterministic text. The body lists only residual results, not parameters.
  [[nodiscard]] std::string to_text() const;
};

ResidualStudy residual_study(const FieldSampler& sampler, const ModelParams& p,
                             const std::vector<SpacetimePoint>& points,
                             const ResidualOptions& options = {});

/// Default grid plus study for a problem and its trajectory.
ResidualStudy residual_study(const ReducedProblem& problem, const Trajectory& traj,
                             const ResidualOptions& options = {});

struct VariantTrial {
  Case2Variant variant = Case2Variant::as_printed;
  std::optional<ResidualStudy> study;
  std::string error;  // integration failure, if any
  [[nodiscard]] bool passed() const { return study && study->passed(); }
};

struct VariantResolution {
  std::optional<Case2Variant> winner;  // empty when inconclusive
  std::vector<VariantTrial> trials;
  [[nodiscard]] std::string to_text() const;
};

/// Integrates both dV-denominator variants of the traveling reduction over
/// [ics.s, ics.s + window] and keeps the one whose reconstructed fields satisfy the PDE with
/// second-order residual convergence. Results are cached per input.
VariantResolution resolve_case2_variant(const ModelParams& p, const ReducedState& ics,
                                        RhsCorruption corruption = RhsCorruption::none,
                                        double window = 1.0, const ResidualOptions& options = {});

}  // namespace swinv
