#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "swinv/reduced_systems.hpp"

namespace swinv {

using StateVector = std::vector<double>;

struct DenominatorEntry {
  Denominator which;
  double value;
};

/// First-order system x' = F(s, x) with optional named denominators to monitor.
class OdeSystem {
 public:
  virtual ~OdeSystem() = default;

  [[nodiscard]] virtual std::size_t dimension() const = 0;
  /// May throw DenominatorVanished.
  [[nodiscard]] virtual StateVector derivative(double s, std::span<const double> x) const = 0;
  /// Denominators watched for sign changes and floor violations during integration.
  [[nodiscard]] virtual std::vector<DenominatorEntry> denominators(double s,
                                                                   std::span<const double> x) const;
  /// Report stored with each sample. Defaults to the monitored values (first -> d_h,
  /// second -> d_u), or an empty report with infinite magnitudes.
  [[nodiscard]] virtual DenominatorReport denominator_report(double s,
                                                             std::span<const double> x) const;
};

/// Adapts a callable to OdeSystem, without denominators.
class FunctionSystem final : public OdeSystem {
 public:
  using Rhs = std::function<StateVector(double, std::span<const double>)>;

  FunctionSystem(std::size_t dimension, Rhs rhs) : dimension_(dimension), rhs_(std::move(rhs)) {}

  [[nodiscard]] std::size_t dimension() const override { return dimension_; }
  [[nodiscard]] StateVector derivative(double s, std::span<const double> x) const override {
    return rhs_(s, x);
  }

 private:
  std::size_t dimension_;
  Rhs rhs_;
};

struct ButcherTableau {
  std::size_t stages = 0;
  std::vector<std::vector<double>> a;  // strictly lower triangular, a[i].size() == i
  std::vector<double> b;
  std::vector<double> c;
};

/// Butcher's seven-stage sixth-order explicit scheme.
const ButcherTableau& rk6_tableau();

/// Largest |Phi(t) - 1/gamma(t)| over all rooted trees with up to `max_order` vertices.
double order_condition_defect(const ButcherTableau& tableau, int max_order);

/// Throws std::logic_error unless the tableau is consistent (c = row sums of a) and satisfies
/// every order condition through order 6.
void verify_rk6_tableau();

/// One explicit step of size h (signed). DenominatorVanished from a stage is rethrown with
/// the stage index recorded.
StateVector rk6_step(const OdeSystem& system, double s, std::span<const double> x, double h);

struct IntegrationConfig {
  double s_start = 0.0;
  double s_end = 1.0;
  double step = 1e-3;              // magnitude; direction follows sign of s_end - s_start
  double denom_floor = 1e-6;       // |den| below this counts as vanishing
  std::size_t max_steps = 10'000'000;
  double location_tol = 1e-9;      // singular abscissa bracket width
  int max_bisections = 60;
  // For systems with monitored denominators each step is repeated as two half steps; a
  // componentwise gap above consistency_tol*(1+|x|) marks the step unsafe. 0 disables.
  double consistency_tol = 1e-6;

  /// Throws std::invalid_argument on non-positive step/floor or non-finite bounds.
  void validate() const;
  [[nodiscard]] std::size_t step_count() const;
  [[nodiscard]] double direction() const { return s_end >= s_start ? 1.0 : -1.0; }
};

struct SingularityEvent {
  double s = 0.0;              // located abscissa (last safe side of the final bracket)
  Denominator which = Denominator::case1_den;
  double bracket_width = 0.0;
  double s_safe = 0.0;         // bracket endpoints
  double s_unsafe = 0.0;
  double den_safe = 0.0;       // named denominator at the endpoints
  std::optional<double> den_unsafe;  // absent when the step to s_unsafe could not complete
};

struct TrajectorySample {
  double s = 0.0;
  StateVector state;
  StateVector rate;
  DenominatorReport den;
};

/// Fixed-step solution with cubic Hermite dense output. Immutable once built.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<TrajectorySample> samples, std::optional<SingularityEvent> event);

  [[nodiscard]] const std::vector<TrajectorySample>& samples() const { return samples_; }
  [[nodiscard]] const std::optional<SingularityEvent>& event() const { return event_; }
  [[nodiscard]] bool empty() const { return samples_.empty(); }
  [[nodiscard]] double s_front() const { return samples_.front().s; }
  [[nodiscard]] double s_back() const { return samples_.back().s; }
  [[nodiscard]] double s_min() const;
  [[nodiscard]] double s_max() const;
  [[nodiscard]] bool covers(double s) const;

  /// Throws std::out_of_range outside [s_min, s_max].
  [[nodiscard]] StateVector interpolate(double s) const;

 private:
  std::vector<TrajectorySample> samples_;
  std::optional<SingularityEvent> event_;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { singular_start, step_limit, non_finite, singular_window };

  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Marches from s_start to s_end with a fixed step. When a monitored denominator changes
/// sign, drops below denom_floor, or a stage fails, the first unsafe abscissa inside the
/// step is located by bisection (bracket below location_tol and, budget permitting,
/// |den| <= 10*denom_floor on the safe side), recorded as a SingularityEvent, and the
/// trajectory is cut at the last safe node.
Trajectory integrate(const OdeSystem& system, const IntegrationConfig& cfg,
                     std::span<const double> initial);

struct StepPair {
  double coarse = 0.0;
  double fine = 0.0;
};

struct ConvergenceEstimate {
  std::optional<double> order;  // empty when every error is exactly zero
  bool exact = false;
  std::vector<double> orders;   // one per step pair
  std::vector<double> errors;   // coarse-run error (or coarse/fine difference) per pair
};

/// Empirical order from terminal states. With an exact terminal state each pair gives
/// log(e_coarse/e_fine)/log(coarse/fine); without one, a third run at fine^2/coarse is added
/// and the order comes from successive differences. Returns the smallest per-pair order.
/// Throws IntegrationError if any run ends at a singularity.
ConvergenceEstimate estimate_convergence_order(const OdeSystem& system, IntegrationConfig cfg,
                                               std::span<const double> initial,
                                               std::span<const StepPair> pairs,
                                               std::optional<StateVector> exact_terminal = {});

}  // namespace swinv
