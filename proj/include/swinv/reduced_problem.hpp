#pragma once

#include <optional>
#include <string_view>

#include "swinv/integrator.hpp"
#include "swinv/reduced_systems.hpp"

namespace swinv {

/// The three classes of invariant solutions, named by the subalgebra they are invariant under.
enum class InvariantCase { stationary_x1x3, traveling_x2x1, similarity_x2x3 };

std::string_view to_string(InvariantCase c);
std::optional<InvariantCase> invariant_case_from_string(std::string_view name);

/// Reduced ODE system selected by case, parameters and (stationary case) quadrature constants.
///
/// The stationary case integrates H alone; U and V follow algebraically from the first
/// integrals. The other two cases integrate (H, U, V).
class ReducedProblem final : public OdeSystem {
 public:
  static ReducedProblem stationary(const ModelParams& params, const StationaryConstants& constants,
                                   RhsCorruption corruption = RhsCorruption::none);
  static ReducedProblem traveling(const ModelParams& params, Case2Variant variant,
                                  RhsCorruption corruption = RhsCorruption::none);
  static ReducedProblem similarity(const ModelParams& params,
                                   RhsCorruption corruption = RhsCorruption::none);

  [[nodiscard]] InvariantCase kind() const { return kind_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] const StationaryConstants& constants() const { return constants_; }
  [[nodiscard]] Case2Variant variant() const { return variant_; }

  [[nodiscard]] std::size_t dimension() const override;
  [[nodiscard]] StateVector derivative(double s, std::span<const double> x) const override;
  [[nodiscard]] std::vector<DenominatorEntry> denominators(double s,
                                                           std::span<const double> x) const override;
  [[nodiscard]] DenominatorReport denominator_report(double s,
                                                     std::span<const double> x) const override;

  /// ODE state vector for a reduced initial state (H only for the stationary case).
  [[nodiscard]] StateVector initial_vector(const ReducedState& st) const;
  /// Full (H, U, V) at abscissa s from an ODE state.
  [[nodiscard]] ReducedState expand(double s, std::span<const double> x) const;
  /// (dH, dU, dV) at abscissa s; the stationary case differentiates the algebraic relations.
  [[nodiscard]] ReducedRate expand_rate(double s, std::span<const double> x) const;

 private:
  ReducedProblem(InvariantCase kind, const ModelParams& params, const StationaryConstants& constants,
                 Case2Variant variant, RhsCorruption corruption);

  InvariantCase kind_;
  ModelParams params_;
  StationaryConstants constants_;
  Case2Variant variant_;
  RhsCorruption corruption_;
};

/// Convenience: integrate a reduced problem from a reduced initial state at cfg.s_start.
Trajectory integrate(const ReducedProblem& problem, const IntegrationConfig& cfg,
                     const ReducedState& initial);

}  // namespace swinv
