#include "swinv/reduced_problem.hpp"

namespace swinv {

std::string_view to_string(InvariantCase c) {
  switch (c) {
    case InvariantCase::stationary_x1x3: return "stationary_x1x3";
    case InvariantCase::traveling_x2x1: return "traveling_x2x1";
    case InvariantCase::similarity_x2x3: return "similarity_x2x3";
  }
  return "unknown";
}

std::optional<InvariantCase> invariant_case_from_string(std::string_view name) {
  if (name == "stationary_x1x3") return InvariantCase::stationary_x1x3;
  if (name == "traveling_x2x1") return InvariantCase::traveling_x2x1;
  if (name == "similarity_x2x3") return InvariantCase::similarity_x2x3;
  return std::nullopt;
}

ReducedProblem::ReducedProblem(InvariantCase kind, const ModelParams& params,
                               const StationaryConstants& constants, Case2Variant variant,
                               RhsCorruption corruption)
    : kind_(kind), params_(params), constants_(constants), variant_(variant), corruption_(corruption) {
  params_.validate();
}

ReducedProblem ReducedProblem::stationary(const ModelParams& params,
                                          const StationaryConstants& constants,
                                          RhsCorruption corruption) {
  return {InvariantCase::stationary_x1x3, params, constants, Case2Variant::as_printed, corruption};
}

ReducedProblem ReducedProblem::traveling(const ModelParams& params, Case2Variant variant,
                                         RhsCorruption corruption) {
  return {InvariantCase::traveling_x2x1, params, {}, variant, corruption};
}

ReducedProblem ReducedProblem::similarity(const ModelParams& params, RhsCorruption corruption) {
  return {InvariantCase::similarity_x2x3, params, {}, Case2Variant::as_printed, corruption};
}

std::size_t ReducedProblem::dimension() const {
  return kind_ == InvariantCase::stationary_x1x3 ? 1 : 3;
}

namespace {

ReducedState as_state(double s, std::span<const double> x) { return {s, x[0], x[1], x[2]}; }

}  // namespace

StateVector ReducedProblem::derivative(double s, std::span<const double> x) const {
  switch (kind_) {
    case InvariantCase::stationary_x1x3:
      return {rhs_case1(s, x[0], constants_, params_, kDefaultFloorScale, corruption_).dH};
    case InvariantCase::traveling_x2x1: {
      const auto r =
          rhs_case2(s, as_state(s, x), params_, variant_, kDefaultFloorScale, corruption_);
      return {r.dH, r.dU, r.dV};
    }
    case InvariantCase::similarity_x2x3: {
      const auto r = rhs_case3(s, as_state(s, x), params_, kDefaultFloorScale, corruption_);
      return {r.dH, r.dU, r.dV};
    }
  }
  return {};
}

std::vector<DenominatorEntry> ReducedProblem::denominators(double s,
                                                           std::span<const double> x) const {
  switch (kind_) {
    case InvariantCase::stationary_x1x3: {
      const double H3 = x[0] * x[0] * x[0];
      return {{Denominator::case1_den, 2.0 * (constants_.c1 * constants_.c1 - 2.0 * H3)}};
    }
    case InvariantCase::traveling_x2x1: {
      const double H = x[0];
      const double U = x[1];
      const double V = x[2];
      const double Dh = 2.0 * H * (s * s + 1.0) - (U - V * s) * (U - V * s);
      // Du = (U - Vz) Dh; the linear factor is monitored so the floor is not applied to a cubic.
      return {{Denominator::case2_Dh, Dh}, {Denominator::case2_Du, U - V * s}};
    }
    case InvariantCase::similarity_x2x3: {
      const double shift = x[2] + s;
      return {{Denominator::case3_main, 2.0 * x[0] - shift * shift},
              {Denominator::case3_VplusZ, shift}};
    }
  }
  return {};
}

DenominatorReport ReducedProblem::denominator_report(double s, std::span<const double> x) const {
  const auto entries = denominators(s, x);
  if (kind_ == InvariantCase::stationary_x1x3) return DenominatorReport::make(entries[0].value);
  if (kind_ == InvariantCase::traveling_x2x1) {
    return DenominatorReport::make(entries[0].value, entries[1].value * entries[0].value);
  }
  return DenominatorReport::make(entries[0].value, entries[1].value);
}

StateVector ReducedProblem::initial_vector(const ReducedState& st) const {
  if (kind_ == InvariantCase::stationary_x1x3) return {st.H};
  return {st.H, st.U, st.V};
}

ReducedState ReducedProblem::expand(double s, std::span<const double> x) const {
  if (kind_ == InvariantCase::stationary_x1x3) {
    const auto uv = algebraic_case1(s, x[0], constants_, params_);
    return {s, x[0], uv.U, uv.V};
  }
  return as_state(s, x);
}

ReducedRate ReducedProblem::expand_rate(double s, std::span<const double> x) const {
  if (kind_ == InvariantCase::stationary_x1x3) {
    const auto r = rhs_case1(s, x[0], constants_, params_, kDefaultFloorScale, corruption_);
    const double H = x[0];
    return {r.dH, params_.omega * s, -constants_.c1 * r.dH / (H * H), r.den};
  }
  if (kind_ == InvariantCase::traveling_x2x1) {
    return rhs_case2(s, as_state(s, x), params_, variant_, kDefaultFloorScale, corruption_);
  }
  return rhs_case3(s, as_state(s, x), params_, kDefaultFloorScale, corruption_);
}

Trajectory integrate(const ReducedProblem& problem, const IntegrationConfig& cfg,
                     const ReducedState& initial) {
  const StateVector x0 = problem.initial_vector(initial);
  return integrate(static_cast<const OdeSystem&>(problem), cfg, x0);
}

}  // namespace swinv
