#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace swinv {

/// Physical constants of the model: bottom B = q3*y^4 - q*y^2 and Coriolis f = f0 + omega*y.
/// f0 is normalized to zero by an equivalence transformation and must stay zero.
struct ModelParams {
  double q = 5.0;
  double q3 = 5.0;
  double omega = 1.0;
  double f0 = 0.0;

  /// Throws std::invalid_argument on a zero or non-finite omega, non-finite q, q3, or f0 != 0.
  void validate() const;
  [[nodiscard]] double ratio() const { return q / omega; }
  [[nodiscard]] double coriolis(double y) const { return f0 + omega * y; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// First integrals of the stationary reduction:
///   V*H = c1,  U = omega*y^2/2 + c2,
///   V^2 + omega^2 y^4/4 + omega*c2*y^2 + 4H - 2y^2(q3*y^2 - q) = c3.
struct StationaryConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Reduced unknowns at one value of the invariant coordinate (y for the stationary case, z otherwise).
struct ReducedState {
  double s = 0.0;
  double H = 0.0;
  double U = 0.0;
  double V = 0.0;

  [[nodiscard]] bool physical() const { return H > 0.0; }
  friend bool operator==(const ReducedState&, const ReducedState&) = default;
};

enum class Denominator { case1_den, case2_Dh, case2_Du, case3_main, case3_VplusZ };

std::string_view to_string(Denominator which);

/// Denominators of a reduced right-hand side at one state. d_u is absent for the stationary case.
struct DenominatorReport {
  double d_h = 0.0;
  std::optional<double> d_u;
  double min_abs = 0.0;

  static DenominatorReport make(double d_h, std::optional<double> d_u = std::nullopt);
};

/// The printed dV equation divides by D_u; the alternative divides by D_h.
enum class Case2Variant { as_printed, dh_denominator };

std::string_view to_string(Case2Variant variant);
std::optional<Case2Variant> case2_variant_from_string(std::string_view name);

/// Deliberate sign flip of the height-equation numerator, for oracle sensitivity checks.
enum class RhsCorruption { none, flip_height_numerator };

/// Raised by a right-hand side when a denominator falls below its floor.
class DenominatorVanished : public std::runtime_error {
 public:
  DenominatorVanished(Denominator which, double s, double value);

  [[nodiscard]] Denominator which() const { return which_; }
  [[nodiscard]] double abscissa() const { return s_; }
  [[nodiscard]] double value() const { return value_; }
  /// Runge-Kutta stage at which the failure happened, -1 outside a step.
  [[nodiscard]] int stage() const { return stage_; }
  void set_stage(int stage) { stage_ = stage; }

 private:
  Denominator which_;
  double s_;
  double value_;
  int stage_ = -1;
};

/// |den| < floor_scale * (1 + |numerator|) counts as a vanishing denominator.
inline constexpr double kDefaultFloorScale = 1e-12;

struct StationaryRate {
  double dH = 0.0;
  DenominatorReport den;
};

struct ReducedRate {
  double dH = 0.0;
  double dU = 0.0;
  double dV = 0.0;
  DenominatorReport den;
};

/// Throws std::invalid_argument for H_a <= 0.
StationaryConstants stationary_constants_from_ic(double a, double H_a, double U_a, double V_a,
                                                 const ModelParams& p);

/// H' = H^3 y (2 c2 omega + omega^2 y^2 + 4q - 8 q3 y^2) / (2 (c1^2 - 2H^3)).
StationaryRate rhs_case1(double y, double H, const StationaryConstants& c, const ModelParams& p,
                         double floor_scale = kDefaultFloorScale,
                         RhsCorruption corruption = RhsCorruption::none);

struct StationaryVelocity {
  double U = 0.0;
  double V = 0.0;
};

/// U = omega*y^2/2 + c2, V = c1/H. Throws std::invalid_argument for H == 0.
StationaryVelocity algebraic_case1(double y, double H, const StationaryConstants& c,
                                   const ModelParams& p);

/// Left-hand side of the third first integral minus c3. Throws std::invalid_argument for H <= 0.
double conserved_case1(double y, double H, const StationaryConstants& c, const ModelParams& p);

/// Traveling reduction, z = (x + 2(q/omega)t)/y. Never reads p.q.
ReducedRate rhs_case2(double z, const ReducedState& st, const ModelParams& p,
                      Case2Variant variant = Case2Variant::as_printed,
                      double floor_scale = kDefaultFloorScale,
                      RhsCorruption corruption = RhsCorruption::none);

/// Similarity reduction, z = y*t. Never reads p.q.
ReducedRate rhs_case3(double z, const ReducedState& st, const ModelParams& p,
                      double floor_scale = kDefaultFloorScale,
                      RhsCorruption corruption = RhsCorruption::none);

/// True iff every denominator magnitude exceeds `floor`. Throws std::invalid_argument for floor <= 0.
bool denominator_floor_check(const DenominatorReport& den, double floor);

}  // namespace swinv
