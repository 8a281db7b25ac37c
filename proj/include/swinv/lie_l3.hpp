#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swinv::lie {

/// Coefficients of X = x1*X1 + x2*X2 + x3*X3 in the basis of the three-dimensional
/// symmetry algebra: X1 = d/dt, X2 the scaling generator, X3 = d/dx.
struct GeneratorCoeffs {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  [[nodiscard]] bool is_finite() const;
  [[nodiscard]] double norm() const;
  [[nodiscard]] double max_abs() const;

  friend GeneratorCoeffs operator+(const GeneratorCoeffs& a, const GeneratorCoeffs& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
  }
  friend GeneratorCoeffs operator-(const GeneratorCoeffs& a, const GeneratorCoeffs& b) {
    return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
  }
  friend GeneratorCoeffs operator-(const GeneratorCoeffs& a) { return {-a.x1, -a.x2, -a.x3}; }
  friend GeneratorCoeffs operator*(double s, const GeneratorCoeffs& a) {
    return {s * a.x1, s * a.x2, s * a.x3};
  }
  friend bool operator==(const GeneratorCoeffs&, const GeneratorCoeffs&) = default;
};

inline constexpr GeneratorCoeffs kX1{1.0, 0.0, 0.0};
inline constexpr GeneratorCoeffs kX2{0.0, 1.0, 0.0};
inline constexpr GeneratorCoeffs kX3{0.0, 0.0, 1.0};

/// The only parameter the brackets depend on: k = q / Omega.
struct StructureConstants {
  double k = 0.0;

  static StructureConstants from_model(double q, double omega);
};

/// [a, b] with [X1,X2] = -X1 + 4k X3, [X2,X3] = -X3, [X1,X3] = 0.
GeneratorCoeffs bracket(const GeneratorCoeffs& a, const GeneratorCoeffs& b,
                        const StructureConstants& sc);

enum class Automorphism { A1, A2, A3 };

std::string_view to_string(Automorphism which);

/// One-parameter inner automorphism exp(a ad X_i) acting on coefficient vectors.
GeneratorCoeffs apply_automorphism(Automorphism which, double a, const GeneratorCoeffs& v,
                                   const StructureConstants& sc);

class DegenerateBasis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear dependence threshold on |e1 x e2| relative to the largest squared coefficient.
inline constexpr double kDependenceTolerance = 1e-12;

/// Distance of `w` from span{e1, e2}, by least-squares projection.
double distance_from_span(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                          const GeneratorCoeffs& w);

/// True iff [e1, e2] lies in span{e1, e2} to within `tol`.
/// Throws DegenerateBasis if e1 and e2 are linearly dependent.
bool is_subalgebra(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                   const StructureConstants& sc, double tol);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst residual, or located value for scans
  double threshold = 0.0;
  std::string detail;
};

struct OptimalSystemReport {
  double k = 0.0;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const;
  /// Name of the first failing check, empty when everything passed.
  [[nodiscard]] std::string first_failure() const;
  [[nodiscard]] std::string to_text() const;
};

struct OptimalSystemOptions {
  std::size_t beta_grid_points = 10'000;
  std::size_t random_samples = 100;
  double automorphism_tol = 1e-10;
  double identity_tol = 1e-12;
  std::uint64_t seed = 20190805;
};

/// Checks the classification of two-dimensional subalgebras:
/// bracket identities, closure of {X1,X3}, {X2, X1-2kX3}, {X2,X3}, the beta scan
/// isolating beta = -2k for {X2, X1+beta X3}, and bracket preservation by A1..A3.
OptimalSystemReport verify_optimal_system(const StructureConstants& sc, double tol,
                                          const OptimalSystemOptions& options = {});

}  // namespace swinv::lie
