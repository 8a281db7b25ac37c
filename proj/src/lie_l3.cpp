#include "swinv/lie_l3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace swinv::lie {

bool GeneratorCoeffs::is_finite() const {
  return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
}

double GeneratorCoeffs::norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

double GeneratorCoeffs::max_abs() const {
  return std::max({std::abs(x1), std::abs(x2), std::abs(x3)});
}

StructureConstants StructureConstants::from_model(double q, double omega) {
  if (omega == 0.0 || !std::isfinite(omega) || !std::isfinite(q)) {
    throw std::invalid_argument("structure constants need finite q and nonzero omega");
  }
  return {q / omega};
}

GeneratorCoeffs bracket(const GeneratorCoeffs& a, const GeneratorCoeffs& b,
                        const StructureConstants& sc) {
  // Only the (1,2) and (2,3) brackets are nonzero.
  const double m12 = a.x1 * b.x2 - a.x2 * b.x1;
  const double m23 = a.x2 * b.x3 - a.x3 * b.x2;
  return {-m12, 0.0, 4.0 * sc.k * m12 - m23};
}

std::string_view to_string(Automorphism which) {
  switch (which) {
    case Automorphism::A1: return "A1";
    case Automorphism::A2: return "A2";
    case Automorphism::A3: return "A3";
  }
  return "?";
}

GeneratorCoeffs apply_automorphism(Automorphism which, double a, const GeneratorCoeffs& v,
                                   const StructureConstants& sc) {
  GeneratorCoeffs out = v;
  switch (which) {
    case Automorphism::A1:
      out.x1 = v.x1 - a * v.x2;
      out.x3 = v.x3 + 4.0 * sc.k * a * v.x2;
      break;
    case Automorphism::A2: {
      const double ep = std::exp(a);
      const double em = std::exp(-a);
      out.x1 = v.x1 * ep;
      out.x3 = 2.0 * sc.k * v.x1 * (em - ep) + v.x3 * em;
      break;
    }
    case Automorphism::A3:
      out.x3 = v.x3 + a * v.x2;
      break;
  }
  return out;
}

namespace {

double dot(const GeneratorCoeffs& a, const GeneratorCoeffs& b) {
  return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

GeneratorCoeffs cross(const GeneratorCoeffs& a, const GeneratorCoeffs& b) {
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1};
}

bool linearly_dependent(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2) {
  const double scale = std::max(e1.max_abs(), e2.max_abs());
  if (scale == 0.0) return true;
  return cross(e1, e2).norm() <= kDependenceTolerance * scale * scale;
}

// Signed volume spanned by e1, e2 and [e1, e2]; vanishes exactly on closure.
double closure_determinant(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                           const StructureConstants& sc) {
  return dot(cross(e1, e2), bracket(e1, e2, sc));
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

double distance_from_span(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                          const GeneratorCoeffs& w) {
  const double g11 = dot(e1, e1);
  const double g12 = dot(e1, e2);
  const double g22 = dot(e2, e2);
  const double r1 = dot(e1, w);
  const double r2 = dot(e2, w);
  const double det = g11 * g22 - g12 * g12;
  const double alpha = (r1 * g22 - r2 * g12) / det;
  const double beta = (g11 * r2 - g12 * r1) / det;
  return (w - alpha * e1 - beta * e2).norm();
}

bool is_subalgebra(const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                   const StructureConstants& sc, double tol) {
  if (linearly_dependent(e1, e2)) {
    throw DegenerateBasis("subalgebra basis vectors are linearly dependent");
  }
  return distance_from_span(e1, e2, bracket(e1, e2, sc)) <= tol;
}

bool OptimalSystemReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string OptimalSystemReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return {};
}

std::string OptimalSystemReport::to_text() const {
  std::ostringstream os;
  os << "lie-check k=q/omega=" << format_number(k) << "\n";
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_number(c.measured)
       << " threshold=" << format_number(c.threshold);
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  os << (passed() ? "all checks passed" : "failed: " + first_failure()) << "\n";
  return os.str();
}

namespace {

CheckResult closure_check(std::string name, const GeneratorCoeffs& e1, const GeneratorCoeffs& e2,
                          const StructureConstants& sc, double tol) {
  CheckResult r{std::move(name), false, 0.0, tol, {}};
  if (linearly_dependent(e1, e2)) {
    r.detail = "degenerate basis";
    return r;
  }
  r.measured = distance_from_span(e1, e2, bracket(e1, e2, sc));
  r.passed = r.measured <= tol;
  return r;
}

CheckResult beta_scan(const StructureConstants& sc, double tol, std::size_t points) {
  CheckResult r{"beta-scan {X2, X1+beta*X3}", false, 0.0, tol, {}};
  const double half_width = 10.0 * std::abs(sc.k) + 1.0;
  const double lo = -half_width;
  const double hi = half_width;
  const auto second = [](double beta) { return GeneratorCoeffs{1.0, 0.0, beta}; };
  const auto signed_closure = [&](double beta) {
    return closure_determinant(kX2, second(beta), sc);
  };
  const auto beta_at = [&](std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  };

  std::vector<std::size_t> closed_points;
  std::vector<std::size_t> root_cells;  // cell i spans [beta_i, beta_{i+1}]
  double previous = signed_closure(beta_at(0));
  for (std::size_t i = 0; i < points; ++i) {
    const double beta = beta_at(i);
    const double value = signed_closure(beta);
    if (distance_from_span(kX2, second(beta), bracket(kX2, second(beta), sc)) <= tol) {
      closed_points.push_back(i);
    }
    if (i > 0 && (previous * value < 0.0 || (value == 0.0 && previous != 0.0))) {
      root_cells.push_back(i - 1);
    }
    previous = value;
  }
  if (signed_closure(beta_at(0)) == 0.0) root_cells.insert(root_cells.begin(), 0);

  if (root_cells.size() != 1) {
    r.detail = std::to_string(root_cells.size()) + " closure crossings on the grid";
    return r;
  }
  const std::size_t cell = root_cells.front();
  for (std::size_t i : closed_points) {
    if (i != cell && i != cell + 1) {
      r.detail = "grid point beta=" + format_number(beta_at(i)) + " closed away from the crossing";
      return r;
    }
  }

  double a = beta_at(cell);
  double b = beta_at(std::min(cell + 1, points - 1));
  double fa = signed_closure(a);
  for (int it = 0; it < 200 && b - a > 0.0; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = signed_closure(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  const double located = (fa == 0.0) ? a : 0.5 * (a + b);
  const double expected = -2.0 * sc.k;
  const double closure_residual =
      distance_from_span(kX2, second(located), bracket(kX2, second(located), sc));
  r.measured = std::abs(located - expected);
  r.passed = r.measured <= tol && closure_residual <= tol;
  r.detail = "located beta=" + format_number(located) + ", expected " + format_number(expected) +
             ", closed grid points " + std::to_string(closed_points.size());
  return r;
}

}  // namespace

OptimalSystemReport verify_optimal_system(const StructureConstants& sc, double tol,
                                          const OptimalSystemOptions& options) {
  if (!std::isfinite(sc.k)) throw std::invalid_argument("k must be finite");
  OptimalSystemReport report;
  report.k = sc.k;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> param(-2.0, 2.0);
  const auto random_vector = [&] { return GeneratorCoeffs{unit(rng), unit(rng), unit(rng)}; };

  double antisymmetry = 0.0;
  double jacobi = 0.0;
  for (std::size_t i = 0; i < options.random_samples; ++i) {
    const auto a = random_vector();
    const auto b = random_vector();
    const auto c = random_vector();
    antisymmetry = std::max(antisymmetry, (bracket(a, b, sc) + bracket(b, a, sc)).norm());
    const auto cyclic = bracket(a, bracket(b, c, sc), sc) + bracket(b, bracket(c, a, sc), sc) +
                        bracket(c, bracket(a, b, sc), sc);
    jacobi = std::max(jacobi, cyclic.norm());
  }
  report.checks.push_back({"antisymmetry", antisymmetry <= options.identity_tol, antisymmetry,
                           options.identity_tol, {}});
  report.checks.push_back(
      {"jacobi identity", jacobi <= options.identity_tol, jacobi, options.identity_tol, {}});

  report.checks.push_back(closure_check("closed {X1,X3}", kX1, kX3, sc, tol));
  report.checks.push_back(
      closure_check("closed {X2, X1-2k*X3}", kX2, GeneratorCoeffs{1.0, 0.0, -2.0 * sc.k}, sc, tol));
  report.checks.push_back(closure_check("closed {X2,X3}", kX2, kX3, sc, tol));
  report.checks.push_back(beta_scan(sc, tol, options.beta_grid_points));

  for (Automorphism which : {Automorphism::A1, Automorphism::A2, Automorphism::A3}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < options.random_samples; ++i) {
      const auto u = random_vector();
      const auto v = random_vector();
      const double a = param(rng);
      const auto lhs = bracket(apply_automorphism(which, a, u, sc),
                               apply_automorphism(which, a, v, sc), sc);
      const auto rhs = apply_automorphism(which, a, bracket(u, v, sc), sc);
      worst = std::max(worst, (lhs - rhs).norm());
    }
    report.checks.push_back({"automorphism " + std::string(to_string(which)) + " preserves brackets",
                             worst <= options.automorphism_tol, worst, options.automorphism_tol,
                             {}});
  }
  return report;
}

}  // namespace swinv::lie
