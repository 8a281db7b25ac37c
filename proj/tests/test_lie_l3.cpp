#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "swinv/lie_l3.hpp"

using namespace swinv::lie;

namespace {

using Vec = std::array<double, 3>;
using Mat = std::array<Vec, 3>;

// Structure tensor: [X_i, X_j] = sum_l C[i][j][l] X_l, filled from the commutator table only.
std::array<Mat, 3> structure_tensor(double k) {
  std::array<Mat, 3> c{};
  c[0][1] = {-1.0, 0.0, 4.0 * k};  // [X1,X2]
  c[1][0] = {1.0, 0.0, -4.0 * k};
  c[1][2] = {0.0, 0.0, -1.0};  // [X2,X3]
  c[2][1] = {0.0, 0.0, 1.0};
  return c;
}

Vec tensor_bracket(const Vec& a, const Vec& b, double k) {
  const auto c = structure_tensor(k);
  Vec out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) out[l] += a[i] * b[j] * c[i][j][l];
  return out;
}

Vec as_vec(const GeneratorCoeffs& g) { return {g.x1, g.x2, g.x3}; }
GeneratorCoeffs as_gen(const Vec& v) { return {v[0], v[1], v[2]}; }

// exp(a ad X_i) applied to v by summing the series.
Vec series_exp_ad(int i, double a, const Vec& v, double k) {
  Vec basis{};
  basis[i] = 1.0;
  Vec term = v;
  Vec sum = v;
  for (int n = 1; n < 60; ++n) {
    term = tensor_bracket(basis, term, k);
    for (auto& t : term) t *= a / n;
    for (int l = 0; l < 3; ++l) sum[l] += term[l];
  }
  return sum;
}

double dist(const Vec& a, const Vec& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

GeneratorCoeffs random_gen(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  return {d(rng), d(rng), d(rng)};
}

// Rank-2 test by explicit 3x3 determinant of (e1, e2, w).
double triple(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

TEST_SUITE("lie_l3") {
  TEST_CASE("commutator table entries") {
    const StructureConstants k1{1.0};
    CHECK(bracket(kX1, kX3, k1) == GeneratorCoeffs{0, 0, 0});
    CHECK(bracket(kX1, kX2, k1) == GeneratorCoeffs{-1, 0, 4});
    CHECK(bracket(kX2, kX3, StructureConstants{7.5}) == GeneratorCoeffs{0, 0, -1});
    const GeneratorCoeffs a{0.3, -2, 7};
    CHECK(bracket(a, a, StructureConstants{2.0}).max_abs() == 0.0);
  }

  TEST_CASE("bracket matches the structure tensor on random pairs") {
    std::mt19937_64 rng(7);
    for (double k : {0.0, 1.0, 5.0, -3.0}) {
      for (int n = 0; n < 200; ++n) {
        const auto a = random_gen(rng);
        const auto b = random_gen(rng);
        CHECK(dist(as_vec(bracket(a, b, StructureConstants{k})), tensor_bracket(as_vec(a), as_vec(b), k)) <
              1e-12);
      }
    }
  }

  TEST_CASE("antisymmetry and Jacobi on random triples") {
    std::mt19937_64 rng(11);
    for (double k : {0.0, 1.0, 5.0, -3.0}) {
      const StructureConstants sc{k};
      for (int n = 0; n < 200; ++n) {
        const auto a = random_gen(rng);
        const auto b = random_gen(rng);
        const auto c = random_gen(rng);
        CHECK((bracket(a, b, sc) + bracket(b, a, sc)).max_abs() == 0.0);
        const auto jac = bracket(a, bracket(b, c, sc), sc) + bracket(b, bracket(c, a, sc), sc) +
                         bracket(c, bracket(a, b, sc), sc);
        CHECK(jac.norm() < 1e-12);
      }
    }
  }

  TEST_CASE("automorphism examples") {
    const StructureConstants k1{1.0};
    CHECK(apply_automorphism(Automorphism::A3, 2.0, kX2, k1) == GeneratorCoeffs{0, 1, 2});
    CHECK(apply_automorphism(Automorphism::A2, 0.0, {5, -1, 3}, k1) == GeneratorCoeffs{5, -1, 3});
    CHECK(apply_automorphism(Automorphism::A1, 1.0, kX2, k1) == GeneratorCoeffs{-1, 1, 4});
  }

  TEST_CASE("automorphisms are exp(a ad X_i)") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    const std::array<std::pair<Automorphism, int>, 3> flows{
        {{Automorphism::A1, 0}, {Automorphism::A2, 1}, {Automorphism::A3, 2}}};
    for (double k : {0.0, 2.0, -3.0}) {
      for (const auto& [which, axis] : flows) {
        for (int n = 0; n < 50; ++n) {
          const double a = par(rng);
          const auto v = random_gen(rng);
          const Vec expected = series_exp_ad(axis, a, as_vec(v), k);
          CHECK(dist(as_vec(apply_automorphism(which, a, v, StructureConstants{k})), expected) <
                1e-10 * (1.0 + std::abs(k)) * 10.0);
        }
      }
    }
  }

  TEST_CASE("automorphisms preserve brackets") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    for (double k : {0.0, 1.0, 2.0, 5.0}) {
      const StructureConstants sc{k};
      for (Automorphism which : {Automorphism::A1, Automorphism::A2, Automorphism::A3}) {
        for (int n = 0; n < 100; ++n) {
          const double a = which == Automorphism::A2 && k == 2.0 && n == 0 ? 1.7 : par(rng);
          const auto u = random_gen(rng);
          const auto v = random_gen(rng);
          const auto lhs = bracket(apply_automorphism(which, a, u, sc), apply_automorphism(which, a, v, sc), sc);
          const auto rhs = apply_automorphism(which, a, bracket(u, v, sc), sc);
          CHECK((lhs - rhs).norm() < 1e-10);
        }
      }
    }
  }

  TEST_CASE("group law") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    const StructureConstants sc{3.0};
    for (Automorphism which : {Automorphism::A1, Automorphism::A2, Automorphism::A3}) {
      for (int n = 0; n < 50; ++n) {
        const double a = par(rng);
        const double b = par(rng);
        const auto v = random_gen(rng);
        const auto twice = apply_automorphism(which, b, apply_automorphism(which, a, v, sc), sc);
        const auto once = apply_automorphism(which, a + b, v, sc);
        CHECK((twice - once).norm() < 1e-11 * (1.0 + once.norm()));
      }
    }
  }

  TEST_CASE("subalgebra examples") {
    CHECK(is_subalgebra(kX1, kX3, StructureConstants{1.0}, 1e-12));
    CHECK(is_subalgebra(kX2, GeneratorCoeffs{1, 0, -10}, StructureConstants{5.0}, 1e-12));
    CHECK_FALSE(is_subalgebra(kX2, kX1, StructureConstants{1.0}, 1e-12));
    // Rank check by determinant: [X2,X1] = X1 - 4k X3 is outside span{X2, X1} for k != 0.
    const Vec w = tensor_bracket({0, 1, 0}, {1, 0, 0}, 1.0);
    CHECK(std::abs(triple({0, 1, 0}, {1, 0, 0}, w)) > 1.0);
    CHECK_THROWS_AS((void)is_subalgebra(kX2, 3.0 * kX2, StructureConstants{1.0}, 1e-12),
                    DegenerateBasis);
  }

  TEST_CASE("closure of {X2, X1 + beta X3} agrees with a determinant oracle") {
    for (double k : {0.0, 1.0, 5.0}) {
      const StructureConstants sc{k};
      for (int i = 0; i <= 400; ++i) {
        const double beta = -10.0 * k - 1.0 + (20.0 * k + 2.0) * i / 400.0;
        const Vec e2{1.0, 0.0, beta};
        const double det = triple({0, 1, 0}, e2, tensor_bracket({0, 1, 0}, e2, k));
        const bool closed = is_subalgebra(kX2, as_gen(e2), sc, 1e-8);
        CHECK(closed == (std::abs(det) < 1e-8));
      }
    }
  }

  TEST_CASE("optimal system verification") {
    for (double k : {0.0, 1.0, 5.0, -3.0}) {
      const auto report = verify_optimal_system(StructureConstants{k}, 1e-10);
      INFO(report.to_text());
      CHECK(report.passed());
      CHECK(report.first_failure().empty());
    }
    CHECK(StructureConstants::from_model(10.0, 2.0).k == 5.0);
    CHECK_THROWS_AS((void)StructureConstants::from_model(1.0, 0.0), std::invalid_argument);
  }
}
