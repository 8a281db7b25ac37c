#include "swinv/reduced_systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace swinv {

void ModelParams::validate() const {
  if (!std::isfinite(q) || !std::isfinite(q3) || !std::isfinite(omega)) {
    throw std::invalid_argument("model parameters must be finite");
  }
  if (omega == 0.0) throw std::invalid_argument("omega must be nonzero");
  if (f0 != 0.0) throw std::invalid_argument("f0 is normalized to 0");
}

std::string_view to_string(Denominator which) {
  switch (which) {
    case Denominator::case1_den: return "case1_den";
    case Denominator::case2_Dh: return "case2_Dh";
    case Denominator::case2_Du: return "case2_Du";
    case Denominator::case3_main: return "case3_main";
    case Denominator::case3_VplusZ: return "case3_VplusZ";
  }
  return "unknown";
}

DenominatorReport DenominatorReport::make(double d_h, std::optional<double> d_u) {
  DenominatorReport r{d_h, d_u, std::abs(d_h)};
  if (d_u) r.min_abs = std::min(r.min_abs, std::abs(*d_u));
  return r;
}

std::string_view to_string(Case2Variant variant) {
  return variant == Case2Variant::as_printed ? "as_printed" : "dh_denominator";
}

std::optional<Case2Variant> case2_variant_from_string(std::string_view name) {
  if (name == "as_printed") return Case2Variant::as_printed;
  if (name == "dh_denominator") return Case2Variant::dh_denominator;
  return std::nullopt;
}

namespace {

std::string vanished_message(Denominator which, double s, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "denominator %s vanished at s=%.17g (value %.3e)",
                std::string(to_string(which)).c_str(), s, value);
  return buf;
}

void require_above_floor(Denominator which, double s, double den, double numerator_scale,
                         double floor_scale) {
  if (!(std::abs(den) >= floor_scale * (1.0 + numerator_scale))) {
    throw DenominatorVanished(which, s, den);
  }
}

double corrupt(double numerator, RhsCorruption corruption) {
  return corruption == RhsCorruption::flip_height_numerator ? -numerator : numerator;
}

}  // namespace

DenominatorVanished::DenominatorVanished(Denominator which, double s, double value)
    : std::runtime_error(vanished_message(which, s, value)), which_(which), s_(s), value_(value) {}

StationaryConstants stationary_constants_from_ic(double a, double H_a, double U_a, double V_a,
                                                 const ModelParams& p) {
  if (!(H_a > 0.0)) throw std::invalid_argument("initial depth H(a) must be positive");
  const double a2 = a * a;
  StationaryConstants c;
  c.c1 = V_a * H_a;
  c.c2 = U_a - p.omega * a2 / 2.0;
  c.c3 = V_a * V_a + 0.25 * p.omega * p.omega * a2 * a2 + p.omega * c.c2 * a2 + 4.0 * H_a -
         2.0 * a2 * (p.q3 * a2 - p.q);
  return c;
}

StationaryRate rhs_case1(double y, double H, const StationaryConstants& c, const ModelParams& p,
                         double floor_scale, RhsCorruption corruption) {
  const double H3 = H * H * H;
  const double y2 = y * y;
  const double numerator = corrupt(
      H3 * y * (2.0 * c.c2 * p.omega + p.omega * p.omega * y2 + 4.0 * p.q - 8.0 * p.q3 * y2),
      corruption);
  const double den = 2.0 * (c.c1 * c.c1 - 2.0 * H3);
  require_above_floor(Denominator::case1_den, y, den, std::abs(numerator), floor_scale);
  return {numerator / den, DenominatorReport::make(den)};
}

StationaryVelocity algebraic_case1(double y, double H, const StationaryConstants& c,
                                   const ModelParams& p) {
  if (H == 0.0) throw std::invalid_argument("V = c1/H is undefined at H = 0");
  return {p.omega * y * y / 2.0 + c.c2, c.c1 / H};
}

double conserved_case1(double y, double H, const StationaryConstants& c, const ModelParams& p) {
  if (!(H > 0.0)) throw std::invalid_argument("conserved quantity needs H > 0");
  const double V = c.c1 / H;
  const double y2 = y * y;
  const double lhs = V * V + 0.25 * p.omega * p.omega * y2 * y2 + p.omega * c.c2 * y2 + 4.0 * H -
                     2.0 * y2 * (p.q3 * y2 - p.q);
  return lhs - c.c3;
}

ReducedRate rhs_case2(double z, const ReducedState& st, const ModelParams& p,
                      Case2Variant variant, double floor_scale, RhsCorruption corruption) {
  const double H = st.H;
  const double U = st.U;
  const double V = st.V;
  const double W = p.omega;
  const double q3 = p.q3;
  const double z2 = z * z;
  const double H2 = H * H;
  const double U2 = U * U;
  const double V2 = V * V;

  const double Nh = corrupt(
      8.0 * H2 * z + H * (W * U * z + W * V - 4.0 * q3 * z + 4.0 * U * V - 4.0 * V2 * z),
      corruption);
  const double Dh = 2.0 * H * (z2 + 1.0) - (U - V * z) * (U - V * z);
  const double Nu =
      -16.0 * H2 * z +
      2.0 * H * (-W * U * z + W * V * z2 + 4.0 * q3 * z - 2.0 * U * V * z2 - 6.0 * U * V +
                 4.0 * V2 * z) +
      V * (-W * U2 + 2.0 * W * U * V * z - W * V2 * z2 + 2.0 * U2 * U - 4.0 * U2 * V * z +
           2.0 * U * V2 * z2);
  const double Du = (U - V * z) * Dh;
  const double Nv = -16.0 * H2 +
                    2.0 * H * (-W * U + W * V * z + 4.0 * q3 + 4.0 * U2 - 4.0 * U * V * z -
                               2.0 * V2 * z2 - 2.0 * V2) +
                    W * U2 * U - 2.0 * W * U2 * V * z + W * U * V2 * z2 - 4.0 * q3 * U2 +
                    8.0 * q3 * U * V * z - 4.0 * q3 * V2 * z2 + 2.0 * U2 * V2 -
                    4.0 * U * V2 * V * z + 2.0 * V2 * V2 * z2;

  const bool v_over_dh = variant == Case2Variant::dh_denominator;
  const double dh_scale = std::max(std::abs(Nh), v_over_dh ? std::abs(Nv) : 0.0);
  const double du_scale = std::max(std::abs(Nu), v_over_dh ? 0.0 : std::abs(Nv));
  require_above_floor(Denominator::case2_Dh, z, Dh, dh_scale, floor_scale);
  require_above_floor(Denominator::case2_Du, z, Du, du_scale, floor_scale);

  return {Nh / Dh, Nu / Du, v_over_dh ? Nv / Dh : Nv / Du, DenominatorReport::make(Dh, Du)};
}

ReducedRate rhs_case3(double z, const ReducedState& st, const ModelParams& p, double floor_scale,
                      RhsCorruption corruption) {
  const double H = st.H;
  const double U = st.U;
  const double V = st.V;
  const double W = p.omega;
  const double q3 = p.q3;
  const double z2 = z * z;

  const double main = 2.0 * H - (V + z) * (V + z);
  const double shift = V + z;
  const double Nh = corrupt(H * (4.0 * z * (q3 * z2 - 1.0) - W * U * z - 2.0 * V), corruption);
  const double Nu = 2.0 * U + W * V * z;
  const double Nv = 8.0 * H + W * U * V * z + W * U * z2 - 2.0 * V * V -
                    2.0 * V * z * (2.0 * q3 * z2 + 1.0) - 4.0 * q3 * z2 * z2;

  require_above_floor(Denominator::case3_main, z, main, std::max(std::abs(Nh), std::abs(Nv)),
                      floor_scale);
  require_above_floor(Denominator::case3_VplusZ, z, shift, std::abs(Nu), floor_scale);
  return {Nh / main, Nu / shift, Nv / main, DenominatorReport::make(main, shift)};
}

bool denominator_floor_check(const DenominatorReport& den, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("denominator floor must be positive");
  return den.min_abs > floor;
}

}  // namespace swinv
