#include "swinv/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace swinv {

double ResidualTriple::max_abs() const {
  return std::max({std::abs(r_mass), std::abs(r_momx), std::abs(r_momy)});
}

bool ResidualTriple::is_finite() const {
  return std::isfinite(r_mass) && std::isfinite(r_momx) && std::isfinite(r_momy);
}

BottomGradient bottom_and_gradient(const ModelParams& p, double /*x*/, double y) {
  const double y2 = y * y;
  return {p.q3 * y2 * y2 - p.q * y2, 0.0, 4.0 * p.q3 * y2 * y - 2.0 * p.q * y};
}

FieldSample sample_case1(const Trajectory& traj, const StationaryConstants& c, const ModelParams& p,
                         double t, double x, double y) {
  const double H = traj.interpolate(y)[0];
  const auto uv = algebraic_case1(y, H, c, p);
  return {t, x, y, H, uv.U, uv.V};
}

FieldSample sample_case2(const Trajectory& traj, const ModelParams& p, double t, double x, double y) {
  if (y == 0.0) throw std::invalid_argument("traveling representation is undefined at y = 0");
  const double z = reduced_coordinate(InvariantCase::traveling_x2x1, p, t, x, y);
  const auto s = traj.interpolate(z);
  const double y2 = y * y;
  return {t, x, y, y2 * y2 * s[0], -2.0 * p.ratio() + y2 * s[1], y2 * s[2]};
}

FieldSample sample_case3(const Trajectory& traj, const ModelParams& p, double t, double x, double y) {
  if (t == 0.0) throw std::invalid_argument("similarity representation is undefined at t = 0");
  const auto s = traj.interpolate(y * t);
  const double t2 = t * t;
  return {t, x, y, s[0] / (t2 * t2), -2.0 * p.ratio() + s[1] / t2, s[2] / t2};
}

double reduced_coordinate(InvariantCase kind, const ModelParams& p, double t, double x, double y) {
  switch (kind) {
    case InvariantCase::stationary_x1x3: return y;
    case InvariantCase::traveling_x2x1: return (x + 2.0 * p.ratio() * t) / y;
    case InvariantCase::similarity_x2x3: return y * t;
  }
  return y;
}

FieldSampler make_sampler(const ReducedProblem& problem, const Trajectory& traj) {
  const ModelParams p = problem.params();
  switch (problem.kind()) {
    case InvariantCase::stationary_x1x3: {
      const StationaryConstants c = problem.constants();
      return [traj, c, p](double t, double x, double y) { return sample_case1(traj, c, p, t, x, y); };
    }
    case InvariantCase::traveling_x2x1:
      return [traj, p](double t, double x, double y) { return sample_case2(traj, p, t, x, y); };
    case InvariantCase::similarity_x2x3:
      return [traj, p](double t, double x, double y) { return sample_case3(traj, p, t, x, y); };
  }
  throw std::logic_error("unknown invariant case");
}

FieldDerivatives central_differences(const FieldSampler& sampler, const SpacetimePoint& pt,
                                     double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  FieldDerivatives d;
  d.center = sampler(pt.t, pt.x, pt.y);
  const std::array<std::array<double, 3>, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& e = axes[i];
    const FieldSample plus = sampler(pt.t + delta * e[0], pt.x + delta * e[1], pt.y + delta * e[2]);
    const FieldSample minus = sampler(pt.t - delta * e[0], pt.x - delta * e[1], pt.y - delta * e[2]);
    d.h[i] = (plus.h - minus.h) / (2.0 * delta);
    d.u[i] = (plus.u - minus.u) / (2.0 * delta);
    d.v[i] = (plus.v - minus.v) / (2.0 * delta);
  }
  return d;
}

ResidualTriple pde_residual(const FieldSampler& sampler, const ModelParams& p,
                            const SpacetimePoint& point, double delta) {
  const FieldDerivatives d = central_differences(sampler, point, delta);
  const double h = d.center.h;
  const double u = d.center.u;
  const double v = d.center.v;
  const double f = p.coriolis(point.y);
  const BottomGradient b = bottom_and_gradient(p, point.x, point.y);
  ResidualTriple r;
  r.r_mass = d.h[0] + u * d.h[1] + v * d.h[2] + h * (d.u[1] + d.v[2]);
  r.r_momx = d.u[0] + u * d.u[1] + v * d.u[2] - f * v + 2.0 * d.h[1] - b.Bx;
  r.r_momy = d.v[0] + u * d.v[1] + v * d.v[2] + f * u + 2.0 * d.h[2] - b.By;
  return r;
}

namespace {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool contains(double s) const { return s >= lo && s <= hi; }
  [[nodiscard]] bool empty() const { return !(hi > lo); }
};

Window admissible_window(const Trajectory& traj, const ResidualOptions& o) {
  if (traj.empty()) return {0.0, -1.0};
  const double m = o.endpoint_margin * o.delta;
  Window w{traj.s_min() + m, traj.s_max() - m};
  if (const auto& ev = traj.event()) {
    if (ev->s >= traj.s_max()) w.hi = std::min(w.hi, ev->s - o.singularity_margin);
    if (ev->s <= traj.s_min()) w.lo = std::max(w.lo, ev->s + o.singularity_margin);
  }
  return w;
}

bool stencil_inside(InvariantCase kind, const ModelParams& p, const SpacetimePoint& pt, double delta,
                    const Window& w) {
  const std::array<SpacetimePoint, 7> stencil{{{pt.t, pt.x, pt.y},
                                               {pt.t + delta, pt.x, pt.y},
                                               {pt.t - delta, pt.x, pt.y},
                                               {pt.t, pt.x + delta, pt.y},
                                               {pt.t, pt.x - delta, pt.y},
                                               {pt.t, pt.x, pt.y + delta},
                                               {pt.t, pt.x, pt.y - delta}}};
  return std::all_of(stencil.begin(), stencil.end(), [&](const SpacetimePoint& s) {
    return w.contains(reduced_coordinate(kind, p, s.t, s.x, s.y));
  });
}

std::string format_component(const std::optional<double>& v) {
  if (!v) return "exempt";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

std::vector<SpacetimePoint> default_residual_points(const ReducedProblem& problem,
                                                    const Trajectory& traj,
                                                    const ResidualOptions& o) {
  const Window w = admissible_window(traj, o);
  std::vector<SpacetimePoint> out;
  if (w.empty() || o.abscissae < 1) return out;
  const ModelParams& p = problem.params();
  const double k = p.ratio();
  for (int i = 0; i < o.abscissae; ++i) {
    const double s = w.lo + (w.hi - w.lo) * (i + 1) / (o.abscissae + 1);
    std::vector<SpacetimePoint> candidates;
    switch (problem.kind()) {
      case InvariantCase::stationary_x1x3:
        candidates.push_back({0.0, 0.0, s});
        break;
      case InvariantCase::traveling_x2x1:
        for (double y : {0.5, 1.0, 2.0}) {
          for (double t : {0.0, 1.0}) candidates.push_back({t, s * y - 2.0 * k * t, y});
        }
        break;
      case InvariantCase::similarity_x2x3:
        for (double t : {0.5, 1.0, 2.0}) candidates.push_back({t, 0.0, s / t});
        break;
    }
    for (const auto& c : candidates) {
      if (stencil_inside(problem.kind(), p, c, o.delta, w)) out.push_back(c);
    }
  }
  return out;
}

ResidualStudy residual_study(const FieldSampler& sampler, const ModelParams& p,
                             const std::vector<SpacetimePoint>& points,
                             const ResidualOptions& o) {
  ResidualStudy st;
  st.delta = o.delta;
  st.noise_floor = o.noise_floor;
  if (points.empty()) {
    st.failure = "no admissible evaluation points";
    return st;
  }
  for (const auto& pt : points) {
    ResidualPointReport r{pt, pde_residual(sampler, p, pt, o.delta),
                          pde_residual(sampler, p, pt, o.delta / 2.0)};
    const auto c = r.coarse.components();
    const auto f = r.fine.components();
    for (std::size_t j = 0; j < 3; ++j) {
      st.max_coarse[j] = std::max(st.max_coarse[j], std::isfinite(c[j]) ? std::abs(c[j]) : INFINITY);
      st.max_fine[j] = std::max(st.max_fine[j], std::isfinite(f[j]) ? std::abs(f[j]) : INFINITY);
    }
    st.points.push_back(r);
  }
  st.max_residual = *std::max_element(st.max_coarse.begin(), st.max_coarse.end());
  st.residual_ok = st.max_residual < o.threshold;
  st.ratios_ok = true;
  for (std::size_t j = 0; j < 3; ++j) {
    if (st.max_coarse[j] < o.noise_floor) continue;
    const double ratio = st.max_fine[j] > 0.0 ? st.max_coarse[j] / st.max_fine[j] : INFINITY;
    st.ratios[j] = ratio;
    if (!(ratio >= o.ratio_lo && ratio <= o.ratio_hi)) st.ratios_ok = false;
  }
  char buf[160];
  if (!st.residual_ok) {
    std::snprintf(buf, sizeof buf, "max residual %.3e exceeds %.1e", st.max_residual, o.threshold);
    st.failure = buf;
  } else if (!st.ratios_ok) {
    std::snprintf(buf, sizeof buf, "halving ratio outside [%g, %g]", o.ratio_lo, o.ratio_hi);
    st.failure = buf;
  }
  return st;
}

ResidualStudy residual_study(const ReducedProblem& problem, const Trajectory& traj,
                             const ResidualOptions& options) {
  return residual_study(make_sampler(problem, traj), problem.params(),
                        default_residual_points(problem, traj, options), options);
}

std::string ResidualStudy::to_text() const {
  static constexpr std::array<const char*, 3> names{"r_mass", "r_momx", "r_momy"};
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "delta %.3e, points %zu\n", delta, points.size());
  out += buf;
  for (std::size_t j = 0; j < 3 && !points.empty(); ++j) {
    if (max_coarse[j] < noise_floor && max_fine[j] < noise_floor)
      std::snprintf(buf, sizeof buf, "%s below noise floor %.1e, ratio exempt\n", names[j], noise_floor);
    else
      std::snprintf(buf, sizeof buf, "%s max %.3e (delta/2: %.3e) ratio %s\n", names[j],
                    max_coarse[j], max_fine[j], format_component(ratios[j]).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "max residual %.3e\n", max_residual);
  out += buf;
  out += passed() ? "result PASS\n" : "result FAIL: " + failure + "\n";
  return out;
}

std::string VariantResolution::to_text() const {
  std::string out;
  for (const auto& t : trials) {
    out += "variant " + std::string(to_string(t.variant)) + ": ";
    if (!t.error.empty()) {
      out += "integration failed: " + t.error + "\n";
    } else if (t.study) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "max residual %.3e, ", t.study->max_residual);
      out += buf;
      out += t.passed() ? "PASS\n" : "FAIL (" + t.study->failure + ")\n";
    }
  }
  out += "selected: ";
  out += winner ? std::string(to_string(*winner)) : std::string("inconclusive");
  out += "\n";
  return out;
}

VariantResolution resolve_case2_variant(const ModelParams& p, const ReducedState& ics,
                                        RhsCorruption corruption, double window,
                                        const ResidualOptions& options) {
  using Key = std::tuple<double, double, double, double, double, double, double, int, double,
                         double, double>;
  static std::mutex mutex;
  static std::map<Key, VariantResolution> cache;
  const Key key{p.q,  p.q3,  p.omega, ics.s, ics.H, ics.U, ics.V, static_cast<int>(corruption),
                window, options.delta, options.threshold};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  VariantResolution res;
  for (Case2Variant variant : {Case2Variant::as_printed, Case2Variant::dh_denominator}) {
    VariantTrial trial;
    trial.variant = variant;
    try {
      const auto problem = ReducedProblem::traveling(p, variant, corruption);
      IntegrationConfig cfg;
      cfg.s_start = ics.s;
      cfg.s_end = ics.s + window;
      const Trajectory traj = integrate(problem, cfg, ics);
      trial.study = residual_study(problem, traj, options);
    } catch (const std::exception& e) {
      trial.error = e.what();
    }
    res.trials.push_back(std::move(trial));
  }
  const auto passing = std::count_if(res.trials.begin(), res.trials.end(),
                                     [](const VariantTrial& t) { return t.passed(); });
  if (passing == 1) {
    res.winner = std::find_if(res.trials.begin(), res.trials.end(),
                              [](const VariantTrial& t) { return t.passed(); })
                     ->variant;
  }
  std::lock_guard lock(mutex);
  cache.emplace(key, res);
  return res;
}

}  // namespace swinv
