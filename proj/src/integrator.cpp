#include "swinv/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swinv {

std::vector<DenominatorEntry> OdeSystem::denominators(double, std::span<const double>) const {
  return {};
}

const ButcherTableau& rk6_tableau() {
  static const ButcherTableau tableau = [] {
    ButcherTableau t;
    t.stages = 7;
    t.a = {
        {},
        {1.0 / 3.0},
        {0.0, 2.0 / 3.0},
        {1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0},
        {-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0},
        {0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0},
        {9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0},
    };
    t.b = {11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0, 11.0 / 120.0};
    t.c = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 2.0, 1.0 / 2.0, 1.0};
    return t;
  }();
  return tableau;
}

namespace {

// Rooted trees as sorted multisets of child ids into a growing catalog.
struct RootedTree {
  int order = 1;
  std::vector<std::size_t> children;
  double gamma = 1.0;
  std::vector<double> weights;  // per stage: prod over children of (A w_child)_i
};

void extend_children(const std::vector<RootedTree>& catalog, int remaining, std::size_t min_id,
                     std::vector<std::size_t>& current, std::vector<std::vector<std::size_t>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (std::size_t id = min_id; id < catalog.size(); ++id) {
    if (catalog[id].order > remaining) continue;
    current.push_back(id);
    extend_children(catalog, remaining - catalog[id].order, id, current, out);
    current.pop_back();
  }
}

}  // namespace

double order_condition_defect(const ButcherTableau& t, int max_order) {
  const std::size_t n = t.stages;
  std::vector<RootedTree> catalog;
  catalog.push_back({1, {}, 1.0, std::vector<double>(n, 1.0)});

  for (int order = 2; order <= max_order; ++order) {
    std::vector<std::vector<std::size_t>> child_sets;
    std::vector<std::size_t> current;
    extend_children(catalog, order - 1, 0, current, child_sets);
    for (auto& children : child_sets) {
      RootedTree tree{order, children, static_cast<double>(order), std::vector<double>(n, 1.0)};
      for (std::size_t child : children) {
        tree.gamma *= catalog[child].gamma;
        for (std::size_t i = 0; i < n; ++i) {
          double aw = 0.0;
          for (std::size_t j = 0; j < t.a[i].size(); ++j) aw += t.a[i][j] * catalog[child].weights[j];
          tree.weights[i] *= aw;
        }
      }
      catalog.push_back(std::move(tree));
    }
  }

  double defect = 0.0;
  for (const auto& tree : catalog) {
    double phi = 0.0;
    for (std::size_t i = 0; i < n; ++i) phi += t.b[i] * tree.weights[i];
    defect = std::max(defect, std::abs(phi - 1.0 / tree.gamma));
  }
  return defect;
}

void verify_rk6_tableau() {
  const auto& t = rk6_tableau();
  for (std::size_t i = 0; i < t.stages; ++i) {
    double row = 0.0;
    for (double v : t.a[i]) row += v;
    if (std::abs(row - t.c[i]) > 1e-15) {
      throw std::logic_error("RK6 tableau: c does not match row sums at stage " + std::to_string(i));
    }
  }
  if (order_condition_defect(t, 6) > 1e-14) {
    throw std::logic_error("RK6 tableau violates an order condition through order 6");
  }
}

StateVector rk6_step(const OdeSystem& system, double s, std::span<const double> x, double h) {
  const auto& t = rk6_tableau();
  const std::size_t dim = x.size();
  std::vector<StateVector> k(t.stages);
  StateVector stage_state(dim);
  for (std::size_t i = 0; i < t.stages; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) acc += t.a[i][j] * k[j][d];
      stage_state[d] = x[d] + h * acc;
    }
    try {
      k[i] = system.derivative(s + t.c[i] * h, stage_state);
    } catch (DenominatorVanished& e) {
      e.set_stage(static_cast<int>(i));
      throw;
    }
  }
  StateVector out(x.begin(), x.end());
  for (std::size_t d = 0; d < dim; ++d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.stages; ++i) acc += t.b[i] * k[i][d];
    out[d] += h * acc;
  }
  return out;
}

void IntegrationConfig::validate() const {
  if (!std::isfinite(s_start) || !std::isfinite(s_end)) {
    throw std::invalid_argument("integration bounds must be finite");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(denom_floor > 0.0)) throw std::invalid_argument("denominator floor must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (!(location_tol > 0.0)) throw std::invalid_argument("location tolerance must be positive");
}

std::size_t IntegrationConfig::step_count() const {
  const double ratio = std::abs(s_end - s_start) / step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

Trajectory::Trajectory(std::vector<TrajectorySample> samples, std::optional<SingularityEvent> event)
    : samples_(std::move(samples)), event_(event) {}

double Trajectory::s_min() const { return std::min(samples_.front().s, samples_.back().s); }
double Trajectory::s_max() const { return std::max(samples_.front().s, samples_.back().s); }

bool Trajectory::covers(double s) const {
  return !samples_.empty() && s >= s_min() && s <= s_max();
}

StateVector Trajectory::interpolate(double s) const {
  if (!covers(s)) throw std::out_of_range("abscissa outside trajectory coverage");
  if (samples_.size() == 1) return samples_.front().state;
  const bool increasing = samples_.back().s > samples_.front().s;
  // First node strictly beyond s in the marching direction.
  auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                             [increasing](double value, const TrajectorySample& sample) {
                               return increasing ? value < sample.s : value > sample.s;
                             });
  if (it == samples_.end()) --it;
  if (it == samples_.begin()) ++it;
  const auto& left = *(it - 1);
  const auto& right = *it;
  const double h = right.s - left.s;
  const double theta = (s - left.s) / h;
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + theta;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  StateVector out(left.state.size());
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d] = h00 * left.state[d] + h10 * h * left.rate[d] + h01 * right.state[d] +
             h11 * h * right.rate[d];
  }
  return out;
}

namespace {

DenominatorReport report_from(const std::vector<DenominatorEntry>& entries) {
  if (entries.empty()) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, std::nullopt, inf};
  }
  std::optional<double> second;
  if (entries.size() > 1) second = entries[1].value;
  return DenominatorReport::make(entries[0].value, second);
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double named_value(const std::vector<DenominatorEntry>& entries, Denominator which) {
  for (const auto& e : entries) {
    if (e.which == which) return e.value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool unsafe_against(double reference, double value, double floor) {
  return !std::isfinite(value) || std::abs(value) < floor || (value < 0.0) != (reference < 0.0);
}

struct StepCheck {
  bool safe = false;
  std::optional<Denominator> which;  // offending denominator when unsafe
  std::optional<double> value;       // its value, when the step completed
  StateVector state;
  StateVector rate;
  std::vector<DenominatorEntry> entries;
};

Denominator closest_to_zero(const std::vector<DenominatorEntry>& entries) {
  return std::min_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
           return std::abs(a.value) < std::abs(b.value);
         })->which;
}

// First entry of `entries` that is unsafe relative to `reference`, if any.
std::optional<std::size_t> first_unsafe(const std::vector<DenominatorEntry>& reference,
                                        const std::vector<DenominatorEntry>& entries, double floor) {
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (unsafe_against(reference[j].value, entries[j].value, floor)) return j;
  }
  return std::nullopt;
}

// Advances a safe node by h and classifies the result against the node's denominators.
StepCheck check_step(const OdeSystem& system, double s0, std::span<const double> x0,
                     const std::vector<DenominatorEntry>& reference, double h,
                     const IntegrationConfig& cfg) {
  StepCheck c;
  try {
    c.state = rk6_step(system, s0, x0, h);
    if (!all_finite(c.state)) {
      if (!reference.empty()) c.which = closest_to_zero(reference);
      return c;
    }
    c.entries = system.denominators(s0 + h, c.state);
    if (const auto j = first_unsafe(reference, c.entries, cfg.denom_floor)) {
      c.which = c.entries[*j].which;
      c.value = c.entries[*j].value;
      return c;
    }
    c.rate = system.derivative(s0 + h, c.state);
    c.safe = true;
  } catch (const DenominatorVanished& e) {
    c.which = e.which();
    c.value.reset();
  }
  return c;
}

// Full step against two half steps.
bool consistent(const OdeSystem& system, double s0, std::span<const double> x0, double h,
                const StateVector& full, double tol) {
  try {
    const StateVector mid = rk6_step(system, s0, x0, h / 2.0);
    if (!all_finite(mid)) return false;
    const StateVector twice = rk6_step(system, s0 + h / 2.0, mid, h / 2.0);
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (!(std::abs(twice[i] - full[i]) <= tol * (1.0 + std::abs(full[i])))) return false;
    }
    return true;
  } catch (const DenominatorVanished&) {
    return false;
  }
}

SingularityEvent locate(const OdeSystem& system, const IntegrationConfig& cfg, double s0,
                        std::span<const double> x0, const std::vector<DenominatorEntry>& reference,
                        double h, StepCheck unsafe) {
  double lo = 0.0;
  double hi = h;
  std::vector<DenominatorEntry> lo_entries = reference;
  const auto settled = [&] {
    return std::abs(hi - lo) <= cfg.location_tol &&
           std::abs(named_value(lo_entries, *unsafe.which)) <= 10.0 * cfg.denom_floor;
  };
  for (int it = 0; it < cfg.max_bisections && !settled(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    StepCheck c = check_step(system, s0, x0, reference, mid, cfg);
    if (c.safe) {
      lo = mid;
      lo_entries = std::move(c.entries);
    } else {
      hi = mid;
      if (c.which) unsafe = std::move(c);
    }
  }
  SingularityEvent ev;
  ev.s = s0 + lo;
  ev.which = *unsafe.which;
  ev.bracket_width = std::abs(hi - lo);
  ev.s_safe = s0 + lo;
  ev.s_unsafe = s0 + hi;
  ev.den_safe = named_value(lo_entries, ev.which);
  ev.den_unsafe = unsafe.value;
  return ev;
}

struct Advance {
  StepCheck end;  // safe state at the far end when no event
  std::optional<SingularityEvent> event;
};

// One grid step. A step that passes the denominator checks but disagrees with two half steps
// (typically one that jumps over a fold) is split recursively; the output grid is unchanged.
Advance advance(const OdeSystem& system, const IntegrationConfig& cfg, double s0,
                std::span<const double> x0, const std::vector<DenominatorEntry>& reference,
                double h) {
  Advance out;
  out.end = check_step(system, s0, x0, reference, h, cfg);
  if (!out.end.safe) {
    if (!out.end.which) {
      throw IntegrationError(IntegrationError::Kind::non_finite,
                             "state became non-finite after s=" + std::to_string(s0));
    }
    out.event = locate(system, cfg, s0, x0, reference, h, std::move(out.end));
    return out;
  }
  if (reference.empty() || !(cfg.consistency_tol > 0.0) ||
      consistent(system, s0, x0, h, out.end.state, cfg.consistency_tol)) {
    return out;
  }
  if (std::abs(h) <= cfg.location_tol) {
    // Still inconsistent on a vanishing substep: the solution is not smooth here.
    SingularityEvent ev;
    ev.which = closest_to_zero(out.end.entries);
    ev.s = ev.s_safe = s0;
    ev.s_unsafe = s0 + h;
    ev.bracket_width = std::abs(h);
    ev.den_safe = named_value(reference, ev.which);
    ev.den_unsafe = named_value(out.end.entries, ev.which);
    out.event = ev;
    return out;
  }
  Advance first = advance(system, cfg, s0, x0, reference, h / 2.0);
  if (first.event) return first;
  return advance(system, cfg, s0 + h / 2.0, first.end.state, first.end.entries, h / 2.0);
}

}  // namespace

DenominatorReport OdeSystem::denominator_report(double s, std::span<const double> x) const {
  return report_from(denominators(s, x));
}

Trajectory integrate(const OdeSystem& system, const IntegrationConfig& cfg,
                     std::span<const double> initial) {
  cfg.validate();
  if (initial.size() != system.dimension()) {
    throw std::invalid_argument("initial state has the wrong dimension");
  }
  const std::size_t n = cfg.step_count();
  if (n > cfg.max_steps) {
    throw IntegrationError(IntegrationError::Kind::step_limit,
                           "integration needs " + std::to_string(n) + " steps, limit is " +
                               std::to_string(cfg.max_steps));
  }

  std::vector<TrajectorySample> samples;
  samples.reserve(n + 1);
  std::vector<DenominatorEntry> entries = system.denominators(cfg.s_start, initial);
  {
    TrajectorySample first;
    first.s = cfg.s_start;
    first.state.assign(initial.begin(), initial.end());
    for (const auto& e : entries) {
      if (!(std::abs(e.value) >= cfg.denom_floor)) {
        throw IntegrationError(IntegrationError::Kind::singular_start,
                               "initial state violates the floor of " +
                                   std::string(to_string(e.which)));
      }
    }
    try {
      first.rate = system.derivative(first.s, first.state);
    } catch (const DenominatorVanished& e) {
      throw IntegrationError(IntegrationError::Kind::singular_start, e.what());
    }
    first.den = system.denominator_report(first.s, first.state);
    samples.push_back(std::move(first));
  }

  const double dir = cfg.direction();
  std::optional<SingularityEvent> event;
  for (std::size_t i = 1; i <= n; ++i) {
    const TrajectorySample& last = samples.back();
    const double s_next =
        (i == n) ? cfg.s_end : cfg.s_start + dir * static_cast<double>(i) * cfg.step;
    const double h = s_next - last.s;
    Advance step = advance(system, cfg, last.s, last.state, entries, h);
    if (step.event) {
      event = step.event;
      break;
    }
    TrajectorySample next;
    next.s = s_next;
    next.den = system.denominator_report(s_next, step.end.state);
    next.state = std::move(step.end.state);
    next.rate = std::move(step.end.rate);
    entries = std::move(step.end.entries);
    samples.push_back(std::move(next));
  }
  return Trajectory(std::move(samples), event);
}

ConvergenceEstimate estimate_convergence_order(const OdeSystem& system, IntegrationConfig cfg,
                                               std::span<const double> initial,
                                               std::span<const StepPair> pairs,
                                               std::optional<StateVector> exact_terminal) {
  cfg.consistency_tol = 0.0;  // measure the plain fixed-step scheme
  const auto terminal = [&](double step) {
    cfg.step = step;
    const Trajectory traj = integrate(system, cfg, initial);
    if (traj.event()) {
      throw IntegrationError(IntegrationError::Kind::singular_window,
                             "convergence window contains a singularity");
    }
    return traj.samples().back().state;
  };
  const auto distance = [](const StateVector& a, const StateVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };

  ConvergenceEstimate est;
  bool all_exact = true;
  for (const auto& pair : pairs) {
    const double ratio = pair.coarse / pair.fine;
    const StateVector coarse = terminal(pair.coarse);
    const StateVector fine = terminal(pair.fine);
    double e_coarse = 0.0;
    double e_fine = 0.0;
    if (exact_terminal) {
      e_coarse = distance(coarse, *exact_terminal);
      e_fine = distance(fine, *exact_terminal);
    } else {
      e_coarse = distance(coarse, fine);
      e_fine = distance(fine, terminal(pair.fine / ratio));
    }
    est.errors.push_back(e_coarse);
    if (e_coarse == 0.0 && e_fine == 0.0) continue;
    all_exact = false;
    const double order = e_fine == 0.0 ? std::numeric_limits<double>::infinity()
                                       : std::log(e_coarse / e_fine) / std::log(ratio);
    est.orders.push_back(order);
  }
  est.exact = all_exact;
  if (!est.orders.empty()) est.order = *std::min_element(est.orders.begin(), est.orders.end());
  return est;
}

}  // namespace swinv
