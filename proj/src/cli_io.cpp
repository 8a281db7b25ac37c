#include "swinv/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "swinv/svg.hpp"

namespace swinv {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ReducedProblem make_problem(const RunConfig& cfg, Case2Variant variant) {
  switch (cfg.kind) {
    case InvariantCase::stationary_x1x3:
      return ReducedProblem::stationary(
          cfg.params,
          stationary_constants_from_ic(cfg.ics.s, cfg.ics.H, cfg.ics.U, cfg.ics.V, cfg.params),
          cfg.corruption);
    case InvariantCase::traveling_x2x1:
      return ReducedProblem::traveling(cfg.params, variant, cfg.corruption);
    case InvariantCase::similarity_x2x3:
      return ReducedProblem::similarity(cfg.params, cfg.corruption);
  }
  throw std::logic_error("unknown invariant case");
}

Denominator smallest_denominator(const ReducedProblem& problem, const ReducedState& ics) {
  const StateVector x0 = problem.initial_vector(ics);
  try {
    (void)problem.derivative(ics.s, x0);
  } catch (const DenominatorVanished& e) {
    return e.which();
  }
  const auto entries = problem.denominators(ics.s, x0);
  return std::min_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
           return std::abs(a.value) < std::abs(b.value);
         })->which;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

RunConfig with_overrides(RunConfig cfg, const RunOptions& options) {
  if (options.step) cfg.step = *options.step;
  return cfg;
}

std::string params_line(const RunConfig& cfg) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "case %s, q=%g q3=%g omega=%g, start %g, end %g, step %g\n",
                std::string(to_string(cfg.kind)).c_str(), cfg.params.q, cfg.params.q3,
                cfg.params.omega, cfg.ics.s, cfg.s_end, cfg.step);
  return buf;
}

}  // namespace

std::optional<double> SolveResult::singular_s() const {
  if (start_singularity) return config.ics.s;
  if (trajectory.event()) return trajectory.event()->s;
  return std::nullopt;
}

std::optional<Denominator> SolveResult::singular_which() const {
  if (start_singularity) return start_singularity;
  if (trajectory.event()) return trajectory.event()->which;
  return std::nullopt;
}

SolveResult solve(const RunConfig& cfg) {
  SolveResult r;
  r.config = cfg;
  Case2Variant variant = cfg.case2_variant.value_or(Case2Variant::as_printed);
  if (cfg.kind == InvariantCase::traveling_x2x1 && !cfg.case2_variant) {
    r.resolution = resolve_case2_variant(cfg.params, cfg.ics, cfg.corruption);
    if (!r.resolution->winner) {
      throw VariantUndecided("residual oracle could not select a dV variant:\n" +
                             r.resolution->to_text());
    }
    variant = *r.resolution->winner;
    r.config.case2_variant = variant;
  }
  r.problem = make_problem(cfg, variant);
  try {
    r.trajectory = integrate(*r.problem, cfg.integration(), cfg.ics);
  } catch (const IntegrationError& e) {
    if (e.kind() != IntegrationError::Kind::singular_start) throw;
    r.start_singularity = smallest_denominator(*r.problem, cfg.ics);
  }
  return r;
}

std::string trajectory_csv(const SolveResult& result) {
  std::string out = "s,H,U,V,dH,dU,dV,den_min\n";
  const auto& problem = *result.problem;
  for (const auto& sample : result.trajectory.samples()) {
    const ReducedState st = problem.expand(sample.s, sample.state);
    const ReducedRate rate = problem.expand_rate(sample.s, sample.state);
    double den = sample.den.d_h;
    if (sample.den.d_u && std::abs(*sample.den.d_u) < std::abs(den)) den = *sample.den.d_u;
    for (double v : {sample.s, st.H, st.U, st.V, rate.dH, rate.dU, rate.dV}) out += g17(v) + ",";
    out += g17(den) + "\n";
  }
  if (const auto s = result.singular_s()) {
    out += "# singularity s=" + g17(*s) + " which=" + std::string(to_string(*result.singular_which())) +
           "\n";
  }
  return out;
}

TrajectoryTable parse_trajectory_csv(const std::string& text) {
  TrajectoryTable table;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto s = line.find("s=");
      const auto w = line.find("which=");
      if (line.rfind("# singularity", 0) == 0 && s != std::string::npos && w != std::string::npos) {
        table.singular_s = std::stod(line.substr(s + 2, w - s - 3));
        table.singular_which = line.substr(w + 6);
      }
      continue;
    }
    if (!header) {
      if (line != "s,H,U,V,dH,dU,dV,den_min") throw std::runtime_error("unexpected CSV header");
      header = true;
      continue;
    }
    std::array<double, 8> row{};
    std::istringstream cells(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(cells, cell, ',')) {
      if (n >= row.size()) throw std::runtime_error("too many CSV columns");
      row[n++] = std::stod(cell);
    }
    if (n != row.size()) throw std::runtime_error("too few CSV columns");
    table.rows.push_back(row);
  }
  if (!header) throw std::runtime_error("missing CSV header");
  return table;
}

VerifyOutcome verify_residual(const RunConfig& cfg, double delta) {
  VerifyOutcome outcome;
  std::optional<VariantResolution> resolution;
  if (cfg.kind == InvariantCase::traveling_x2x1) {
    resolution = resolve_case2_variant(cfg.params, cfg.ics, cfg.corruption);
    outcome.body += "dV denominator variants:\n" + resolution->to_text();
    if (!cfg.case2_variant && !resolution->winner) {
      outcome.body += "result FAIL: variant undecided\n";
      return outcome;
    }
  }
  const SolveResult solved = solve(cfg);
  if (solved.start_singularity) {
    outcome.body += "result FAIL: initial state is singular\n";
    return outcome;
  }
  ResidualOptions options;
  options.delta = delta;
  const ResidualStudy study = residual_study(*solved.problem, solved.trajectory, options);
  outcome.body += study.to_text();
  outcome.passed = study.passed();
  if (resolution && solved.config.case2_variant &&
      resolution->winner != solved.config.case2_variant) {
    outcome.body += "note: configured variant differs from the oracle's choice\n";
  }
  return outcome;
}

std::vector<ScanRow> singularity_scan(const ScanConfig& cfg) {
  std::vector<ScanRow> rows;
  for (int i = 0; i < cfg.count; ++i) {
    const double value = cfg.value(i);
    const SolveResult r = solve(cfg.run_config(value));
    rows.push_back({value, r.completed(), r.singular_s()});
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "value,completed,singular_s\n";
  for (const auto& r : rows) {
    out += g17(r.value) + "," + (r.completed ? "1" : "0") + ",";
    if (r.singular_s) out += g17(*r.singular_s);
    out += "\n";
  }
  return out;
}

int run_solve(const RunConfig& base, const RunOptions& options, std::ostream& out) {
  const RunConfig cfg = with_overrides(base, options);
  SolveResult result;
  try {
    result = solve(cfg);
  } catch (const VariantUndecided& e) {
    out << e.what();
    return kExitVerifyFailed;
  }
  try {
    const auto prefix = options.out_dir / cfg.output.prefix;
    write_file(prefix.string() + ".csv", trajectory_csv(result));
    const auto& samples = result.trajectory.samples();
    if (samples.size() >= 2) {
      for (const auto& var : cfg.output.svg) {
        const std::size_t col = var == "H" ? 0 : var == "U" ? 1 : 2;
        PlotSeries series;
        series.reserve(samples.size());
        for (const auto& s : samples) {
          const ReducedState st = result.problem->expand(s.s, s.state);
          series.emplace_back(s.s, col == 0 ? st.H : col == 1 ? st.U : st.V);
        }
        PlotLabels labels{std::string(to_string(cfg.kind)) + ": " + var,
                          cfg.kind == InvariantCase::stationary_x1x3 ? "y" : "z", var};
        write_file(prefix.string() + "_" + var + ".svg", emit_svg_plot(series, labels));
      }
    }
  } catch (const IoError& e) {
    out << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!options.quiet) {
    out << params_line(result.config);
    if (result.config.case2_variant && cfg.kind == InvariantCase::traveling_x2x1) {
      out << "dV variant: " << to_string(*result.config.case2_variant)
          << (result.resolution ? " (selected by residual oracle)" : "") << "\n";
    }
    out << "samples " << result.trajectory.samples().size() << "\n";
  }
  if (const auto s = result.singular_s()) {
    if (!options.quiet) {
      out << "singularity at s=" << g17(*s) << " (" << to_string(*result.singular_which()) << ")\n";
    }
    return kExitSingularity;
  }
  return kExitOk;
}

int run_verify_residual(const RunConfig& base, double delta, const RunOptions& options,
                        std::ostream& out) {
  const RunConfig cfg = with_overrides(base, options);
  const VerifyOutcome v = verify_residual(cfg, delta);
  const std::string report = params_line(cfg) + v.body;
  try {
    write_file((options.out_dir / cfg.output.prefix).string() + "_residual.txt", report);
  } catch (const IoError& e) {
    out << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!options.quiet || !v.passed) out << report;
  return v.passed ? kExitOk : kExitVerifyFailed;
}

int run_singularity_scan(const ScanConfig& base, const RunOptions& options, std::ostream& out) {
  ScanConfig cfg = base;
  cfg.base = with_overrides(cfg.base, options);
  std::vector<ScanRow> rows;
  try {
    rows = singularity_scan(cfg);
  } catch (const VariantUndecided& e) {
    out << e.what();
    return kExitVerifyFailed;
  }
  const std::string csv = scan_csv(rows);
  try {
    write_file((options.out_dir / cfg.base.output.prefix).string() + "_scan.csv", csv);
  } catch (const IoError& e) {
    out << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!options.quiet) out << csv;
  return kExitOk;
}

}  // namespace swinv
