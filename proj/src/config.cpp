#include "swinv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace swinv {

namespace {

const std::set<std::string, std::less<>> kRunKeys{
    "case",          "params.q",         "params.q3",          "params.omega",
    "params.f0",     "ic.a",             "ic.z0",              "ic.H",
    "ic.U",          "ic.V",             "integration.end",    "integration.step",
    "integration.denom_floor",           "integration.max_steps", "case2.variant",
    "output.prefix", "output.svg",       "debug.corrupt_rhs"};

const std::set<std::string, std::less<>> kScanKeys{"scan.vary", "scan.lo", "scan.hi", "scan.count"};

struct Entry {
  std::string value;
  int line = 0;
};

using Document = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Document tokenize(std::string_view text, bool allow_scan) {
  Document doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value", line_no, key);
    }
    if (!kRunKeys.contains(key) && !(allow_scan && kScanKeys.contains(key))) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no,
                        key);
    }
    if (auto it = doc.find(key); it != doc.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                            "' (first on line " + std::to_string(it->second.line) + ")",
                        line_no, key);
    }
    doc.emplace(key, Entry{value, line_no});
  }
  return doc;
}

ConfigError bad_value(const std::string& key, const Entry& e, const std::string& why) {
  return ConfigError("line " + std::to_string(e.line) + ": " + key + ": " + why, e.line, key);
}

double number(const Document& doc, const std::string& key) {
  const Entry& e = doc.at(key);
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw bad_value(key, e, "expected a finite number, got '" + e.value + "'");
  }
  return v;
}

template <typename Int>
Int integer(const Document& doc, const std::string& key) {
  const Entry& e = doc.at(key);
  Int v{};
  const char* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw bad_value(key, e, "expected an integer, got '" + e.value + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s) == "none") return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item =
        trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string_view to_string(RhsCorruption c) {
  return c == RhsCorruption::none ? "none" : "flip_height_numerator";
}

void validate(const RunConfig& cfg) {
  if (cfg.params.omega == 0.0) {
    throw ConfigError("params.omega must be nonzero (q/omega is undefined)", {}, "params.omega");
  }
  if (cfg.params.f0 != 0.0) {
    throw ConfigError("params.f0 must be 0 (removed by an equivalence transformation)", {},
                      "params.f0");
  }
  if (!(cfg.ics.H > 0.0)) throw ConfigError("ic.H must be positive", {}, "ic.H");
  if (cfg.case2_variant && cfg.kind != InvariantCase::traveling_x2x1) {
    throw ConfigError("case2.variant applies only to traveling_x2x1", {}, "case2.variant");
  }
  if (cfg.s_end == cfg.ics.s) {
    throw ConfigError("integration.end must differ from the initial abscissa", {},
                      "integration.end");
  }
  if (!(cfg.step > 0.0)) throw ConfigError("integration.step must be positive", {}, "integration.step");
  if (!(cfg.denom_floor > 0.0)) {
    throw ConfigError("integration.denom_floor must be positive", {}, "integration.denom_floor");
  }
  if (cfg.max_steps == 0) {
    throw ConfigError("integration.max_steps must be positive", {}, "integration.max_steps");
  }
  if (cfg.output.prefix.empty()) throw ConfigError("output.prefix is empty", {}, "output.prefix");
  std::set<std::string> seen;
  for (const auto& var : cfg.output.svg) {
    if (var != "H" && var != "U" && var != "V") {
      throw ConfigError("output.svg: unknown variable '" + var + "' (expected H, U, V)", {},
                        "output.svg");
    }
    if (!seen.insert(var).second) {
      throw ConfigError("output.svg: '" + var + "' listed twice", {}, "output.svg");
    }
  }
}

RunConfig build_run(const Document& doc) {
  std::vector<std::string> missing;
  const auto need = [&](const std::string& key) {
    if (!doc.contains(key)) missing.push_back(key);
  };
  std::optional<InvariantCase> kind;
  if (auto it = doc.find("case"); it != doc.end()) {
    kind = invariant_case_from_string(it->second.value);
    if (!kind) {
      throw bad_value("case", it->second,
                      "expected stationary_x1x3, traveling_x2x1 or similarity_x2x3");
    }
  }
  need("case");
  need("params.q");
  need("params.q3");
  const bool stationary = kind == InvariantCase::stationary_x1x3;
  if (!kind) {
    if (!doc.contains("ic.a") && !doc.contains("ic.z0")) missing.emplace_back("ic.a or ic.z0");
  } else {
    need(stationary ? "ic.a" : "ic.z0");
  }
  need("ic.H");
  need("ic.U");
  need("ic.V");
  need("integration.end");
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg, {}, missing.front());
  }
  const char* wrong_ic = stationary ? "ic.z0" : "ic.a";
  if (auto it = doc.find(wrong_ic); it != doc.end()) {
    throw bad_value(wrong_ic, it->second,
                    std::string("not valid for case ") + std::string(to_string(*kind)));
  }

  RunConfig cfg;
  cfg.kind = *kind;
  cfg.params.q = number(doc, "params.q");
  cfg.params.q3 = number(doc, "params.q3");
  if (doc.contains("params.omega")) cfg.params.omega = number(doc, "params.omega");
  if (doc.contains("params.f0")) cfg.params.f0 = number(doc, "params.f0");
  cfg.ics.s = number(doc, stationary ? "ic.a" : "ic.z0");
  cfg.ics.H = number(doc, "ic.H");
  cfg.ics.U = number(doc, "ic.U");
  cfg.ics.V = number(doc, "ic.V");
  cfg.s_end = number(doc, "integration.end");
  if (doc.contains("integration.step")) cfg.step = number(doc, "integration.step");
  if (doc.contains("integration.denom_floor")) cfg.denom_floor = number(doc, "integration.denom_floor");
  if (doc.contains("integration.max_steps")) {
    cfg.max_steps = integer<std::size_t>(doc, "integration.max_steps");
  }
  if (auto it = doc.find("case2.variant"); it != doc.end() && it->second.value != "auto") {
    cfg.case2_variant = case2_variant_from_string(it->second.value);
    if (!cfg.case2_variant) {
      throw bad_value("case2.variant", it->second, "expected auto, as_printed or dh_denominator");
    }
  }
  if (auto it = doc.find("debug.corrupt_rhs"); it != doc.end()) {
    if (it->second.value == "flip_height_numerator") {
      cfg.corruption = RhsCorruption::flip_height_numerator;
    } else if (it->second.value != "none") {
      throw bad_value("debug.corrupt_rhs", it->second, "expected none or flip_height_numerator");
    }
  }
  if (auto it = doc.find("output.prefix"); it != doc.end()) cfg.output.prefix = it->second.value;
  if (auto it = doc.find("output.svg"); it != doc.end()) cfg.output.svg = split_list(it->second.value);

  const auto locate = [&](const ConfigError& e) {
    if (auto it = doc.find(e.key()); it != doc.end()) {
      return ConfigError("line " + std::to_string(it->second.line) + ": " + e.what(),
                         it->second.line, e.key());
    }
    return e;
  };
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw locate(e);
  }
  return cfg;
}

void set_field(RunConfig& cfg, const std::string& key, double value) {
  if (key == "ic.a" || key == "ic.z0") cfg.ics.s = value;
  else if (key == "ic.H") cfg.ics.H = value;
  else if (key == "ic.U") cfg.ics.U = value;
  else if (key == "ic.V") cfg.ics.V = value;
  else if (key == "params.q") cfg.params.q = value;
  else if (key == "params.q3") cfg.params.q3 = value;
  else if (key == "params.omega") cfg.params.omega = value;
  else throw ConfigError("cannot scan over '" + key + "'", {}, "scan.vary");
}

}  // namespace

IntegrationConfig RunConfig::integration() const {
  IntegrationConfig c;
  c.s_start = ics.s;
  c.s_end = s_end;
  c.step = step;
  c.denom_floor = denom_floor;
  c.max_steps = max_steps;
  return c;
}

std::optional<std::string> scan_key(std::string_view name) {
  static const std::map<std::string, std::string, std::less<>> aliases{
      {"U_a", "ic.U"},       {"H_a", "ic.H"},         {"V_a", "ic.V"},    {"a", "ic.a"},
      {"z0", "ic.z0"},       {"H", "ic.H"},           {"U", "ic.U"},      {"V", "ic.V"},
      {"q", "params.q"},     {"q3", "params.q3"},     {"omega", "params.omega"},
      {"ic.U", "ic.U"},      {"ic.H", "ic.H"},        {"ic.V", "ic.V"},   {"ic.a", "ic.a"},
      {"ic.z0", "ic.z0"},    {"params.q", "params.q"}, {"params.q3", "params.q3"},
      {"params.omega", "params.omega"}};
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  return std::nullopt;
}

double ScanConfig::value(int i) const {
  if (i == count - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

RunConfig ScanConfig::run_config(double v) const {
  RunConfig cfg = base;
  set_field(cfg, *scan_key(vary), v);
  validate(cfg);
  return cfg;
}

RunConfig parse_config(std::string_view text) { return build_run(tokenize(text, false)); }

ScanConfig parse_scan_config(std::string_view text) {
  const Document doc = tokenize(text, true);
  std::vector<std::string> missing;
  for (const char* k : {"scan.vary", "scan.lo", "scan.hi", "scan.count"}) {
    if (!doc.contains(k)) missing.emplace_back(k);
  }
  ScanConfig scan;
  try {
    scan.base = build_run(doc);
  } catch (const ConfigError& e) {
    if (missing.empty() || !std::string_view(e.what()).starts_with("missing")) throw;
    std::string msg = e.what();
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg, {}, e.key());
  }
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg, {}, missing.front());
  }
  const Entry& vary = doc.at("scan.vary");
  const auto key = scan_key(vary.value);
  if (!key) throw bad_value("scan.vary", vary, "unsupported variable '" + vary.value + "'");
  const bool stationary = scan.base.kind == InvariantCase::stationary_x1x3;
  if ((*key == "ic.a" && !stationary) || (*key == "ic.z0" && stationary)) {
    throw bad_value("scan.vary", vary, "not valid for this case");
  }
  scan.vary = vary.value;
  scan.lo = number(doc, "scan.lo");
  scan.hi = number(doc, "scan.hi");
  scan.count = integer<int>(doc, "scan.count");
  if (!(scan.lo < scan.hi)) throw bad_value("scan.hi", doc.at("scan.hi"), "scan.lo must be below scan.hi");
  if (scan.count < 2) throw bad_value("scan.count", doc.at("scan.count"), "must be at least 2");
  return scan;
}

std::string serialize(const RunConfig& cfg) {
  const bool stationary = cfg.kind == InvariantCase::stationary_x1x3;
  std::string out;
  const auto put = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  put("case", std::string(to_string(cfg.kind)));
  put("params.q", format_double(cfg.params.q));
  put("params.q3", format_double(cfg.params.q3));
  put("params.omega", format_double(cfg.params.omega));
  put("params.f0", format_double(cfg.params.f0));
  put(stationary ? "ic.a" : "ic.z0", format_double(cfg.ics.s));
  put("ic.H", format_double(cfg.ics.H));
  put("ic.U", format_double(cfg.ics.U));
  put("ic.V", format_double(cfg.ics.V));
  put("integration.end", format_double(cfg.s_end));
  put("integration.step", format_double(cfg.step));
  put("integration.denom_floor", format_double(cfg.denom_floor));
  put("integration.max_steps", std::to_string(cfg.max_steps));
  if (cfg.kind == InvariantCase::traveling_x2x1) {
    put("case2.variant", cfg.case2_variant ? std::string(to_string(*cfg.case2_variant)) : "auto");
  }
  put("debug.corrupt_rhs", std::string(to_string(cfg.corruption)));
  put("output.prefix", cfg.output.prefix);
  std::string svg;
  for (const auto& v : cfg.output.svg) svg += (svg.empty() ? "" : ",") + v;
  put("output.svg", svg.empty() ? "none" : svg);
  return out;
}

std::string serialize(const ScanConfig& cfg) {
  std::string out = serialize(cfg.base);
  out += "scan.vary = " + cfg.vary + "\n";
  out += "scan.lo = " + format_double(cfg.lo) + "\n";
  out += "scan.hi = " + format_double(cfg.hi) + "\n";
  out += "scan.count = " + std::to_string(cfg.count) + "\n";
  return out;
}

}  // namespace swinv
