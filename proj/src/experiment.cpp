#include "scenario_sizer/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scenario_sizer/path_planning.hpp"
#include "scenario_sizer/risk_model.hpp"

namespace scenario_sizer {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

void flatten_json(const nlohmann::json& node, const std::string& prefix, ConfigMap& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  if (prefix.empty()) throw ConfigError("configuration must be a JSON object");
  if (node.is_string()) {
    out[prefix] = node.get<std::string>();
  } else if (node.is_boolean() || node.is_number()) {
    out[prefix] = node.dump();
  } else {
    throw ConfigError("configuration key '" + prefix + "' must hold a scalar");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return value;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc{} && ptr == end) return value;
  // Accept integral floating forms such as 1e6.
  const double d = parse_double(key, text);
  if (d != std::floor(d) || std::fabs(d) > 9e15) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(d);
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("'" + key + "' expects an unsigned integer");
  return value;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem.id",
      "problem.d",
      "problem.mu",
      "problem.sigma",
      "problem.dim",
      "problem.distribution",
      "problem.atom_location",
      "problem.atom_mass",
      "problem.variant",
      "problem.horizon",
      "problem.delta",
      "problem.y_mean",
      "problem.y_sd",
      "problem.offset",
      "problem.sway_amplitude",
      "problem.sway_frequency",
      "problem.resolution",
      "controller.epsilon",
      "controller.beta",
      "controller.n_initial",
      "controller.n_max",
      "controller.weighting",
      "controller.risk_mode",
      "controller.bernoulli_samples",
      "experiment.steps",
      "experiment.replications",
      "experiment.seed",
      "experiment.output_dir",
  };
  return keys;
}

class Params {
 public:
  explicit Params(const ConfigMap& m) : m_(m) {}

  double number(const std::string& key, double fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : parse_double(key, it->second);
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : parse_int(key, it->second);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : it->second;
  }

 private:
  const ConfigMap& m_;
};

std::string format_theta(const std::optional<double>& theta) {
  return theta ? fmt::format("{}", *theta) : std::string("flat");
}

}  // namespace

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      flatten_json(nlohmann::json::parse(body), "", out);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid JSON configuration: ") + e.what());
    }
    return out;
  }
  std::istringstream lines{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("configuration line {}: expected key = value", lineno));
    }
    const std::string key(trim(view.substr(0, eq)));
    if (key.empty()) throw ConfigError(fmt::format("configuration line {}: empty key", lineno));
    out[key] = unquote(trim(view.substr(eq + 1)));
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(ConfigMap& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must look like key=value");
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty()) throw ConfigError("override has an empty key");
  config[key] = unquote(trim(assignment.substr(eq + 1)));
}

ExperimentConfig experiment_from_config(const ConfigMap& m) {
  for (const auto& [key, value] : m) {
    if (!known_keys().count(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  const Params p(m);
  ExperimentConfig cfg;
  cfg.problem_id = p.text("problem.id", "");
  if (cfg.problem_id.empty()) throw ConfigError("missing 'problem.id'");
  for (const auto& [key, value] : m) {
    if (key.rfind("problem.", 0) == 0) cfg.problem_params[key.substr(8)] = value;
  }

  auto& c = cfg.controller;
  c.epsilon = p.number("controller.epsilon", c.epsilon);
  c.beta = p.number("controller.beta", c.beta);
  c.n_initial = p.integer("controller.n_initial", c.n_initial);
  c.n_max = p.integer("controller.n_max", c.n_max);
  c.bernoulli_samples = p.integer("controller.bernoulli_samples", c.bernoulli_samples);
  const auto weighting = p.text("controller.weighting", "uniform");
  if (weighting == "uniform") {
    c.weighting = Weighting::uniform;
  } else if (weighting == "linear") {
    c.weighting = Weighting::linear;
  } else {
    throw ConfigError("controller.weighting must be 'uniform' or 'linear'");
  }
  const auto mode = p.text("controller.risk_mode", "exact");
  if (mode == "exact") {
    c.risk_mode = RiskMode::exact;
  } else if (mode == "bernoulli") {
    c.risk_mode = RiskMode::bernoulli;
  } else {
    throw ConfigError("controller.risk_mode must be 'exact' or 'bernoulli'");
  }
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  cfg.steps = p.integer("experiment.steps", cfg.steps);
  if (cfg.steps < 1) throw ConfigError("experiment.steps must be positive");
  const auto reps = p.integer("experiment.replications", cfg.replications);
  if (reps < 1 || reps > 100000) throw ConfigError("experiment.replications must be in [1, 100000]");
  cfg.replications = static_cast<int>(reps);
  if (const auto it = m.find("experiment.seed"); it != m.end()) {
    cfg.seed = parse_seed("experiment.seed", it->second);
  }
  cfg.output_dir = p.text("experiment.output_dir", cfg.output_dir.string());

  // Fail early on bad problem parameters.
  make_problem(cfg);
  return cfg;
}

std::unique_ptr<ScenarioProblem> make_problem(const ExperimentConfig& cfg) {
  ConfigMap prefixed;
  for (const auto& [k, v] : cfg.problem_params) prefixed["problem." + k] = v;
  const Params p(prefixed);
  const auto& id = cfg.problem_id;
  try {
    if (id == "synthetic_beta") {
      return synthetic_beta_problem(static_cast<int>(p.integer("problem.d", 5)));
    }
    if (id == "half_line") {
      return half_line_problem(p.number("problem.mu", 1.0), p.number("problem.sigma", std::sqrt(2.0)));
    }
    if (id == "gaussian_lp") {
      return gaussian_lp_problem(static_cast<int>(p.integer("problem.dim", 20)));
    }
    if (id == "max_coordinate") {
      const auto dist = p.text("problem.distribution", "uniform");
      std::shared_ptr<const ScalarDistribution> law;
      if (dist == "uniform") {
        law = std::make_shared<UniformDistribution>(0.0, 1.0);
      } else if (dist == "atom") {
        law = std::make_shared<AtomMixtureDistribution>(p.number("problem.atom_location", 0.99),
                                                        p.number("problem.atom_mass", 0.1));
      } else {
        throw ConfigError("problem.distribution must be 'uniform' or 'atom'");
      }
      return max_coordinate_problem(static_cast<int>(p.integer("problem.dim", 400)), law);
    }
    if (id == "path_planning") {
      const auto variant = p.text("problem.variant", "steady");
      PathConfig pc;
      if (variant == "steady") {
        pc = steady_path_config();
      } else if (variant == "time_varying") {
        pc = time_varying_path_config();
      } else {
        throw ConfigError("problem.variant must be 'steady' or 'time_varying'");
      }
      pc.horizon = static_cast<int>(p.integer("problem.horizon", pc.horizon));
      pc.delta = p.number("problem.delta", pc.delta);
      pc.y_mean = p.number("problem.y_mean", pc.y_mean);
      pc.y_sd = p.number("problem.y_sd", pc.y_sd);
      pc.offset = p.number("problem.offset", pc.offset);
      pc.sway_amplitude = p.number("problem.sway_amplitude", pc.sway_amplitude);
      pc.sway_frequency = p.number("problem.sway_frequency", pc.sway_frequency);
      pc.resolution = p.number("problem.resolution", pc.resolution);
      return path_planning_problem(pc);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown problem id '" + id + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ReplicationSummary summarize(std::span<const TraceRecord> trace, double epsilon, int replication,
                             std::uint64_t seed) {
  ReplicationSummary s;
  s.replication = replication;
  s.seed = seed;
  s.steps = static_cast<std::int64_t>(trace.size());
  if (trace.empty()) return s;
  std::vector<double> risks;
  risks.reserve(trace.size());
  std::int64_t within = 0;
  double total = 0.0;
  for (const auto& r : trace) {
    risks.push_back(r.risk);
    total += r.risk;
    if (r.risk <= epsilon) ++within;
  }
  s.within_tolerance = static_cast<double>(within) / static_cast<double>(trace.size());
  s.final_theta = trace.back().theta;
  s.final_n = trace.back().n;
  s.mean_risk = total / static_cast<double>(trace.size());
  s.risk_q50 = quantile(risks, 0.5);
  s.risk_q90 = quantile(risks, 0.9);
  s.risk_q99 = quantile(risks, 0.99);
  return s;
}

std::string trace_csv(std::span<const TraceRecord> trace, double epsilon, bool with_timing) {
  std::string out = "t,N,theta,risk,violation,solver_status,elapsed_ms\n";
  for (const auto& r : trace) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.t, r.n, format_theta(r.theta), r.risk,
                       r.risk > epsilon ? 1 : 0, to_string(r.status),
                       with_timing ? r.elapsed.count() : 0.0);
  }
  return out;
}

std::string summary_csv(std::span<const ReplicationSummary> rows) {
  std::string out =
      "replication,seed,steps,freq_within_epsilon,final_theta,final_N,mean_risk,risk_q50,risk_q90,"
      "risk_q99\n";
  for (const auto& s : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", s.replication, s.seed, s.steps,
                       s.within_tolerance, format_theta(s.final_theta), s.final_n, s.mean_risk,
                       s.risk_q50, s.risk_q90, s.risk_q99);
  }
  return out;
}

namespace {

struct Panel {
  double left, top, width, height;
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return left + (x - xmin) / (xmax - xmin) * width; }
  double py(double y) const { return top + height - (y - ymin) / (ymax - ymin) * height; }
};

void draw_frame(std::string& svg, const Panel& p, const std::string& title, const std::string& xlabel) {
  svg += fmt::format(
      R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="none" stroke="#444"/>)"
      "\n",
      p.left, p.top, p.width, p.height);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="13">{}</text>)"
                     "\n",
                     p.left, p.top - 6, title);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="middle">{}</text>)"
                     "\n",
                     p.left + p.width / 2, p.top + p.height + 28, xlabel);
  for (int k = 0; k <= 4; ++k) {
    const double xv = p.xmin + (p.xmax - p.xmin) * k / 4.0;
    const double yv = p.ymin + (p.ymax - p.ymin) * k / 4.0;
    svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="10" text-anchor="middle">{:.3g}</text>)"
                       "\n",
                       p.px(xv), p.top + p.height + 14, xv);
    svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="10" text-anchor="end">{:.3g}</text>)"
                       "\n",
                       p.left - 4, p.py(yv) + 3, yv);
  }
}

void draw_polyline(std::string& svg, const Panel& p, const std::vector<std::pair<double, double>>& pts,
                   const char* color) {
  if (pts.empty()) return;
  svg += R"(<polyline fill="none" stroke-width="1.2" stroke=")";
  svg += color;
  svg += R"(" points=")";
  for (const auto& [x, y] : pts) svg += fmt::format("{:.2f},{:.2f} ", p.px(x), p.py(y));
  svg += "\"/>\n";
}

void draw_hline(std::string& svg, const Panel& p, double y, const char* color) {
  svg += fmt::format(
      R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-dasharray="4 3"/>)"
      "\n",
      p.left, p.py(y), p.left + p.width, p.py(y), color);
}

void draw_vline(std::string& svg, const Panel& p, double x, const char* color) {
  svg += fmt::format(
      R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-dasharray="4 3"/>)"
      "\n",
      p.px(x), p.top, p.px(x), p.top + p.height, color);
}

double nice_max(double v) { return v > 0.0 ? v * 1.05 : 1.0; }

}  // namespace

std::string trace_svg(std::span<const TraceRecord> trace, double epsilon, double beta) {
  const double width = 720.0;
  const double panel_h = 170.0;
  std::string svg = fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" font-family="sans-serif">)"
      "\n",
      width, 3 * (panel_h + 70) + 20);
  svg += R"(<rect width="100%" height="100%" fill="white"/>)"
         "\n";
  const double tmax = trace.empty() ? 1.0 : static_cast<double>(trace.back().t);

  double nmax = 1.0;
  double thmax = 1.0;
  for (const auto& r : trace) {
    nmax = std::max(nmax, static_cast<double>(r.n));
    if (r.theta) thmax = std::max(thmax, *r.theta);
  }

  const Panel pn{70, 40, width - 100, panel_h, 1.0, std::max(tmax, 2.0), 0.0, nice_max(nmax)};
  draw_frame(svg, pn, "sample size N_t", "step t");
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : trace) pts.emplace_back(static_cast<double>(r.t), static_cast<double>(r.n));
  draw_polyline(svg, pn, pts, "#1f77b4");

  const Panel pt{70, 40 + panel_h + 70, width - 100, panel_h, 1.0, std::max(tmax, 2.0), 0.0, nice_max(thmax)};
  draw_frame(svg, pt, "fitted theta_t", "step t");
  pts.clear();
  for (const auto& r : trace) {
    if (r.theta) {
      pts.emplace_back(static_cast<double>(r.t), *r.theta);
    } else {
      draw_polyline(svg, pt, pts, "#d62728");
      pts.clear();
    }
  }
  draw_polyline(svg, pt, pts, "#d62728");

  std::vector<double> risks;
  for (const auto& r : trace) risks.push_back(r.risk);
  std::sort(risks.begin(), risks.end());
  const Panel pc{70, 40 + 2 * (panel_h + 70), width - 100, panel_h, 0.0, 1.0, 0.0, 1.0};
  draw_frame(svg, pc, "cumulative distribution of the risk", "risk v");
  pts.clear();
  pts.emplace_back(0.0, 0.0);
  for (std::size_t k = 0; k < risks.size(); ++k) {
    const double before = static_cast<double>(k) / static_cast<double>(risks.size());
    const double after = static_cast<double>(k + 1) / static_cast<double>(risks.size());
    pts.emplace_back(risks[k], before);
    pts.emplace_back(risks[k], after);
  }
  pts.emplace_back(1.0, 1.0);
  draw_polyline(svg, pc, pts, "#2ca02c");
  draw_vline(svg, pc, epsilon, "#888");
  draw_hline(svg, pc, beta, "#888");
  svg += "</svg>\n";
  return svg;
}

std::string fit_overlay_svg(std::span<const DataPoint> data, double theta, SampleSize n) {
  std::vector<double> risks;
  for (const auto& p : data) {
    if (p.n == n) risks.push_back(p.v);
  }
  const double vmax = risks.empty() ? 1.0 : std::min(1.0, *std::max_element(risks.begin(), risks.end()) * 1.1 + 1e-9);
  const int bins = 30;
  std::vector<double> density(bins, 0.0);
  const double bin_w = vmax / bins;
  for (double v : risks) {
    const int b = std::min(bins - 1, static_cast<int>(v / bin_w));
    density[static_cast<std::size_t>(b)] += 1.0;
  }
  for (auto& d : density) d /= std::max<std::size_t>(1, risks.size()) * bin_w;

  const BetaRiskModel model(theta);
  std::vector<std::pair<double, double>> curve;
  double ymax = *std::max_element(density.begin(), density.end());
  for (int k = 1; k < 400; ++k) {
    const double v = vmax * k / 400.0;
    const double f = model.pdf(v, n);
    curve.emplace_back(v, f);
    ymax = std::max(ymax, f);
  }
  const Panel p{70, 40, 620, 300, 0.0, vmax, 0.0, nice_max(ymax)};
  std::string svg =
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="720" height="400" font-family="sans-serif">)"
      "\n";
  svg += R"(<rect width="100%" height="100%" fill="white"/>)"
         "\n";
  draw_frame(svg, p, fmt::format("risk histogram at N = {} and fitted density (theta = {:.4g})", n, theta),
             "risk v");
  for (int b = 0; b < bins; ++b) {
    const double x0 = p.px(b * bin_w);
    const double x1 = p.px((b + 1) * bin_w);
    const double y = p.py(density[static_cast<std::size_t>(b)]);
    svg += fmt::format(
        R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="#9ecae1" stroke="#fff"/>)"
        "\n",
        x0, y, x1 - x0, p.top + p.height - y);
  }
  draw_polyline(svg, p, curve, "#d62728");
  svg += "</svg>\n";
  return svg;
}

Dataset read_dataset_csv(std::istream& in) {
  Dataset data;
  std::string line;
  int lineno = 0;
  int col_v = 0, col_n = 1, col_w = -1;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string> fields;
    std::string_view rest = view;
    while (true) {
      const auto comma = rest.find(',');
      fields.emplace_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (first) {
      first = false;
      const bool header = std::any_of(fields.begin(), fields.end(), [](const std::string& f) {
        return !f.empty() && (std::isalpha(static_cast<unsigned char>(f.front())) != 0);
      });
      if (header) {
        col_v = col_n = col_w = -1;
        for (std::size_t k = 0; k < fields.size(); ++k) {
          if (fields[k] == "v") col_v = static_cast<int>(k);
          if (fields[k] == "N") col_n = static_cast<int>(k);
          if (fields[k] == "w") col_w = static_cast<int>(k);
        }
        if (col_v < 0 || col_n < 0) throw ConfigError("CSV header must name columns v and N");
        continue;
      }
      if (fields.size() >= 3) col_w = 2;
    }
    const auto needed = static_cast<std::size_t>(std::max({col_v, col_n, col_w}) + 1);
    if (fields.size() < needed) {
      throw ConfigError(fmt::format("CSV line {}: expected {} columns", lineno, needed));
    }
    try {
      DataPoint p;
      p.v = parse_double("v", fields[static_cast<std::size_t>(col_v)]);
      p.n = parse_int("N", fields[static_cast<std::size_t>(col_n)]);
      if (col_w >= 0) p.w = parse_double("w", fields[static_cast<std::size_t>(col_w)]);
      validate(p);
      data.push_back(p);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("CSV line {}: {}", lineno, e.what()));
    }
  }
  if (data.empty()) throw ConfigError("CSV contains no data rows");
  return data;
}

}  // namespace scenario_sizer
