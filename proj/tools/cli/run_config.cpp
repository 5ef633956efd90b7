#include "cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "idsm/errors.hpp"

namespace idsm::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& what) const {
    std::ostringstream msg;
    msg << source_;
    if (node.IsDefined() && node.Mark().line >= 0) {
      msg << ':' << node.Mark().line + 1;
    }
    msg << ": " << key << ": " << what;
    throw ConfigError(msg.str());
  }

  void only_keys(const YAML::Node& map, const std::string& key, std::set<std::string> allowed) const {
    if (!map.IsMap()) {
      fail(map, key, "expected a mapping");
    }
    for (const auto& item : map) {
      const auto name = item.first.as<std::string>();
      if (allowed.count(name) == 0) {
        fail(item.first, key.empty() ? name : key + "." + name, "unknown key");
      }
    }
  }

  double number(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) {
      fail(node, key, "expected a number");
    }
    try {
      const double x = node.as<double>();
      if (!std::isfinite(x)) {
        fail(node, key, "must be finite");
      }
      return x;
    } catch (const YAML::Exception&) {
      fail(node, key, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  double number_or(const YAML::Node& map, const char* name, const std::string& key, double fallback) const {
    const YAML::Node node = map[name];
    return node ? number(node, key + "." + name) : fallback;
  }

  double required(const YAML::Node& map, const char* name, const std::string& key) const {
    const YAML::Node node = map[name];
    if (!node) {
      fail(map, key + "." + name, "required key is missing");
    }
    return number(node, key + "." + name);
  }

  std::uint64_t unsigned64(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) {
      fail(node, key, "expected a nonnegative integer");
    }
    try {
      if (!node.Scalar().empty() && node.Scalar().front() == '-') {
        throw YAML::Exception(node.Mark(), "negative");
      }
      return node.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail(node, key, "expected a nonnegative integer, got '" + node.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& node, const std::string& key) const {
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, key, "expected true or false");
    }
  }

  std::string text(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) {
      fail(node, key, "expected a string");
    }
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& key) const {
    if (node.IsSequence()) {
      if (node.size() == 0) {
        fail(node, key, "list must not be empty");
      }
      std::vector<double> out;
      for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(number(node[i], key + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
    return {number(node, key)};
  }

  // Core factories throw plain ConfigErrors; anchor them at `node`.
  template <class F>
  auto anchored(const YAML::Node& node, const std::string& key, F&& make) const {
    try {
      return make();
    } catch (const ConfigError& e) {
      fail(node, key, e.what());
    }
  }

 private:
  std::string source_;
};

LevyMeasure1D parse_levy(const Reader& r, const YAML::Node& node, const std::string& key) {
  const YAML::Node fam = node["family"];
  if (!fam) {
    r.fail(node, key + ".family", "required key is missing (stable, tempered_stable, point_mass)");
  }
  const std::string family = r.text(fam, key + ".family");
  if (family == "stable" || family == "tempered_stable") {
    const YAML::Node an = node["alpha"];
    const double alpha = r.required(node, "alpha", key);
    if (!(alpha > 0.0 && alpha < 2.0)) {
      r.fail(an, key + ".alpha", "alpha must lie in (0, 2)");
    }
    if (alpha == 1.0) {
      r.fail(an, key + ".alpha", "alpha = 1 is an excluded boundary value; use alpha in (0, 1) or (1, 2)");
    }
    const double c = r.required(node, "c", key);
    if (!(c > 0.0)) {
      r.fail(node["c"], key + ".c", "c must be > 0");
    }
    if (family == "stable") {
      return LevyMeasure1D::stable(alpha, c);
    }
    const double lambda = r.required(node, "lambda", key);
    if (!(lambda > 0.0)) {
      r.fail(node["lambda"], key + ".lambda", "lambda must be > 0");
    }
    return LevyMeasure1D::tempered_stable(alpha, c, lambda);
  }
  if (family == "point_mass") {
    const double position = r.required(node, "position", key);
    if (position == 0.0) {
      r.fail(node["position"], key + ".position", "position must be nonzero");
    }
    const double mass = r.required(node, "mass", key);
    if (!(mass > 0.0)) {
      r.fail(node["mass"], key + ".mass", "mass must be > 0");
    }
    const bool symmetric = node["symmetric"] ? r.boolean(node["symmetric"], key + ".symmetric") : false;
    return LevyMeasure1D::point_mass(position, mass, symmetric);
  }
  r.fail(fam, key + ".family", "unknown Levy family '" + family + "' (stable, tempered_stable, point_mass)");
}

const std::set<std::string> kLevyKeys{"family", "alpha", "c", "lambda", "position", "mass", "symmetric"};
const std::set<std::string> kPointKeys{"label", "weight", "drift", "sigma2", "levy"};

MixingPoint parse_point(const Reader& r, const YAML::Node& node, const std::string& key,
                        const std::string& levy_key) {
  r.only_keys(node, key, kPointKeys);
  MixingPoint p;
  if (node["label"]) {
    p.label = r.text(node["label"], key + ".label");
  }
  p.weight = r.number_or(node, "weight", key, 1.0);
  if (!(p.weight > 0.0)) {
    r.fail(node["weight"], key + ".weight", "weight m(v) must be > 0");
  }
  p.drift = r.number_or(node, "drift", key, 0.0);
  p.gaussian_variance = r.number_or(node, "sigma2", key, 0.0);
  if (p.gaussian_variance < 0.0) {
    r.fail(node["sigma2"], key + ".sigma2", "sigma2 must be >= 0");
  }
  const YAML::Node levy = node["levy"];
  if (!levy) {
    r.fail(node, key + ".levy", "required key is missing");
  }
  r.only_keys(levy, levy_key, kLevyKeys);
  p.levy = parse_levy(r, levy, levy_key);
  return p;
}

ModelSpec parse_model(const Reader& r, const YAML::Node& node) {
  if (!node) {
    r.fail(node, "model", "required section is missing");
  }
  if (!node.IsMap()) {
    r.fail(node, "model", "expected a mapping");
  }
  std::vector<MixingPoint> points;
  if (node["points"]) {
    r.only_keys(node, "model", {"points"});
    const YAML::Node list = node["points"];
    if (!list.IsSequence() || list.size() == 0) {
      r.fail(list, "model.points", "the mixing space V must be a nonempty list");
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string key = "model.points[" + std::to_string(i) + "]";
      points.push_back(parse_point(r, list[i], key, key + ".levy"));
      if (points.back().label.empty()) {
        points.back().label = "v" + std::to_string(i);
      }
      if (!labels.insert(points.back().label).second) {
        r.fail(list[i], key + ".label", "duplicate label '" + points.back().label + "'");
      }
    }
  } else {
    // Single-point shorthand: the Levy keys sit next to weight/drift/sigma2.
    std::set<std::string> allowed = kLevyKeys;
    allowed.insert({"label", "weight", "drift", "sigma2"});
    r.only_keys(node, "model", allowed);
    YAML::Node point(YAML::NodeType::Map);
    YAML::Node levy(YAML::NodeType::Map);
    for (const auto& item : node) {
      const auto name = item.first.as<std::string>();
      (kLevyKeys.count(name) != 0 ? levy : point)[name] = item.second;
    }
    if (levy.size() > 0) {
      point["levy"] = levy;
    }
    MixingPoint p = parse_point(r, point, "model", "model");
    if (p.label.empty()) {
      p.label = "v0";
    }
    points.push_back(std::move(p));
  }
  return r.anchored(node, "model", [&] { return ModelSpec(std::move(points)); });
}

KernelSpec parse_kernel(const Reader& r, const YAML::Node& node, std::size_t mixing_points) {
  if (!node) {
    r.fail(node, "kernel", "required section is missing");
  }
  r.only_keys(node, "kernel", {"family", "gamma", "theta", "start", "end", "stationary_increments"});
  const YAML::Node fam = node["family"];
  if (!fam) {
    r.fail(node, "kernel.family", "required key is missing (fractional, exp_ma, indicator)");
  }
  const std::string family = r.text(fam, "kernel.family");
  auto per_point = [&](const char* name) {
    const YAML::Node values = node[name];
    const std::string key = std::string("kernel.") + name;
    if (!values) {
      r.fail(node, key, "required key is missing");
    }
    auto out = r.numbers(values, key);
    if (out.size() != 1 && out.size() != mixing_points) {
      r.fail(values, key,
             "needs one value or one per mixing point (" + std::to_string(mixing_points) + ")");
    }
    return std::make_pair(out, values);
  };
  if (family == "fractional") {
    auto [gamma, at] = per_point("gamma");
    for (double g : gamma) {
      if (!(g > 0.0)) {
        r.fail(at, "kernel.gamma", "gamma must be > 0");
      }
      if (g == 0.5) {
        r.fail(at, "kernel.gamma", "gamma = 1/2 is an excluded boundary value; use gamma in (0, 1/2) or (1/2, 1)");
      }
    }
    return r.anchored(node, "kernel", [&] { return KernelSpec(FractionalKernel{gamma}); });
  }
  if (family == "exp_ma") {
    auto [theta, at] = per_point("theta");
    for (double th : theta) {
      if (!(th > 0.0)) {
        r.fail(at, "kernel.theta", "theta must be > 0");
      }
    }
    return r.anchored(node, "kernel", [&] { return KernelSpec(ExpMAKernel{theta}); });
  }
  if (family == "indicator") {
    IndicatorKernel k;
    k.start = r.number_or(node, "start", "kernel", 0.0);
    k.end = r.number_or(node, "end", "kernel", 1.0);
    if (node["stationary_increments"]) {
      k.stationary_increments = r.boolean(node["stationary_increments"], "kernel.stationary_increments");
    }
    return r.anchored(node, "kernel", [&] { return KernelSpec(k); });
  }
  r.fail(fam, "kernel.family", "unknown kernel family '" + family + "' (fractional, exp_ma, indicator)");
}

SeriesConfig parse_series(const Reader& r, const YAML::Node& node) {
  SeriesConfig s;
  if (!node) {
    return s;
  }
  r.only_keys(node, "series",
              {"window_past", "horizon", "gamma_cap", "grid_points", "max_terms", "max_truncation_ratio"});
  s.window_past = r.number_or(node, "window_past", "series", s.window_past);
  s.horizon = r.number_or(node, "horizon", "series", s.horizon);
  s.gamma_cap = r.number_or(node, "gamma_cap", "series", s.gamma_cap);
  s.max_truncation_ratio = r.number_or(node, "max_truncation_ratio", "series", s.max_truncation_ratio);
  if (node["grid_points"]) {
    s.grid_points = r.unsigned64(node["grid_points"], "series.grid_points");
  }
  if (node["max_terms"]) {
    s.max_terms = r.unsigned64(node["max_terms"], "series.max_terms");
  }
  r.anchored(node, "series", [&] {
    s.validate();
    return 0;
  });
  return s;
}

QuadratureConfig parse_quadrature(const Reader& r, const YAML::Node& node) {
  QuadratureConfig q;
  if (!node) {
    return q;
  }
  r.only_keys(node, "quadrature", {"rel_tol", "abs_tol", "max_panels"});
  q.rel_tol = r.number_or(node, "rel_tol", "quadrature", q.rel_tol);
  q.abs_tol = r.number_or(node, "abs_tol", "quadrature", q.abs_tol);
  if (node["max_panels"]) {
    q.max_panels = static_cast<int>(r.unsigned64(node["max_panels"], "quadrature.max_panels"));
  }
  r.anchored(node, "quadrature", [&] {
    q.validate();
    return 0;
  });
  return q;
}

ordered_json levy_to_json(const LevyMeasure1D& rho) {
  ordered_json j;
  j["family"] = rho.family_name();
  if (const auto* s = rho.as_stable()) {
    j["alpha"] = s->alpha;
    j["c"] = s->c;
  } else if (const auto* t = rho.as_tempered()) {
    j["alpha"] = t->alpha;
    j["c"] = t->c;
    j["lambda"] = t->lambda;
  } else if (const auto* p = rho.as_point_mass()) {
    j["position"] = p->position;
    j["mass"] = p->mass;
    j["symmetric"] = rho.symmetric();
  } else {
    throw UnsupportedError("custom Levy measures cannot be written to a run document");
  }
  return j;
}

ordered_json kernel_to_json(const KernelSpec& kernel) {
  ordered_json j;
  j["family"] = kernel.family_name();
  if (const auto* f = kernel.as_fractional()) {
    j["gamma"] = f->gamma;
  } else if (const auto* e = kernel.as_exp_ma()) {
    j["theta"] = e->theta;
  } else if (const auto* k = std::get_if<IndicatorKernel>(&kernel.family())) {
    j["start"] = k->start;
    j["end"] = k->end;
    j["stationary_increments"] = k->stationary_increments;
  } else {
    throw UnsupportedError("only builtin kernels can be written to a run document");
  }
  return j;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_run_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream msg;
    msg << source << ':' << e.mark.line + 1 << ": syntax error: " << e.msg;
    throw ConfigError(msg.str());
  }
  if (!doc.IsMap()) {
    r.fail(doc, "document", "expected a mapping at the top level");
  }

  RunConfig config;
  // A simulate manifest: the run document sits under `config`. Node
  // assignment rebinds in yaml-cpp, so body is never reassigned.
  const bool manifest = static_cast<bool>(doc["config"]);
  const YAML::Node body = manifest ? doc["config"] : doc;
  if (manifest) {
    r.only_keys(doc, "", {"command", "seed", "paths", "path_seeds", "truncation", "files", "warnings", "config"});
    if (doc["paths"]) {
      config.paths = r.unsigned64(doc["paths"], "paths");
    }
  }
  r.only_keys(body, "", {"seed", "model", "kernel", "series", "quadrature", "output"});

  config.model = parse_model(r, body["model"]);
  config.kernel = parse_kernel(r, body["kernel"], config.model.size());
  config.series = parse_series(r, body["series"]);
  config.quadrature = parse_quadrature(r, body["quadrature"]);
  if (body["seed"]) {
    config.seed = r.unsigned64(body["seed"], "seed");
  }
  if (manifest && doc["seed"]) {
    config.seed = r.unsigned64(doc["seed"], "seed");
  }
  config.series.seed = config.seed;

  if (const YAML::Node out = body["output"]) {
    r.only_keys(out, "output", {"directory", "formats"});
    if (out["directory"]) {
      config.output_directory = r.text(out["directory"], "output.directory");
    }
    if (const YAML::Node formats = out["formats"]) {
      if (!formats.IsSequence()) {
        r.fail(formats, "output.formats", "expected a list drawn from csv, json");
      }
      config.formats.clear();
      for (std::size_t i = 0; i < formats.size(); ++i) {
        const std::string f = r.text(formats[i], "output.formats");
        if (f != "csv" && f != "json") {
          r.fail(formats[i], "output.formats", "unknown format '" + f + "' (csv, json)");
        }
        config.formats.push_back(f);
      }
    }
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open config file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

std::string config_to_json(const RunConfig& config, int indent) {
  ordered_json doc;
  doc["seed"] = config.seed;
  ordered_json points = ordered_json::array();
  for (const auto& p : config.model.points()) {
    ordered_json j;
    j["label"] = p.label;
    j["weight"] = p.weight;
    j["drift"] = p.drift;
    j["sigma2"] = p.gaussian_variance;
    j["levy"] = levy_to_json(p.levy);
    points.push_back(std::move(j));
  }
  doc["model"]["points"] = std::move(points);
  doc["kernel"] = kernel_to_json(config.kernel);
  const auto& s = config.series;
  doc["series"] = {{"window_past", s.window_past},
                   {"horizon", s.horizon},
                   {"gamma_cap", s.gamma_cap},
                   {"grid_points", s.grid_points},
                   {"max_terms", s.max_terms},
                   {"max_truncation_ratio", s.max_truncation_ratio}};
  doc["quadrature"] = {{"rel_tol", config.quadrature.rel_tol},
                       {"abs_tol", config.quadrature.abs_tol},
                       {"max_panels", config.quadrature.max_panels}};
  doc["output"] = {{"directory", config.output_directory}, {"formats", config.formats}};
  return doc.dump(indent);
}

}  // namespace idsm::cli
