#include "tlstat/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "tlstat/error.hpp"

namespace tlstat::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// Collects unknown and missing keys over the whole document so that one
// error names all of them.
struct Issues {
  std::vector<std::string> unknown;
  std::vector<std::string> missing;
};

class Section {
 public:
  Section(const json* node, std::string path, Issues& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (node_ && !node_->is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  ~Section() = default;
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_->contains(key) && !(*node_)[key].is_null();
  }

  template <class T>
  std::optional<T> get(const std::string& key) {
    if (!has(key)) return std::nullopt;
    try {
      return (*node_)[key].get<T>();
    } catch (const json::exception&) {
      throw ConfigError("key '" + name(key) + "' has the wrong type");
    }
  }

  template <class T>
  T get_or(const std::string& key, T fallback) {
    return get<T>(key).value_or(std::move(fallback));
  }

  template <class T>
  T require(const std::string& key, T placeholder) {
    auto v = get<T>(key);
    if (!v) {
      issues_.missing.push_back(name(key));
      return placeholder;
    }
    return *v;
  }

  Section child(const std::string& key, bool required) {
    if (!has(key)) {
      if (required) issues_.missing.push_back(name(key));
      return Section(nullptr, name(key), issues_);
    }
    return Section(&(*node_)[key], name(key), issues_);
  }

  void close() {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.count(key)) issues_.unknown.push_back(name(key));
    }
  }

 private:
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* node_;
  std::string path_;
  Issues& issues_;
  std::set<std::string> seen_;
};

WeightSpec parse_weight(Section& w, std::string_view kind) {
  std::pair<double, double> domain{0.0, 1.0};
  if (auto d = w.get<std::vector<double>>("domain")) {
    if (d->size() != 2) throw ConfigError("weight.domain must hold two numbers");
    domain = {(*d)[0], (*d)[1]};
  }
  const auto lipschitz = w.get<double>("lipschitz");
  if (kind == "constant") {
    return WeightSpec::constant(w.get_or<double>("value", 1.0), domain, lipschitz);
  }
  if (kind == "polynomial") {
    return WeightSpec::polynomial(w.require<std::vector<double>>("coefficients", {0.0}), domain,
                                  lipschitz);
  }
  if (kind == "piecewise_linear") {
    const auto raw = w.require<std::vector<std::vector<double>>>("knots", {{0.0, 0.0}, {1.0, 0.0}});
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : raw) {
      if (k.size() != 2) throw ConfigError("weight.knots entries must be [u, J(u)] pairs");
      knots.emplace_back(k[0], k[1]);
    }
    std::optional<std::pair<double, double>> dom;
    if (w.has("domain")) dom = domain;
    return WeightSpec::piecewise_linear(knots, dom, lipschitz);
  }
  throw ConfigError("unknown weight kind '" + std::string(kind) +
                    "' (expected constant, polynomial or piecewise_linear)");
}

std::vector<std::size_t> size_list(Section& s, const std::string& key,
                                   std::vector<std::size_t> fallback) {
  auto v = s.get<std::vector<std::size_t>>(key);
  return v ? *v : fallback;
}

void validate(const ExperimentConfig& c) {
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  if (c.n < 3) throw ConfigError("trim.n must be >= 3");
  // Heavy trimming and the weight domain, checked at every sample size in use.
  (void)c.trim();
  for (std::size_t n : c.n_grid) {
    if (n < 3) throw ConfigError("n_grid values must be >= 3");
    (void)c.trim_for(n);
  }
  (void)extend_weight(c.weight, c.alpha, c.beta);
  if (!(c.grid.step > 0.0) || !(c.grid.c > 0.0) || !(c.grid.lower >= 0.0)) {
    throw ConfigError("grid needs A >= 0, c > 0 and step > 0");
  }
  if (!(c.md_band > 0.0) || !(c.variance_band > 0.0) || !(c.md_se_multiplier >= 0.0) ||
      !(c.tail_floor >= 0.0)) {
    throw ConfigError("bands must be positive");
  }
  if (c.perturbation.kind == Perturbation::Kind::kSaturating && !(c.perturbation.epsilon > 0.0)) {
    throw ConfigError("weight.perturb_epsilon must be positive");
  }
  if (!(c.perturbation.budget >= 0.0)) throw ConfigError("weight.perturb_budget must be >= 0");
  if (!(c.diagnostics_epsilon > 0.0)) throw ConfigError("diagnostics.epsilon1 must be positive");
}

json number_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

ResolvedConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Issues issues;
  Section root(&doc, "", issues);
  ExperimentConfig c;

  {
    Section d = root.child("distribution", true);
    const auto family = d.require<std::string>("family", "uniform");
    const auto params = d.get_or<std::vector<double>>("params", {});
    d.close();
    c.distribution = Distribution(family_from_name(family), params);
  }
  {
    Section w = root.child("weight", true);
    const auto kind = w.require<std::string>("kind", "constant");
    c.weight = parse_weight(w, kind);
    const auto budget = w.get<double>("perturb_budget");
    const auto mode = w.get<std::string>("perturb_mode");
    if (mode) {
      c.perturbation.kind = perturbation_kind_from_name(*mode);
    } else if (budget && *budget > 0.0) {
      c.perturbation.kind = Perturbation::Kind::kSaturating;
    }
    c.perturbation.epsilon = w.get_or<double>("perturb_epsilon", 1.0);
    c.perturbation.budget =
        budget.value_or(c.perturbation.kind == Perturbation::Kind::kNone ? 0.0 : 1.0);
    w.close();
  }
  {
    Section t = root.child("trim", true);
    c.n = t.require<std::size_t>("n", 2000);
    c.alpha = t.require<double>("alpha", 0.25);
    c.beta = t.require<double>("beta", 0.25);
    if (auto rule = t.get<std::string>("rule")) c.trim_rule.rounding = rounding_from_name(*rule);
    c.trim_rule.offset_scale = t.get_or<double>("offset_scale", 0.0);
    c.trim_rule.offset_exponent = t.get_or<double>("offset_exponent", 0.25);
    t.close();
  }
  c.replications = root.require<std::size_t>("replications", 1);
  c.seed = root.require<std::uint64_t>("seed", 0);
  if (auto norm = root.get<std::string>("normalization")) {
    c.normalization = normalization_from_name(*norm);
  }
  {
    Section g = root.child("grid", false);
    c.grid.lower = g.get_or<double>("A", c.grid.lower);
    c.grid.c = g.get_or<double>("c", c.grid.c);
    c.grid.step = g.get_or<double>("step", c.grid.step);
    g.close();
  }
  c.n_grid = size_list(root, "n_grid", c.n_grid);
  {
    Section b = root.child("bands", false);
    c.md_band = b.get_or<double>("md", c.md_band);
    c.md_se_multiplier = b.get_or<double>("md_se_multiplier", c.md_se_multiplier);
    c.tail_floor = b.get_or<double>("tail_floor", c.tail_floor);
    c.variance_band = b.get_or<double>("variance", c.variance_band);
    b.close();
  }
  {
    Section k = root.child("conditions", false);
    auto& o = c.conditions;
    o.epsilon = k.get_or<double>("epsilon", o.epsilon);
    o.t_grid = k.get_or<std::vector<double>>("t_grid", o.t_grid);
    o.n_grid = size_list(k, "n_grid", o.n_grid);
    o.trim_bound = k.get_or<double>("trim_bound", o.trim_bound);
    o.coef_bound = k.get_or<double>("coef_bound", std::max(1.0, c.perturbation.budget));
    o.lipschitz_grid = k.get_or<std::size_t>("lipschitz_grid", o.lipschitz_grid);
    k.close();
  }
  {
    Section d = root.child("diagnostics", false);
    c.diagnostics_epsilon = d.get_or<double>("epsilon1", c.diagnostics_epsilon);
    d.close();
  }
  root.close();

  if (!issues.unknown.empty()) throw ConfigError("unknown keys: " + join(issues.unknown));
  if (!issues.missing.empty()) throw ConfigError("missing required keys: " + join(issues.missing));
  return resolve(std::move(c));
}

ResolvedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

json canonical_json(const ExperimentConfig& c) {
  json weight = {{"kind", weight_kind_name(c.weight.kind())},
                 {"domain", {c.weight.lo(), c.weight.hi()}},
                 {"lipschitz", c.weight.lipschitz()},
                 {"perturb_mode", perturbation_kind_name(c.perturbation.kind)},
                 {"perturb_epsilon", c.perturbation.epsilon},
                 {"perturb_budget", c.perturbation.budget}};
  switch (c.weight.kind()) {
    case WeightSpec::Kind::kConstant: weight["value"] = c.weight.coefficients()[0]; break;
    case WeightSpec::Kind::kPolynomial: weight["coefficients"] = c.weight.coefficients(); break;
    case WeightSpec::Kind::kPiecewiseLinear: {
      json knots = json::array();
      for (const auto& [u, y] : c.weight.knots()) knots.push_back({u, y});
      weight["knots"] = knots;
      break;
    }
  }
  json t_grid = json::array();
  for (double t : c.conditions.t_grid) t_grid.push_back(number_or_string(t));
  return {
      {"distribution",
       {{"family", family_name(c.distribution.family())}, {"params", c.distribution.params()}}},
      {"weight", weight},
      {"trim",
       {{"n", c.n},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"rule", rounding_name(c.trim_rule.rounding)},
        {"offset_scale", c.trim_rule.offset_scale},
        {"offset_exponent", c.trim_rule.offset_exponent}}},
      {"replications", c.replications},
      {"seed", c.seed},
      {"normalization", normalization_name(c.normalization)},
      {"grid", {{"A", c.grid.lower}, {"c", c.grid.c}, {"step", c.grid.step}}},
      {"n_grid", c.n_grid},
      {"bands",
       {{"md", c.md_band},
        {"md_se_multiplier", c.md_se_multiplier},
        {"tail_floor", c.tail_floor},
        {"variance", c.variance_band}}},
      {"conditions",
       {{"epsilon", c.conditions.epsilon},
        {"t_grid", t_grid},
        {"n_grid", c.conditions.n_grid},
        {"trim_bound", c.conditions.trim_bound},
        {"coef_bound", c.conditions.coef_bound},
        {"lipschitz_grid", c.conditions.lipschitz_grid}}},
      {"diagnostics", {{"epsilon1", c.diagnostics_epsilon}}}};
}

ResolvedConfig resolve(ExperimentConfig config) {
  validate(config);
  ResolvedConfig out;
  out.canonical = canonical_json(config);
  out.hash = fnv1a(out.canonical.dump());
  out.experiment = std::move(config);
  return out;
}

}  // namespace tlstat::cli
