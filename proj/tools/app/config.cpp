#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "exospin/errors.hpp"

namespace exospin::app {

Scenario parse_scenario(const std::string& name) {
  if (name == "dispersion") return Scenario::dispersion;
  if (name == "junction") return Scenario::junction;
  if (name == "gordon-fit" || name == "gordon_fit") return Scenario::gordon_fit;
  if (name == "sigma") return Scenario::sigma;
  if (name == "cech") return Scenario::cech;
  if (name == "hausdorff") return Scenario::hausdorff;
  if (name == "evolve") return Scenario::evolve;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected dispersion, junction, gordon-fit, sigma, cech, hausdorff, evolve)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::dispersion:
      return "dispersion";
    case Scenario::junction:
      return "junction";
    case Scenario::gordon_fit:
      return "gordon-fit";
    case Scenario::sigma:
      return "sigma";
    case Scenario::cech:
      return "cech";
    case Scenario::hausdorff:
      return "hausdorff";
    case Scenario::evolve:
      return "evolve";
  }
  return "?";
}

namespace {

std::string where(const YAML::Node& n, const std::string& key) {
  std::ostringstream os;
  if (n.Mark().line >= 0) os << "line " << n.Mark().line + 1 << ": ";
  os << "key '" << key << "'";
  return os.str();
}

// Mapping reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(YAML::Node node, std::string prefix, std::map<std::string, int>* lines)
      : node_(std::move(node)), prefix_(std::move(prefix)), lines_(lines) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(where(node_, prefix_) + ": expected a mapping");
    }
  }

  bool present() const { return node_ && node_.IsMap(); }

  YAML::Node child(const std::string& key) {
    known_.insert(key);
    if (!present()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node& view = node_;
    YAML::Node v = view[key];
    if (v && lines_ && v.Mark().line >= 0) (*lines_)[full(key)] = v.Mark().line + 1;
    return v;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    const YAML::Node v = child(key);
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(v, full(key)) + ": cannot read value '" + scalar_text(v) + "'");
    }
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    const YAML::Node v = child(key);
    if (!v || v.IsNull()) return;
    T tmp{};
    get(key, tmp);
    out = tmp;
  }

  void get_vec(const std::string& key, Vec4& out) { get_fixed(key, out, 4); }
  void get_vec(const std::string& key, Vec3& out) { get_fixed(key, out, 3); }

  void get_path(const std::string& key, std::filesystem::path& out, const std::filesystem::path& base) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = std::filesystem::path(s).is_absolute() ? std::filesystem::path(s) : base / s;
  }

  template <class F>
  void get_enum(const std::string& key, F&& parse) {
    const YAML::Node v = child(key);
    if (!v) return;
    std::string s;
    get(key, s);
    try {
      parse(s);
    } catch (const std::exception& e) {
      throw ConfigError(where(v, full(key)) + ": " + e.what());
    }
  }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!known_.count(k)) throw ConfigError(where(kv.first, full(k)) + ": unknown key");
    }
  }

  std::string full(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  static std::string scalar_text(const YAML::Node& v) {
    if (v.IsScalar()) return v.Scalar();
    return v.IsSequence() ? "<sequence>" : "<mapping>";
  }

  template <class V>
  void get_fixed(const std::string& key, V& out, int n) {
    const YAML::Node v = child(key);
    if (!v) return;
    if (!v.IsSequence() || static_cast<int>(v.size()) != n) {
      throw ConfigError(where(v, full(key)) + ": expected a list of " + std::to_string(n) + " numbers");
    }
    for (int i = 0; i < n; ++i) {
      try {
        out[i] = v[static_cast<std::size_t>(i)].as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where(v, full(key)) + ": entry " + std::to_string(i) + " is not a number");
      }
    }
  }

  YAML::Node node_;
  std::string prefix_;
  std::set<std::string> known_;
  std::map<std::string, int>* lines_;
};

RunConfig from_yaml(const YAML::Node& root, const std::filesystem::path& base,
                    std::map<std::string, int>* lines) {
  RunConfig cfg;
  Section top(root, "", lines);
  {
    const YAML::Node sc = top.child("scenario");
    if (!sc) throw ConfigError("key 'scenario' is required");
    try {
      cfg.scenario = parse_scenario(sc.as<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(where(sc, "scenario") + ": " + e.what());
    }
  }
  top.get("seed", cfg.seed);
  top.get_path("output_dir", cfg.output_dir, base);

  Section phys(top.child("physics"), "physics", lines);
  phys.get("m", cfg.physics.m);
  phys.get("mass_ratio_nm", cfg.physics.mass_ratio_nm);
  phys.get("inv_alpha", cfg.physics.inv_alpha);
  phys.get("mu_ratio", cfg.physics.mu_ratio);
  phys.finish();

  Section defo(top.child("deformation"), "deformation", lines);
  auto& slab = cfg.deformation.slab;
  defo.get("axis", slab.axis);
  defo.get("sigma1_end", slab.sigma1_end);
  defo.get("sigma2_end", slab.sigma2_end);
  defo.get("blend_width", slab.blend_width);
  defo.get("phi0", slab.phi0);
  defo.get("k", slab.k_axis);
  defo.get("theta_slope", slab.theta_slope);
  defo.get("k_max_over_m", cfg.deformation.k_max_over_m);
  defo.finish();

  Section disp(top.child("dispersion"), "dispersion", lines);
  disp.get("p_max_over_m", cfg.dispersion.p_max_over_m);
  disp.get("samples", cfg.dispersion.samples);
  disp.get_vec("k", cfg.dispersion.k);
  disp.finish();

  Section junc(top.child("junction"), "junction", lines);
  junc.get("axis", cfg.junction.axis);
  junc.get("offset", cfg.junction.offset);
  junc.get("samples_per_axis", cfg.junction.samples_per_axis);
  junc.get("half_extent", cfg.junction.half_extent);
  junc.get_vec("p", cfg.junction.p);
  junc.get_enum("branch", [&](const std::string& s) {
    if (s == "positive") cfg.junction.branch = Branch::positive;
    else if (s == "negative") cfg.junction.branch = Branch::negative;
    else throw ConfigError("expected positive or negative");
  });
  junc.finish();

  Section gord(top.child("gordon"), "gordon", lines);
  gord.get_enum("beta_mode", [&](const std::string& s) {
    if (s == "self_consistent") cfg.gordon.beta_mode = BetaMode::self_consistent;
    else if (s == "free") cfg.gordon.beta_mode = BetaMode::free;
    else throw ConfigError("expected self_consistent or free");
  });
  gord.get("beta", cfg.gordon.beta);
  gord.finish();

  Section sig(top.child("sigma"), "sigma", lines);
  sig.get("components", cfg.sigma.components);
  sig.get("sites", cfg.sigma.sites);
  sig.get("h", cfg.sigma.h);
  sig.get("dt", cfg.sigma.dt);
  sig.get("steps", cfg.sigma.steps);
  sig.get_vec("k", cfg.sigma.k);
  sig.get_enum("preset", [&](const std::string& s) { cfg.sigma.preset = parse_sigma_preset(s); });
  sig.get("amplitude", cfg.sigma.amplitude);
  sig.get("mode", cfg.sigma.mode);
  sig.get("eps_chart", cfg.sigma.eps_chart);
  sig.finish();

  Section cech(top.child("cech"), "cech", lines);
  cech.get_path("nerve", cfg.cech.nerve, base);
  cech.get_enum("action", [&](const std::string& s) {
    if (s == "h1") cfg.cech.action = CechAction::h1;
    else if (s == "diff") cfg.cech.action = CechAction::diff;
    else if (s == "glue") cfg.cech.action = CechAction::glue;
    else throw ConfigError("expected h1, diff or glue");
  });
  cech.get_path("cocycle_a", cfg.cech.cocycle_a, base);
  cech.get_path("cocycle_b", cfg.cech.cocycle_b, base);
  cech.get_path("deformation", cfg.cech.deformation, base);
  cech.get_enum("functional", [&](const std::string& s) { cfg.cech.functional = parse_gluing_functional(s); });
  cech.finish();

  Section haus(top.child("hausdorff"), "hausdorff", lines);
  haus.get_path("set", cfg.hausdorff.set, base);
  haus.get("s", cfg.hausdorff.s);
  haus.get("delta_min", cfg.hausdorff.delta_min);
  haus.get("levels", cfg.hausdorff.levels);
  haus.finish();

  Section evo(top.child("evolve"), "evolve", lines);
  evo.get_vec("p", cfg.evolve.p);
  evo.get_vec("k", cfg.evolve.k);
  evo.get("t_max", cfg.evolve.t_max);
  evo.get("samples", cfg.evolve.samples);
  evo.finish();

  top.finish();
  return cfg;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_k(const Vec4& k, double k_max, const std::string& key) {
  for (int mu = 0; mu < 4; ++mu) {
    if (!std::isfinite(k[mu]) || std::abs(k[mu]) > k_max) {
      std::ostringstream os;
      os << key << ": |k_" << mu << "| = " << std::abs(k[mu]) << " exceeds k_max = " << k_max;
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

void validate(const RunConfig& cfg) {
  const auto& ph = cfg.physics;
  require(ph.m > 0.0, "physics.m: mass must be positive");
  require(ph.mass_ratio_nm > 0.0, "physics.mass_ratio_nm must be positive");
  require(ph.inv_alpha > 0.0, "physics.inv_alpha must be positive");
  require(cfg.deformation.k_max_over_m > 0.0, "deformation.k_max_over_m must be positive");
  const double kmax = cfg.k_max();

  const auto& slab = cfg.deformation.slab;
  require(slab.phi0 > 0.0 && slab.phi0 <= 1.0, "deformation.phi0: phi out of (0,1]");
  require(slab.axis >= 0 && slab.axis <= 3, "deformation.axis must be 0..3");
  require(std::isfinite(slab.k_axis) && std::abs(slab.k_axis) <= kmax,
          "deformation.k: |k| = " + std::to_string(std::abs(slab.k_axis)) +
              " exceeds k_max = " + std::to_string(kmax));

  switch (cfg.scenario) {
    case Scenario::dispersion:
      require(cfg.dispersion.samples >= 1, "dispersion.samples must be >= 1");
      require(cfg.dispersion.p_max_over_m >= 0.0, "dispersion.p_max_over_m must be >= 0");
      check_k(cfg.dispersion.k, kmax, "dispersion.k");
      break;
    case Scenario::junction:
      require(cfg.junction.axis >= 0 && cfg.junction.axis <= 3, "junction.axis must be 0..3");
      require(cfg.junction.samples_per_axis >= 1, "junction.samples_per_axis must be >= 1");
      require(cfg.junction.half_extent >= 0.0, "junction.half_extent must be >= 0");
      break;
    case Scenario::gordon_fit:
      require(cfg.gordon.beta > 0.0, "gordon.beta must be positive");
      break;
    case Scenario::sigma: {
      const auto& s = cfg.sigma;
      require(s.components >= 1, "sigma.components must be >= 1");
      require(s.sites >= 5, "sigma.sites must be >= 5");
      require(s.h > 0.0, "sigma.h must be positive");
      require(s.steps >= 1, "sigma.steps must be >= 1");
      require(!s.dt || (*s.dt > 0.0 && *s.dt <= 0.5 * s.h),
              "sigma.dt must satisfy 0 < dt <= h/2 = " + std::to_string(0.5 * s.h));
      require(s.eps_chart > 0.0 && s.eps_chart < 1.0, "sigma.eps_chart must be in (0,1)");
      require(s.amplitude * s.amplitude < 1.0 - s.eps_chart, "sigma.amplitude leaves the chart");
      check_k(s.k, kmax, "sigma.k");
      break;
    }
    case Scenario::cech:
      require(!cfg.cech.nerve.empty(), "cech.nerve is required");
      if (cfg.cech.action == CechAction::diff) {
        require(!cfg.cech.cocycle_a.empty() && !cfg.cech.cocycle_b.empty(),
                "cech.cocycle_a and cech.cocycle_b are required for diff");
      }
      if (cfg.cech.action == CechAction::glue) require(!cfg.cech.deformation.empty(), "cech.deformation is required for glue");
      break;
    case Scenario::hausdorff:
      require(!cfg.hausdorff.set.empty(), "hausdorff.set is required");
      require(cfg.hausdorff.s >= 0.0, "hausdorff.s must be >= 0");
      require(cfg.hausdorff.delta_min > 0.0, "hausdorff.delta_min must be positive");
      require(cfg.hausdorff.levels >= 1, "hausdorff.levels must be >= 1");
      break;
    case Scenario::evolve:
      check_k(cfg.evolve.k, kmax, "evolve.k");
      require(cfg.evolve.k[0] == 0.0, "evolve.k: damping needs k_0 = 0");
      require(cfg.evolve.t_max >= 0.0, "evolve.t_max must be >= 0");
      require(cfg.evolve.samples >= 2, "evolve.samples must be >= 2");
      break;
  }
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  std::map<std::string, int> lines;
  RunConfig cfg = from_yaml(root, base_dir, &lines);
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    // Validation messages start with the dotted key; attach its line when known.
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    const auto it = colon == std::string::npos ? lines.end() : lines.find(msg.substr(0, colon));
    if (it != lines.end()) throw ConfigError("line " + std::to_string(it->second) + ": key '" + msg.substr(0, colon) + "'" + msg.substr(colon));
    throw;
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {
nlohmann::json vec(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["scenario"] = to_string(c.scenario);
  j["seed"] = c.seed;
  j["physics"] = {{"m", c.physics.m},
                  {"mass_ratio_nm", c.physics.mass_ratio_nm},
                  {"inv_alpha", c.physics.inv_alpha},
                  {"mu_ratio", c.physics.mu_ratio}};
  const auto& s = c.deformation.slab;
  j["deformation"] = {{"axis", s.axis},           {"sigma1_end", s.sigma1_end},
                      {"sigma2_end", s.sigma2_end}, {"blend_width", s.blend_width},
                      {"phi0", s.phi0},           {"k", s.k_axis},
                      {"theta_slope", s.theta_slope}, {"k_max_over_m", c.deformation.k_max_over_m}};
  switch (c.scenario) {
    case Scenario::dispersion:
      j["dispersion"] = {{"p_max_over_m", c.dispersion.p_max_over_m},
                         {"samples", c.dispersion.samples},
                         {"k", vec(c.dispersion.k)}};
      break;
    case Scenario::junction:
      j["junction"] = {{"axis", c.junction.axis},
                       {"offset", c.junction.offset ? json(*c.junction.offset) : json(nullptr)},
                       {"samples_per_axis", c.junction.samples_per_axis},
                       {"half_extent", c.junction.half_extent},
                       {"p", vec(c.junction.p)},
                       {"branch", c.junction.branch == Branch::positive ? "positive" : "negative"}};
      break;
    case Scenario::gordon_fit:
      j["gordon"] = {{"beta_mode", c.gordon.beta_mode == BetaMode::free ? "free" : "self_consistent"},
                     {"beta", c.gordon.beta}};
      break;
    case Scenario::sigma:
      j["sigma"] = {{"components", c.sigma.components},
                    {"sites", c.sigma.sites},
                    {"h", c.sigma.h},
                    {"dt", c.sigma.dt ? *c.sigma.dt : 0.5 * c.sigma.h},
                    {"steps", c.sigma.steps},
                    {"k", vec(c.sigma.k)},
                    {"preset", to_string(c.sigma.preset)},
                    {"amplitude", c.sigma.amplitude},
                    {"mode", c.sigma.mode},
                    {"eps_chart", c.sigma.eps_chart}};
      break;
    case Scenario::cech: {
      const char* action = c.cech.action == CechAction::h1 ? "h1" : c.cech.action == CechAction::diff ? "diff" : "glue";
      j["cech"] = {{"nerve", c.cech.nerve.string()},
                   {"action", action},
                   {"cocycle_a", c.cech.cocycle_a.string()},
                   {"cocycle_b", c.cech.cocycle_b.string()},
                   {"deformation", c.cech.deformation.string()},
                   {"functional", c.cech.functional == GluingFunctional::square ? "square" : "identity"}};
      break;
    }
    case Scenario::hausdorff:
      j["hausdorff"] = {{"set", c.hausdorff.set.string()},
                        {"s", c.hausdorff.s},
                        {"delta_min", c.hausdorff.delta_min},
                        {"levels", c.hausdorff.levels}};
      break;
    case Scenario::evolve:
      j["evolve"] = {{"p", vec(c.evolve.p)}, {"k", vec(c.evolve.k)}, {"t_max", c.evolve.t_max},
                     {"samples", c.evolve.samples}};
      break;
  }
  return j;
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("EXOSPIN_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

}  // namespace exospin::app
