#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

namespace nhkubo::cli {

using tachyon::Approach;

Approach parse_approach(const std::string& name) {
  if (name == "standard") return Approach::Standard;
  if (name == "phqm-j") return Approach::PhqmJ;
  if (name == "phqm-tilde") return Approach::PhqmTilde;
  if (name == "postselected") return Approach::Postselected;
  throw ConfigError("unknown framework '" + name +
                    "' (allowed: standard, phqm-j, phqm-tilde, postselected)");
}

Approach RunConfig::approach() const { return parse_approach(framework); }

bool RunConfig::phqm() const {
  const Approach a = approach();
  return a == Approach::PhqmJ || a == Approach::PhqmTilde;
}

double RunConfig::effective_gamma() const {
  return phqm() && model.gamma == 0.0 ? delta0_value() : model.gamma;
}

Framework RunConfig::greens_framework() const {
  switch (approach()) {
    case Approach::Standard: return Framework::standard(model.gamma);
    case Approach::PhqmJ:
    case Approach::PhqmTilde: return Framework::phqm(effective_gamma());
    case Approach::Postselected: return Framework::postselected();
  }
  return {};
}

void RunConfig::validate(std::initializer_list<const char*> allowed) const {
  (void)approach();
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw ConfigError("temperature must be >= 0");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (!(delta0_value() > 0.0)) throw ConfigError("delta0 must be positive");
  if (!(omega_rel_tol > 0.0 && omega_abs_tol > 0.0 && k_rel_tol > 0.0 && k_abs_tol > 0.0)) {
    throw ConfigError("quadrature tolerances must be positive");
  }
  if (sweep.enabled()) {
    bool ok = false;
    std::string names;
    for (const char* a : allowed) {
      ok = ok || sweep.variable == a;
      names += names.empty() ? a : std::string(", ") + a;
    }
    if (!ok) throw ConfigError("sweep variable '" + sweep.variable + "' not supported here (allowed: " + names + ")");
    if (sweep.points < 2) throw ConfigError("sweep needs points >= 2");
    if (!(sweep.start < sweep.stop)) throw ConfigError("sweep needs start < stop");
  }
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path + " must hold a JSON object");

  static const std::set<std::string> known = {
      "v_F", "Delta", "m", "mu", "gamma", "temperature", "framework", "omega", "k", "sweep", "start", "stop",
      "points", "k_start", "k_stop", "k_points", "out", "format", "delta0", "omega_rel_tol", "omega_abs_tol",
      "k_rel_tol", "k_abs_tol", "workers"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw ConfigError("unknown config field '" + item.key() + "'");
  }

  RunConfig c;
  const auto num = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = field<double>(j, key);
  };
  num("v_F", c.model.v_F);
  num("Delta", c.model.Delta);
  num("m", c.model.m);
  num("mu", c.model.mu);
  num("gamma", c.model.gamma);
  num("temperature", c.temperature);
  num("omega", c.omega);
  num("k", c.k);
  num("start", c.sweep.start);
  num("stop", c.sweep.stop);
  num("k_start", c.k_start);
  num("k_stop", c.k_stop);
  num("omega_rel_tol", c.omega_rel_tol);
  num("omega_abs_tol", c.omega_abs_tol);
  num("k_rel_tol", c.k_rel_tol);
  num("k_abs_tol", c.k_abs_tol);
  if (j.contains("delta0")) c.delta0 = field<double>(j, "delta0");
  if (j.contains("points")) c.sweep.points = field<int>(j, "points");
  if (j.contains("k_points")) c.k_points = field<int>(j, "k_points");
  if (j.contains("workers")) c.workers = field<unsigned>(j, "workers");
  if (j.contains("framework")) c.framework = field<std::string>(j, "framework");
  if (j.contains("sweep")) c.sweep.variable = field<std::string>(j, "sweep");
  if (j.contains("out")) c.out = field<std::string>(j, "out");
  if (j.contains("format")) c.format = field<std::string>(j, "format");
  return c;
}

}  // namespace nhkubo::cli
