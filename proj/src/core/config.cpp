#include "config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace radarcox {

using nlohmann::json;

namespace {

json to_tree(const ExperimentConfig& c) {
  json j;
  j["network"]["type"] = c.network.kind == NetworkModel::Kind::Plcp ? "plcp" : "blcp";
  j["network"]["lambda_l"] = c.network.lambda_l;
  j["network"]["lambda"] = c.network.lambda;
  j["network"]["r_p"] = c.network.r_p;
  j["network"]["n_b"] = c.network.n_b;
  j["network"]["r_g"] = c.network.r_g;
  j["network"]["r_0"] = c.network.r_0;
  j["network"]["r_b"] = c.network.r_b;

  j["radio"]["p_dbm"] = c.radio.p_dbm;
  j["radio"]["sigma_dbsm"] = c.radio.sigma_dbsm;
  j["radio"]["alpha"] = c.radio.alpha;
  j["radio"]["g_t_dbi"] = c.radio.g_t_dbi;
  j["radio"]["g_r_dbi"] = c.radio.g_r_dbi;
  j["radio"]["f_c_hz"] = c.radio.f_c_hz;
  j["radio"]["tx_prob"] = c.radio.tx_prob;

  j["thresholds"]["beta_db"] = c.thresholds.beta_db;
  j["thresholds"]["beta_sf"] = c.thresholds.beta_sf;

  j["geometry"]["beamwidth_deg"] = c.beamwidth_deg;
  j["geometry"]["target_range"] = c.target_range;

  j["analytic"]["own_street_from_target"] = c.own_street_from_target;
  j["analytic"]["blcp_palm_exponent"] = c.blcp_palm_exponent;
  j["analytic"]["percentile_level"] = c.percentile_level;

  j["run"]["seed"] = c.run.seed;
  j["run"]["realizations"] = c.run.realizations;
  j["run"]["rel_tol"] = c.run.rel_tol;
  j["run"]["abs_tol"] = c.run.abs_tol;
  j["run"]["max_depth"] = c.run.max_depth;
  j["run"]["n_moments"] = c.run.n_moments;
  j["run"]["t_grid_size"] = c.run.t_grid_size;
  j["run"]["threads"] = c.run.threads;
  j["run"]["gp_u_max"] = c.run.gp_u_max;
  return j;
}

template <typename T>
void pull(const json& j, const char* section, const char* key, T& out) {
  if (!j.contains(section)) return;
  const json& s = j.at(section);
  if (!s.contains(key)) return;
  try {
    out = s.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key + ": wrong value type");
  }
}

ExperimentConfig from_tree(const json& j) {
  ExperimentConfig c;
  std::string type = "plcp";
  pull(j, "network", "type", type);
  if (type == "plcp")
    c.network.kind = NetworkModel::Kind::Plcp;
  else if (type == "blcp")
    c.network.kind = NetworkModel::Kind::Blcp;
  else
    throw ConfigError("network.type: must be \"plcp\" or \"blcp\"");
  pull(j, "network", "lambda_l", c.network.lambda_l);
  pull(j, "network", "lambda", c.network.lambda);
  pull(j, "network", "r_p", c.network.r_p);
  pull(j, "network", "n_b", c.network.n_b);
  pull(j, "network", "r_g", c.network.r_g);
  pull(j, "network", "r_0", c.network.r_0);
  pull(j, "network", "r_b", c.network.r_b);

  pull(j, "radio", "p_dbm", c.radio.p_dbm);
  pull(j, "radio", "sigma_dbsm", c.radio.sigma_dbsm);
  pull(j, "radio", "alpha", c.radio.alpha);
  pull(j, "radio", "g_t_dbi", c.radio.g_t_dbi);
  pull(j, "radio", "g_r_dbi", c.radio.g_r_dbi);
  pull(j, "radio", "f_c_hz", c.radio.f_c_hz);
  pull(j, "radio", "tx_prob", c.radio.tx_prob);

  pull(j, "thresholds", "beta_db", c.thresholds.beta_db);
  pull(j, "thresholds", "beta_sf", c.thresholds.beta_sf);

  pull(j, "geometry", "beamwidth_deg", c.beamwidth_deg);
  pull(j, "geometry", "target_range", c.target_range);

  pull(j, "analytic", "own_street_from_target", c.own_street_from_target);
  pull(j, "analytic", "blcp_palm_exponent", c.blcp_palm_exponent);
  pull(j, "analytic", "percentile_level", c.percentile_level);

  pull(j, "run", "seed", c.run.seed);
  pull(j, "run", "realizations", c.run.realizations);
  pull(j, "run", "rel_tol", c.run.rel_tol);
  pull(j, "run", "abs_tol", c.run.abs_tol);
  pull(j, "run", "max_depth", c.run.max_depth);
  pull(j, "run", "n_moments", c.run.n_moments);
  pull(j, "run", "t_grid_size", c.run.t_grid_size);
  pull(j, "run", "threads", c.run.threads);
  pull(j, "run", "gp_u_max", c.run.gp_u_max);
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    network.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  try {
    radio.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(thresholds.beta_sf > 0.0) || !(thresholds.beta_sf < 1.0))
    throw ConfigError("thresholds.beta_sf: must be in (0, 1)");
  if (!(beamwidth_deg > 0.0) || !(beamwidth_deg < 180.0))
    throw ConfigError("geometry.beamwidth_deg: full beamwidth must be in (0, 180)");
  if (!(target_range > 0.0)) throw ConfigError("geometry.target_range: must be positive");
  if (run.realizations < 1) throw ConfigError("run.realizations: must be >= 1");
  if (run.n_moments < 1) throw ConfigError("run.n_moments: must be >= 1");
  if (run.t_grid_size < 16) throw ConfigError("run.t_grid_size: must be >= 16");
  if (run.threads < 1) throw ConfigError("run.threads: must be >= 1");
  if (!(run.rel_tol > 0.0) || !(run.abs_tol > 0.0))
    throw ConfigError("run tolerances must be positive");
  if (run.max_depth < 1) throw ConfigError("run.max_depth: must be >= 1");
  if (!(percentile_level > 0.0) || !(percentile_level < 1.0))
    throw ConfigError("analytic.percentile_level: must be in (0, 1)");
}

std::string ExperimentConfig::to_json() const { return to_tree(*this).dump(2) + "\n"; }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_tree(j);
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << to_json();
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= key.size())
    throw ConfigError("--set expects section.key=value, got key \"" + key + "\"");
  json j = to_tree(*this);
  const std::string section = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  if (!j.contains(section) || !j.at(section).contains(field))
    throw ConfigError("unknown config key \"" + key + "\"");
  json& slot = j[section][field];
  if (slot.is_string()) {
    slot = value;
  } else if (slot.is_boolean()) {
    if (value == "true" || value == "1")
      slot = true;
    else if (value == "false" || value == "0")
      slot = false;
    else
      throw ConfigError(key + ": expected boolean, got \"" + value + "\"");
  } else {
    try {
      slot = json::parse(value);
    } catch (const json::exception&) {
      throw ConfigError(key + ": cannot parse \"" + value + "\" as a number");
    }
    if (!slot.is_number()) throw ConfigError(key + ": expected a number");
  }
  *this = from_tree(j);
}

std::string ExperimentConfig::get(const std::string& key) const {
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError("expected section.key, got \"" + key + "\"");
  const json j = to_tree(*this);
  const std::string section = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  if (!j.contains(section) || !j.at(section).contains(field))
    throw ConfigError("unknown config key \"" + key + "\"");
  const json& slot = j.at(section).at(field);
  return slot.is_string() ? slot.get<std::string>() : slot.dump();
}

}  // namespace radarcox
