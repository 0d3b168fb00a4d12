#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "atomloc/common.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

struct GridSpec {
  int log2_points = 14;
  double padding = 4.0;
};

/// Everything a run needs, resolved to internal phase units.
struct RunConfig {
  InteractionConfig interaction;
  WavepacketSpec wavepacket;
  GridSpec grid;
  std::optional<PhysicalRegime> regime;
};

namespace detail {

using njson = nlohmann::json;

inline void reject_unknown(const njson& j, std::initializer_list<const char*> allowed,
                           const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw config_error("unknown key \"" + path + it.key() + "\"");
  }
}

inline double get_number(const njson& j, const std::string& path) {
  if (!j.is_number()) throw config_error("\"" + path + "\" must be a number");
  return j.get<double>();
}

inline cplx get_complex(const njson& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw config_error("\"" + path + "\" must be a number or an [re, im] pair");
}

/// Reads a length-like parameter given either directly in phase units or as a
/// position in units of the wavelength, converted under the convention.
/// Supplying both spellings (or mixing unit systems across fields) is an error.
struct UnitReader {
  const njson& j;
  std::string path;
  double scale;  // phase per x/lambda
  int phase_keys = 0, lambda_keys = 0;

  std::optional<double> read(const char* phase_key, const char* lambda_key) {
    const bool hp = j.contains(phase_key), hl = j.contains(lambda_key);
    if (hp && hl)
      throw config_error("\"" + path + phase_key + "\" and \"" + path + lambda_key +
                         "\" are alternatives; give one");
    if (hp) {
      ++phase_keys;
      return get_number(j.at(phase_key), path + phase_key);
    }
    if (hl) {
      ++lambda_keys;
      return scale * get_number(j.at(lambda_key), path + lambda_key);
    }
    return std::nullopt;
  }

  void check_consistent() const {
    if (phase_keys > 0 && lambda_keys > 0)
      throw config_error("\"" + path + "\" mixes phase-unit and x-over-lambda keys");
  }
};

inline InteractionConfig parse_interaction(const njson& j) {
  reject_unknown(j, {"g_tau", "alpha", "theta", "chi0", "c_a", "c_b", "ramsey_on"},
                 "interaction.");
  InteractionConfig cfg;
  if (j.contains("g_tau")) cfg.g_tau = get_number(j.at("g_tau"), "interaction.g_tau");
  if (j.contains("alpha")) cfg.alpha = get_number(j.at("alpha"), "interaction.alpha");
  if (j.contains("theta")) cfg.theta = get_number(j.at("theta"), "interaction.theta");
  if (j.contains("chi0")) cfg.chi0 = get_number(j.at("chi0"), "interaction.chi0");
  if (j.contains("c_a") != j.contains("c_b"))
    throw config_error("interaction.c_a and interaction.c_b must be given together");
  if (j.contains("c_a")) {
    cfg.c_a = get_complex(j.at("c_a"), "interaction.c_a");
    cfg.c_b = get_complex(j.at("c_b"), "interaction.c_b");
  }
  if (j.contains("ramsey_on")) {
    if (!j.at("ramsey_on").is_boolean())
      throw config_error("\"interaction.ramsey_on\" must be a boolean");
    cfg.ramsey_on = j.at("ramsey_on").get<bool>();
  }
  cfg.validate();
  return cfg;
}

inline WavepacketSpec parse_wavepacket(const njson& j, Convention conv) {
  if (!j.contains("type") || !j.at("type").is_string())
    throw config_error("\"wavepacket.type\" must be one of flat_top, gaussian, tabulated");
  const std::string type = j.at("type").get<std::string>();
  const double scale = phase_per_x_over_lambda(conv);
  WavepacketSpec spec;

  if (type == "flat_top") {
    reject_unknown(j, {"type", "half_width", "half_width_x_over_lambda"}, "wavepacket.");
    UnitReader r{j, "wavepacket.", scale};
    FlatTopSpec ft;
    if (auto v = r.read("half_width", "half_width_x_over_lambda")) ft.half_width = *v;
    spec.shape = ft;
  } else if (type == "gaussian") {
    reject_unknown(j,
                   {"type", "center", "sigma", "center_x_over_lambda", "sigma_x_over_lambda"},
                   "wavepacket.");
    UnitReader r{j, "wavepacket.", scale};
    GaussianSpec gs;
    if (auto v = r.read("center", "center_x_over_lambda")) gs.center = *v;
    if (auto v = r.read("sigma", "sigma_x_over_lambda")) gs.sigma = *v;
    r.check_consistent();
    spec.shape = gs;
  } else if (type == "tabulated") {
    reject_unknown(j, {"type", "phi", "amp"}, "wavepacket.");
    if (!j.contains("phi") || !j.contains("amp") || !j.at("phi").is_array() ||
        !j.at("amp").is_array())
      throw config_error("tabulated wavepacket needs \"phi\" and \"amp\" arrays");
    TabulatedSpec tb;
    for (const auto& v : j.at("phi")) tb.phi.push_back(get_number(v, "wavepacket.phi[]"));
    for (const auto& v : j.at("amp")) tb.amp.push_back(get_complex(v, "wavepacket.amp[]"));
    spec.shape = tb;
  } else {
    throw config_error("\"wavepacket.type\" must be one of flat_top, gaussian, tabulated");
  }
  spec.validate();
  return spec;
}

inline GridSpec parse_grid(const njson& j) {
  reject_unknown(j, {"log2_points", "padding"}, "grid.");
  GridSpec gs;
  if (j.contains("log2_points")) {
    if (!j.at("log2_points").is_number_integer())
      throw config_error("\"grid.log2_points\" must be an integer");
    gs.log2_points = j.at("log2_points").get<int>();
    if (gs.log2_points < 3 || gs.log2_points > 24)
      throw config_error("\"grid.log2_points\" must lie in [3, 24]");
  }
  if (j.contains("padding")) {
    gs.padding = get_number(j.at("padding"), "grid.padding");
    if (!(gs.padding >= 1.0)) throw config_error("\"grid.padding\" must be >= 1");
  }
  return gs;
}

inline PhysicalRegime parse_regime(const njson& j) {
  reject_unknown(j, {"g_a", "g_b", "delta_a", "delta_b", "gamma_a", "gamma_b", "margin"},
                 "regime.");
  PhysicalRegime r;
  for (const char* k : {"g_a", "g_b", "delta_a", "delta_b", "gamma_a", "gamma_b"})
    if (!j.contains(k)) throw config_error(std::string("\"regime.") + k + "\" is required");
  r.g_a = get_number(j.at("g_a"), "regime.g_a");
  r.g_b = get_number(j.at("g_b"), "regime.g_b");
  r.delta_a = get_number(j.at("delta_a"), "regime.delta_a");
  r.delta_b = get_number(j.at("delta_b"), "regime.delta_b");
  r.gamma_a = get_number(j.at("gamma_a"), "regime.gamma_a");
  r.gamma_b = get_number(j.at("gamma_b"), "regime.gamma_b");
  if (j.contains("margin")) r.margin = get_number(j.at("margin"), "regime.margin");
  return r;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, Convention conv) {
  if (!j.is_object()) throw config_error("config root must be a JSON object");
  detail::reject_unknown(j, {"interaction", "wavepacket", "grid", "regime"}, "");
  RunConfig rc;
  if (j.contains("interaction")) rc.interaction = detail::parse_interaction(j.at("interaction"));
  if (j.contains("wavepacket")) rc.wavepacket = detail::parse_wavepacket(j.at("wavepacket"), conv);
  if (j.contains("grid")) rc.grid = detail::parse_grid(j.at("grid"));
  if (j.contains("regime")) rc.regime = detail::parse_regime(j.at("regime"));
  return rc;
}

inline RunConfig load_config(const std::string& path, Convention conv) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config parse error in \"" + path + "\": " + e.what());
  }
  return parse_config(j, conv);
}

/// Fully resolved snapshot in internal phase units; round-trips through
/// parse_config under either convention. Key order is alphabetical, so
/// serialization is deterministic.
inline nlohmann::json resolved_config(const RunConfig& rc) {
  nlohmann::json j;
  j["interaction"] = {
      {"g_tau", rc.interaction.g_tau},
      {"alpha", rc.interaction.alpha},
      {"theta", rc.interaction.theta},
      {"chi0", rc.interaction.chi0},
      {"c_a", {rc.interaction.c_a.real(), rc.interaction.c_a.imag()}},
      {"c_b", {rc.interaction.c_b.real(), rc.interaction.c_b.imag()}},
      {"ramsey_on", rc.interaction.ramsey_on},
  };
  if (const auto* ft = std::get_if<FlatTopSpec>(&rc.wavepacket.shape)) {
    j["wavepacket"] = {{"type", "flat_top"}, {"half_width", ft->half_width}};
  } else if (const auto* gs = std::get_if<GaussianSpec>(&rc.wavepacket.shape)) {
    j["wavepacket"] = {{"type", "gaussian"}, {"center", gs->center}, {"sigma", gs->sigma}};
  } else {
    const auto& tb = std::get<TabulatedSpec>(rc.wavepacket.shape);
    nlohmann::json amp = nlohmann::json::array();
    for (const auto& c : tb.amp) amp.push_back({c.real(), c.imag()});
    j["wavepacket"] = {{"type", "tabulated"}, {"phi", tb.phi}, {"amp", amp}};
  }
  j["grid"] = {{"log2_points", rc.grid.log2_points}, {"padding", rc.grid.padding}};
  if (rc.regime) {
    j["regime"] = {{"g_a", rc.regime->g_a},         {"g_b", rc.regime->g_b},
                   {"delta_a", rc.regime->delta_a}, {"delta_b", rc.regime->delta_b},
                   {"gamma_a", rc.regime->gamma_a}, {"gamma_b", rc.regime->gamma_b},
                   {"margin", rc.regime->margin}};
  }
  return j;
}

}  // namespace atomloc
