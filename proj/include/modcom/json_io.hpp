#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modcom/dense.hpp"
#include "modcom/honeycomb.hpp"
#include "modcom/modular.hpp"
#include "modcom/pauli_sum.hpp"

namespace modcom {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Terms as {"string": "Z_-1 Y_0", "re": .., "im": ..}; coefficients refer to
// the Hermitian-letter string, as printed.
inline json to_json(const PauliSum& s) {
  json terms = json::array();
  for (const auto& [p, c] : s.terms()) {
    const cplx h = hermitian_coefficient(p, c);
    terms.push_back({{"string", to_string(p)}, {"re", h.real()}, {"im", h.imag()}});
  }
  return {{"sites", s.universe()->ids()}, {"terms", terms}};
}

inline PauliSum pauli_sum_from_json(const json& j, UniversePtr universe = nullptr) {
  try {
    if (!universe) universe = SiteUniverse::make(j.at("sites").get<std::vector<SiteId>>());
    PauliSum out(universe);
    for (const auto& t : j.at("terms")) {
      const cplx c{t.at("re").get<double>(), t.value("im", 0.0)};
      out += PauliSum::from_text(universe, t.at("string").get<std::string>(), c);
    }
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("pauli sum json: ") + e.what());
  }
}

// {"rows": r, "cols": c, "blue_edges": [[control, target], ...],
//  "region": {"A": [...], "B": [...], "C": [...]}}; blue_edges optional.
inline HoneycombConfig honeycomb_config_from_json(const json& j) {
  try {
    HoneycombConfig cfg;
    cfg.rows = j.at("rows").get<int>();
    cfg.cols = j.at("cols").get<int>();
    if (j.contains("blue_edges")) {
      std::vector<BlueEdge> blue;
      for (const auto& e : j.at("blue_edges")) {
        if (!e.is_array() || e.size() != 2) fail(ErrorCode::ParseError, "blue edge must be [control, target]");
        blue.push_back({e[0].get<SiteId>(), e[1].get<SiteId>()});
      }
      cfg.blue_edges = blue;
    }
    const json& reg = j.at("region");
    cfg.region_a = reg.value("A", std::vector<SiteId>{});
    cfg.region_b = reg.value("B", std::vector<SiteId>{});
    cfg.region_c = reg.value("C", std::vector<SiteId>{});
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("honeycomb config: ") + e.what());
  }
}

inline json to_json(const HoneycombConfig& cfg) {
  json j{{"rows", cfg.rows}, {"cols", cfg.cols}};
  if (cfg.blue_edges) {
    json blue = json::array();
    for (const auto& e : *cfg.blue_edges) blue.push_back({e.control, e.target});
    j["blue_edges"] = blue;
  }
  j["region"] = {{"A", cfg.region_a}, {"B", cfg.region_b}, {"C", cfg.region_c}};
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

// 4x4 complex matrix: [[[re, im], ...] x4] or [[re, ...] x4] for real input.
inline Eigen::Matrix4cd matrix4_from_json(const json& j) {
  try {
    const json& rows = j.is_object() ? j.at("matrix") : j;
    if (!rows.is_array() || rows.size() != 4) fail(ErrorCode::ParseError, "gate matrix must have 4 rows");
    Eigen::Matrix4cd u;
    for (int r = 0; r < 4; ++r) {
      if (!rows[r].is_array() || rows[r].size() != 4) fail(ErrorCode::ParseError, "gate matrix must have 4 columns");
      for (int c = 0; c < 4; ++c) {
        const json& e = rows[r][c];
        u(r, c) = e.is_array() ? cplx{e.at(0).get<double>(), e.at(1).get<double>()} : cplx{e.get<double>(), 0};
      }
    }
    return u;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("gate matrix: ") + e.what());
  }
}

inline json to_json(const ModcomResult& r) {
  json j{{"J", r.value}, {"method", to_string(r.method)}};
  j["epsilon"] = r.epsilon ? json(*r.epsilon) : json(nullptr);
  if (!r.deltas.empty()) j["deltas"] = r.deltas;
  if (r.method == Method::Dense) {
    j["clamped"] = r.clamped;
    j["epsilon_deviation"] = r.epsilon_deviation;
  }
  return j;
}

// Debug dump: one eigenvalue per line, ascending.
inline void write_eigenvalues_csv(std::ostream& os, const HermitianSpectrum& s) {
  os << "index,eigenvalue\n";
  os.precision(17);
  for (Eigen::Index k = 0; k < s.values().size(); ++k) os << k << ',' << s.values()(k) << '\n';
}

}  // namespace modcom
