#pragma once

// Geometry, boundary conditions and layer properties of the layered
// cross-section, plus the porosity -> log10(Kx) petrofacies map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

struct Layer {
  std::string name;
  double bottom = 0.0;  // m
  double top = 0.0;     // m
  double phi_nominal = 0.0;
  double kx_nominal = 0.0;  // m/s
  double phi_min = 0.0;
  double phi_max = 0.0;
  double kx_min = 0.0;
  double kx_max = 0.0;

  double thickness() const { return top - bottom; }
  bool operator==(const Layer&) const = default;
};

/// log10(Kx) piecewise linear in phi through (phi_min, Kx_min), (phi_nom, Kx_nom), (phi_max, Kx_max).
inline double petrofacies_kx(const Layer& layer, double phi) {
  if (!(phi >= layer.phi_min && phi <= layer.phi_max))
    throw InvalidArgument("porosity " + std::to_string(phi) + " outside the range of layer " + layer.name);
  auto lerp = [&](double x0, double k0, double x1, double k1) {
    const double t = x1 == x0 ? 0.0 : (phi - x0) / (x1 - x0);
    return std::pow(10.0, std::log10(k0) + t * (std::log10(k1) - std::log10(k0)));
  };
  if (phi == layer.phi_min) return layer.kx_min;
  if (phi == layer.phi_max) return layer.kx_max;
  if (phi == layer.phi_nominal) return layer.kx_nominal;
  return phi < layer.phi_nominal ? lerp(layer.phi_min, layer.kx_min, layer.phi_nominal, layer.kx_nominal)
                                 : lerp(layer.phi_nominal, layer.kx_nominal, layer.phi_max, layer.kx_max);
}

/// Zone of prescribed heads: H(x) = mean_head + gradient * (x - L/2).
struct HeadZone {
  std::string name;
  double mean_head = 0.0;
  double gradient = 0.0;
  double gradient_min = 0.0;
  double gradient_max = 0.0;
  bool operator==(const HeadZone&) const = default;
};

enum class Side { left, right, top };

struct BoundarySegment {
  std::string name;
  std::string group;  // outflow budget label
  Side side = Side::left;
  double from = 0.0;  // z range for lateral sides, x range for the top
  double to = 0.0;
  std::size_t zone = 0;
  bool operator==(const BoundarySegment&) const = default;
};

struct Rectangle {
  double x0 = 0.0, x1 = 0.0, z0 = 0.0, z1 = 0.0;
  bool contains(double x, double z) const { return x >= x0 && x <= x1 && z >= z0 && z <= z1; }
  bool operator==(const Rectangle&) const = default;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

/// Everything the demo model needs besides the parameter values.
struct Section {
  double length = 25000.0;  // m
  double height = 1040.0;   // m
  double cell_dx = 100.0;   // nominal column width
  double cell_dz = 10.0;    // nominal row height (layers split into ceil(h / dz) equal rows)
  std::vector<Layer> layers;  // top to bottom
  std::vector<HeadZone> zones;
  std::vector<BoundarySegment> segments;
  Rectangle target_zone;
  double molecular_diffusion = 2.3e-9;  // m^2/s
  double seconds_per_year = 3.15576e7;  // Julian year
  // Nominal values and ranges shared by all layers.
  double anisotropy_k_nominal = 0.1;
  double angle_nominal = 0.0;  // degrees
  double alpha_l_nominal = 15.0;
  double anisotropy_alpha_nominal = 0.1;
  Range anisotropy_k_range{0.01, 1.0};
  Range angle_range{-30.0, 30.0};
  Range alpha_l_range{5.0, 25.0};
  Range anisotropy_alpha_range{0.01, 1.0};

  double head(std::size_t zone, double x, double gradient) const {
    return zones.at(zone).mean_head + gradient * (x - 0.5 * length);
  }

  bool operator==(const Section&) const = default;

  void validate() const {
    require(length > 0.0 && height > 0.0 && cell_dx > 0.0 && cell_dz > 0.0, "section: nonpositive extent");
    require(!layers.empty(), "section: no layers");
    require(std::abs(layers.front().top - height) < 1e-9, "section: top layer must reach the top of the domain");
    require(std::abs(layers.back().bottom) < 1e-9, "section: bottom layer must start at z = 0");
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const auto& l = layers[k];
      require(l.thickness() > 0.0, "section: layer " + l.name + " has no thickness");
      if (k + 1 < layers.size())
        require(std::abs(l.bottom - layers[k + 1].top) < 1e-9, "section: layers " + l.name + " and " +
                                                                    layers[k + 1].name + " do not tile");
      require(l.phi_min > 0.0 && l.phi_min < l.phi_max, "section: bad porosity range in " + l.name);
      require(l.phi_nominal >= l.phi_min && l.phi_nominal <= l.phi_max,
              "section: nominal porosity outside range in " + l.name);
      require(l.kx_min > 0.0 && l.kx_min <= l.kx_nominal && l.kx_nominal <= l.kx_max,
              "section: conductivity anchors not monotone in " + l.name);
    }
    for (const auto& s : segments) require(s.zone < zones.size(), "section: segment " + s.name + " has no zone");
    require(target_zone.x0 <= target_zone.x1 && target_zone.z0 <= target_zone.z1, "section: empty target zone");
  }

  /// Index of the layer containing elevation z (layer boundaries go to the upper layer).
  std::size_t layer_at(double z) const {
    for (std::size_t k = 0; k < layers.size(); ++k)
      if (z >= layers[k].bottom) return k;
    return layers.size() - 1;
  }
};

inline Section default_section() {
  Section s;
  // name, bottom, top, phi_nom, kx_nom, phi_min, phi_max, kx_min, kx_max
  s.layers = {
      {"K3", 920, 1040, 0.1000, 9.01e-09, 0.0840, 0.1160, 3.3734e-10, 2.4078e-07},
      {"K1-K2", 760, 920, 0.1150, 4.53e-09, 0.0870, 0.1430, 9.8116e-11, 2.0928e-07},
      {"L2c", 730, 760, 0.1389, 1.10e-06, 0.1019, 0.1759, 3.6186e-08, 2.6212e-06},
      {"L2b", 700, 730, 0.1110, 3.46e-07, 0.0645, 0.1574, 8.7318e-10, 6.3950e-06},
      {"L2a", 660, 700, 0.1139, 1.62e-07, 0.0651, 0.1627, 4.7005e-10, 9.9336e-06},
      {"L1b", 600, 660, 0.1604, 1.49e-05, 0.1375, 0.1833, 3.4324e-09, 2.8913e-04},
      {"L1a", 560, 600, 0.1549, 1.17e-06, 0.0991, 0.2107, 3.1165e-08, 2.1523e-06},
      {"C3ab", 500, 560, 0.0984, 4.59e-08, 0.0747, 0.1221, 7.8488e-09, 1.2945e-06},
      {"C2", 360, 500, 0.1580, 1.99e-13, 0.1284, 0.1876, 5.0349e-14, 6.2570e-13},
      {"C1", 345, 360, 0.0470, 1.89e-06, 0.0142, 0.0799, 1.8184e-07, 1.6195e-05},
      {"D4", 260, 345, 0.0905, 1.65e-05, 0.0237, 0.1573, 1.6408e-07, 3.1521e-03},
      {"D3", 200, 260, 0.1016, 1.76e-06, 0.0237, 0.1795, 1.7470e-07, 4.3539e-06},
      {"D2", 160, 200, 0.0623, 2.62e-07, 0.0185, 0.1061, 6.6071e-08, 1.7049e-06},
      {"D1", 110, 160, 0.0688, 3.23e-06, 0.0191, 0.1186, 6.2552e-08, 1.8425e-05},
      {"T", 0, 110, 0.0810, 1.95e-12, 0.0696, 0.0925, 1.2325e-13, 8.1328e-12},
  };
  s.zones = {
      {"dogger", 285.0, 0.0008, 0.00064, 0.00096},
      {"oxfordian", 267.5, 0.003, 0.0024, 0.0036},
      {"top", 267.5, 0.0034, 0.00272, 0.00408},
  };
  s.segments = {
      {"right_oxfordian", "oxfordian", Side::right, 500, 760, 1},
      {"left_oxfordian", "oxfordian", Side::left, 500, 760, 1},
      {"right_dogger", "dogger", Side::right, 110, 360, 0},
      {"left_dogger", "dogger", Side::left, 110, 360, 0},
      {"top", "top", Side::top, 0, 25000, 2},
  };
  s.target_zone = {18440.0, 21680.0, 425.0, 435.0};
  return s;
}

// JSON mirror of Section -------------------------------------------------

inline std::string to_string(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::top: return "top";
  }
  return "left";
}

inline Side side_from_string(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  if (s == "top") return Side::top;
  throw InvalidArgument("unknown boundary side: " + s);
}

inline nlohmann::json to_json(const Section& s) {
  using nlohmann::json;
  json j;
  j["domain"] = {{"length", s.length}, {"height", s.height}, {"cell_dx", s.cell_dx}, {"cell_dz", s.cell_dz}};
  for (const auto& l : s.layers)
    j["layers"].push_back({{"name", l.name},
                           {"bottom", l.bottom},
                           {"top", l.top},
                           {"phi_nominal", l.phi_nominal},
                           {"kx_nominal", l.kx_nominal},
                           {"phi_min", l.phi_min},
                           {"phi_max", l.phi_max},
                           {"kx_min", l.kx_min},
                           {"kx_max", l.kx_max}});
  for (const auto& z : s.zones)
    j["zones"].push_back({{"name", z.name},
                          {"mean_head", z.mean_head},
                          {"gradient", z.gradient},
                          {"gradient_min", z.gradient_min},
                          {"gradient_max", z.gradient_max}});
  for (const auto& b : s.segments)
    j["segments"].push_back({{"name", b.name},
                             {"group", b.group},
                             {"side", to_string(b.side)},
                             {"from", b.from},
                             {"to", b.to},
                             {"zone", b.zone}});
  j["target_zone"] = {{"x", {s.target_zone.x0, s.target_zone.x1}}, {"z", {s.target_zone.z0, s.target_zone.z1}}};
  j["molecular_diffusion"] = s.molecular_diffusion;
  j["seconds_per_year"] = s.seconds_per_year;
  j["shared"] = {
      {"A_K", {{"nominal", s.anisotropy_k_nominal}, {"range", {s.anisotropy_k_range.lo, s.anisotropy_k_range.hi}}}},
      {"theta", {{"nominal", s.angle_nominal}, {"range", {s.angle_range.lo, s.angle_range.hi}}}},
      {"alpha_L", {{"nominal", s.alpha_l_nominal}, {"range", {s.alpha_l_range.lo, s.alpha_l_range.hi}}}},
      {"A_alpha",
       {{"nominal", s.anisotropy_alpha_nominal},
        {"range", {s.anisotropy_alpha_range.lo, s.anisotropy_alpha_range.hi}}}},
  };
  return j;
}

inline Section section_from_json(const nlohmann::json& j) {
  Section s;
  const auto& d = j.at("domain");
  s.length = d.at("length");
  s.height = d.at("height");
  s.cell_dx = d.at("cell_dx");
  s.cell_dz = d.at("cell_dz");
  for (const auto& l : j.at("layers"))
    s.layers.push_back({l.at("name"), l.at("bottom"), l.at("top"), l.at("phi_nominal"), l.at("kx_nominal"),
                        l.at("phi_min"), l.at("phi_max"), l.at("kx_min"), l.at("kx_max")});
  for (const auto& z : j.at("zones"))
    s.zones.push_back({z.at("name"), z.at("mean_head"), z.at("gradient"), z.at("gradient_min"), z.at("gradient_max")});
  for (const auto& b : j.at("segments"))
    s.segments.push_back({b.at("name"), b.at("group"), side_from_string(b.at("side")), b.at("from"), b.at("to"),
                          b.at("zone")});
  const auto& tz = j.at("target_zone");
  s.target_zone = {tz.at("x").at(0), tz.at("x").at(1), tz.at("z").at(0), tz.at("z").at(1)};
  s.molecular_diffusion = j.at("molecular_diffusion");
  s.seconds_per_year = j.at("seconds_per_year");
  const auto& sh = j.at("shared");
  auto read = [&](const char* key, double& nominal, Range& range) {
    nominal = sh.at(key).at("nominal");
    range = {sh.at(key).at("range").at(0), sh.at(key).at("range").at(1)};
  };
  read("A_K", s.anisotropy_k_nominal, s.anisotropy_k_range);
  read("theta", s.angle_nominal, s.angle_range);
  read("alpha_L", s.alpha_l_nominal, s.alpha_l_range);
  read("A_alpha", s.anisotropy_alpha_nominal, s.anisotropy_alpha_range);
  s.validate();
  return s;
}

inline Section load_section(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open section file " + path);
  nlohmann::json j;
  try {
    in >> j;
    return section_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed section file " + path + ": " + e.what());
  }
}

}  // namespace pcgsa::aquifer
