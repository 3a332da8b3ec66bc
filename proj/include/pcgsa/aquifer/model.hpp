#pragma once

// The layered cross-section as a black box: 78 parameters -> mean life
// expectancy (years) over the target zone.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/aquifer/finite_volume.hpp"
#include "pcgsa/aquifer/flow.hpp"
#include "pcgsa/aquifer/grid.hpp"
#include "pcgsa/aquifer/mle.hpp"
#include "pcgsa/aquifer/section.hpp"
#include "pcgsa/aquifer/tensors.hpp"
#include "pcgsa/error.hpp"
#include "pcgsa/probability.hpp"

namespace pcgsa::aquifer {

/// Properties of one layer in physical units.
struct LayerParameters {
  double phi = 0.0;
  double anisotropy_k = 0.0;  // Kz / Kx
  double angle = 0.0;         // degrees
  double alpha_l = 0.0;       // m
  double anisotropy_alpha = 0.0;  // alpha_T / alpha_L
};

/// Flat parameter layout: five property blocks over all layers (in section
/// order), then one head gradient per zone.
inline constexpr const char* kPropertyPrefixes[] = {"phi", "A_K", "theta", "alpha_L", "A_alpha"};
inline constexpr std::size_t kProperties = 5;

inline std::vector<std::string> parameter_names(const Section& s) {
  std::vector<std::string> names;
  for (const char* prefix : kPropertyPrefixes)
    for (const auto& l : s.layers) names.push_back(std::string(prefix) + "_" + l.name);
  for (std::size_t z = 0; z < s.zones.size(); ++z) names.push_back("gradH_" + std::to_string(z + 1));
  return names;
}

inline std::size_t parameter_count(const Section& s) { return kProperties * s.layers.size() + s.zones.size(); }

/// Uniform marginals over the admissible ranges.
inline RandomVector parameter_distribution(const Section& s) {
  const auto names = parameter_names(s);
  std::vector<NamedMarginal> m;
  std::size_t k = 0;
  for (const auto& l : s.layers) m.push_back({names[k++], MarginalDistribution::uniform(l.phi_min, l.phi_max)});
  const Range shared[] = {s.anisotropy_k_range, s.angle_range, s.alpha_l_range, s.anisotropy_alpha_range};
  for (const auto& r : shared)
    for (std::size_t l = 0; l < s.layers.size(); ++l)
      m.push_back({names[k++], MarginalDistribution::uniform(r.lo, r.hi)});
  for (const auto& z : s.zones)
    m.push_back({names[k++], MarginalDistribution::uniform(z.gradient_min, z.gradient_max)});
  return RandomVector(std::move(m));
}

inline Eigen::VectorXd nominal_parameters(const Section& s) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(parameter_count(s)));
  const std::size_t nl = s.layers.size();
  for (std::size_t l = 0; l < nl; ++l) {
    const auto k = static_cast<Eigen::Index>(l);
    const auto stride = static_cast<Eigen::Index>(nl);
    p(k) = s.layers[l].phi_nominal;
    p(k + stride) = s.anisotropy_k_nominal;
    p(k + 2 * stride) = s.angle_nominal;
    p(k + 3 * stride) = s.alpha_l_nominal;
    p(k + 4 * stride) = s.anisotropy_alpha_nominal;
  }
  for (std::size_t z = 0; z < s.zones.size(); ++z)
    p(static_cast<Eigen::Index>(kProperties * nl + z)) = s.zones[z].gradient;
  return p;
}

struct OutflowBudget {
  std::map<std::string, double> segment_outflow;  // m^2/s per unit depth
  std::map<std::string, double> group_outflow;
  std::map<std::string, double> group_fraction;
  double total_in = 0.0;
  double total_out = 0.0;
  double balance_error() const { return total_in > 0.0 ? std::abs(total_in - total_out) / total_in : 0.0; }
};

struct Evaluation {
  FlowField flow;
  MleField mle;
  Eigen::VectorXd life_years;  // per cell
  double response_years = 0.0;
  OutflowBudget budget;
};

class CrossSectionModel {
public:
  /// refinement r multiplies the number of columns and of rows per layer by r.
  explicit CrossSectionModel(Section section = default_section(), unsigned refinement = 1)
      : section_(std::move(section)), refinement_(refinement) {
    section_.validate();
    require(refinement_ >= 1, "grid refinement must be >= 1");
    build_grid();
    build_boundaries();
  }

  const Section& section() const { return section_; }
  const Grid& grid() const { return grid_; }
  unsigned refinement() const { return refinement_; }
  std::size_t layer_of_cell(std::size_t c) const { return cell_layer_[c / grid_.nx()]; }
  const std::vector<std::size_t>& target_cells() const { return target_cells_; }
  std::size_t parameter_count() const { return aquifer::parameter_count(section_); }
  std::vector<std::string> parameter_names() const { return aquifer::parameter_names(section_); }
  RandomVector parameter_distribution() const { return aquifer::parameter_distribution(section_); }
  Eigen::VectorXd nominal_parameters() const { return aquifer::nominal_parameters(section_); }

  LayerParameters layer_parameters(const Eigen::VectorXd& p, std::size_t layer) const {
    const auto nl = static_cast<Eigen::Index>(section_.layers.size());
    const auto l = static_cast<Eigen::Index>(layer);
    return {p(l), p(l + nl), p(l + 2 * nl), p(l + 3 * nl), p(l + 4 * nl)};
  }

  /// Rejects vectors of the wrong size or with entries outside their ranges.
  void check(const Eigen::VectorXd& p) const {
    require(static_cast<std::size_t>(p.size()) == parameter_count(),
            "parameter vector must have " + std::to_string(parameter_count()) + " entries");
    const RandomVector rv = parameter_distribution();
    for (std::size_t k = 0; k < rv.size(); ++k) {
      const double v = p(static_cast<Eigen::Index>(k));
      const auto& m = rv[k].marginal;
      const double slack = 1e-12 * std::max(std::abs(m.first()), std::abs(m.second()));
      if (!(v >= m.first() - slack && v <= m.second() + slack))
        throw InvalidArgument("parameter " + rv[k].name + " = " + std::to_string(v) + " outside [" +
                              std::to_string(m.first()) + ", " + std::to_string(m.second()) + "]");
    }
  }

  /// Boundary conditions for the given zone gradients.
  BoundaryConditions boundary_conditions(const Eigen::VectorXd& p) const {
    BoundaryConditions bc = BoundaryConditions::closed(grid_);
    const std::size_t base = kProperties * section_.layers.size();
    for (const auto& [seg_index, face] : segment_faces_) {
      const auto& seg = section_.segments[seg_index];
      const double g = p(static_cast<Eigen::Index>(base + seg.zone));
      switch (seg.side) {
        case Side::left: bc.left[face].value = section_.head(seg.zone, grid_.xe.front(), g); break;
        case Side::right: bc.right[face].value = section_.head(seg.zone, grid_.xe.back(), g); break;
        case Side::top: bc.top[face].value = section_.head(seg.zone, grid_.xc(face), g); break;
      }
    }
    return bc;
  }

  TensorField conductivity(const Eigen::VectorXd& p) const {
    TensorField k(grid_.cells());
    std::vector<Eigen::Matrix2d> per_layer;
    for (std::size_t l = 0; l < section_.layers.size(); ++l) {
      const auto lp = layer_parameters(p, l);
      const double kx = petrofacies_kx(section_.layers[l], lp.phi);
      per_layer.push_back(rotate_tensor(kx, lp.anisotropy_k * kx, lp.angle));
    }
    for (std::size_t c = 0; c < grid_.cells(); ++c) {
      const auto& t = per_layer[layer_of_cell(c)];
      k.xx[c] = t(0, 0);
      k.xz[c] = t(0, 1);
      k.zz[c] = t(1, 1);
    }
    return k;
  }

  TransportProperties transport(const Eigen::VectorXd& p) const {
    TransportProperties tp;
    tp.molecular_diffusion = section_.molecular_diffusion;
    for (std::size_t c = 0; c < grid_.cells(); ++c) {
      const auto lp = layer_parameters(p, layer_of_cell(c));
      tp.porosity.push_back(lp.phi);
      tp.alpha_l.push_back(lp.alpha_l);
      tp.alpha_t.push_back(lp.anisotropy_alpha * lp.alpha_l);
    }
    return tp;
  }

  FlowField solve_flow(const Eigen::VectorXd& p) const {
    check(p);
    return aquifer::solve_flow(grid_, conductivity(p), boundary_conditions(p));
  }

  OutflowBudget outflow_budget(const FlowField& flow) const {
    OutflowBudget b;
    const BoundaryFluxes bf = boundary_fluxes(grid_, flow.face_flux);
    for (const auto* side : {&bf.left, &bf.right, &bf.bottom, &bf.top})
      for (double v : *side) (v > 0.0 ? b.total_out : b.total_in) += std::abs(v);
    for (const auto& s : section_.segments) {
      b.segment_outflow[s.name] = 0.0;
      b.group_outflow[s.group] = 0.0;
    }
    for (const auto& [seg_index, face] : segment_faces_) {
      const auto& seg = section_.segments[seg_index];
      const double v = seg.side == Side::left ? bf.left[face] : seg.side == Side::right ? bf.right[face] : bf.top[face];
      if (v <= 0.0) continue;
      b.segment_outflow[seg.name] += v;
      b.group_outflow[seg.group] += v;
    }
    for (const auto& [g, v] : b.group_outflow) b.group_fraction[g] = b.total_out > 0.0 ? v / b.total_out : 0.0;
    return b;
  }

  MleField solve_mle(const Eigen::VectorXd& p, const FlowField& flow) const {
    check(p);
    return aquifer::solve_mle(grid_, flow.face_flux, transport(p), PrescribedFaces::from(boundary_conditions(p)));
  }

  /// Unweighted mean over cells whose centres lie in the target zone.
  double response_at_tz(const Eigen::VectorXd& life_years) const {
    double s = 0.0;
    for (auto c : target_cells_) s += life_years(static_cast<Eigen::Index>(c));
    return s / static_cast<double>(target_cells_.size());
  }

  Evaluation run(const Eigen::VectorXd& p) const {
    Evaluation e;
    e.flow = solve_flow(p);
    e.budget = outflow_budget(e.flow);
    e.mle = solve_mle(p, e.flow);
    e.life_years = e.mle.seconds / section_.seconds_per_year;
    e.response_years = response_at_tz(e.life_years);
    return e;
  }

  /// Target-zone mean life expectancy in years.
  double evaluate(const Eigen::VectorXd& p) const { return run(p).response_years; }

private:
  void build_grid() {
    const auto nx = static_cast<std::size_t>(std::llround(section_.length / section_.cell_dx)) * refinement_;
    require(nx >= 1, "section: cell width larger than the domain");
    std::vector<double> xe(nx + 1);
    for (std::size_t k = 0; k <= nx; ++k) xe[k] = section_.length * static_cast<double>(k) / static_cast<double>(nx);
    xe.back() = section_.length;
    std::vector<double> ze{0.0};
    for (auto it = section_.layers.rbegin(); it != section_.layers.rend(); ++it) {
      const auto rows =
          static_cast<std::size_t>(std::ceil(it->thickness() / section_.cell_dz - 1e-9)) * refinement_;
      for (std::size_t r = 1; r <= rows; ++r) {
        ze.push_back(it->bottom + it->thickness() * static_cast<double>(r) / static_cast<double>(rows));
        cell_layer_.push_back(static_cast<std::size_t>(std::distance(it, section_.layers.rend()) - 1));
      }
      ze.back() = it->top;
    }
    grid_ = Grid(std::move(xe), std::move(ze));
    for (std::size_t j = 0; j < grid_.nz(); ++j)
      for (std::size_t i = 0; i < grid_.nx(); ++i)
        if (section_.target_zone.contains(grid_.xc(i), grid_.zc(j))) target_cells_.push_back(grid_.id(i, j));
    require(!target_cells_.empty(), "target zone contains no cell centre");
  }

  void build_boundaries() {
    for (std::size_t s = 0; s < section_.segments.size(); ++s) {
      const auto& seg = section_.segments[s];
      if (seg.side == Side::top) {
        for (std::size_t i = 0; i < grid_.nx(); ++i)
          if (grid_.xc(i) >= seg.from && grid_.xc(i) <= seg.to) segment_faces_.emplace_back(s, i);
      } else {
        for (std::size_t j = 0; j < grid_.nz(); ++j)
          if (grid_.zc(j) >= seg.from && grid_.zc(j) <= seg.to) segment_faces_.emplace_back(s, j);
      }
    }
  }

  Section section_;
  unsigned refinement_;
  Grid grid_;
  std::vector<std::size_t> cell_layer_;  // per row
  std::vector<std::size_t> target_cells_;
  std::vector<std::pair<std::size_t, std::size_t>> segment_faces_;  // (segment, face index along its side)
};

}  // namespace pcgsa::aquifer
