#pragma once

// Mean lifetime expectancy: with v = -q the reversed flux and A = phi D,
//   div(v E - A grad E) = phi,
// upwinded advection, A from the cell-averaged Darcy flux. On prescribed-head
// faces E = 0 where water leaves the domain (or the flux vanishes); where water
// enters, only the advective flux v E leaves the reversed problem. Other
// boundary faces carry no flux.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/aquifer/finite_volume.hpp"
#include "pcgsa/aquifer/flow.hpp"
#include "pcgsa/aquifer/grid.hpp"
#include "pcgsa/aquifer/tensors.hpp"
#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

struct TransportProperties {
  std::vector<double> porosity;  // per cell
  std::vector<double> alpha_l;   // m
  std::vector<double> alpha_t;   // m
  double molecular_diffusion = 0.0;  // m^2/s
};

/// Boundary faces with a prescribed head (true) versus no-flow faces.
struct PrescribedFaces {
  std::vector<bool> left, right, bottom, top;

  static PrescribedFaces from(const BoundaryConditions& bc) {
    PrescribedFaces p;
    for (const auto& f : bc.left) p.left.push_back(f.dirichlet());
    for (const auto& f : bc.right) p.right.push_back(f.dirichlet());
    for (const auto& f : bc.bottom) p.bottom.push_back(f.dirichlet());
    for (const auto& f : bc.top) p.top.push_back(f.dirichlet());
    return p;
  }
};

/// Cell-averaged Darcy flux (qx, qz) from the face fluxes.
inline std::vector<Eigen::Vector2d> cell_velocities(const Grid& g, const Eigen::VectorXd& face_flux) {
  std::vector<Eigen::Vector2d> v(g.cells());
  const auto at = [&](std::size_t face) { return face_flux(static_cast<Eigen::Index>(face)); };
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i)
      v[g.id(i, j)] = {0.5 * (at(g.xface(i, j)) + at(g.xface(i + 1, j))),
                       0.5 * (at(g.zface(i, j)) + at(g.zface(i, j + 1)))};
  return v;
}

struct MleField {
  Eigen::VectorXd seconds;  // E per cell (s)
};

inline MleField solve_mle(const Grid& g, const Eigen::VectorXd& face_flux, const TransportProperties& tp,
                          const PrescribedFaces& prescribed, double tolerance = 1e-10) {
  const std::size_t n = g.cells();
  require(tp.porosity.size() == n && tp.alpha_l.size() == n && tp.alpha_t.size() == n,
          "transport properties do not match the grid");
  require(static_cast<std::size_t>(face_flux.size()) == g.faces(), "face fluxes do not match the grid");

  const auto q = cell_velocities(g, face_flux);
  TensorField a(n);
  for (std::size_t c = 0; c < n; ++c) {
    const Eigen::Matrix2d d = dispersion_tensor(q[c], tp.porosity[c], tp.alpha_l[c], tp.alpha_t[c],
                                                tp.molecular_diffusion);
    a.xx[c] = d(0, 0);
    a.xz[c] = d(0, 1);
    a.zz[c] = d(1, 1);
  }

  // Outward physical flux density at a boundary face; E = 0 unless water enters there.
  const auto at = [&](std::size_t face) { return face_flux(static_cast<Eigen::Index>(face)); };
  BoundaryConditions bc = BoundaryConditions::closed(g);
  for (std::size_t j = 0; j < g.nz(); ++j) {
    if (prescribed.left[j] && -at(g.xface(0, j)) >= 0.0) bc.left[j].value = 0.0;
    if (prescribed.right[j] && at(g.xface(g.nx(), j)) >= 0.0) bc.right[j].value = 0.0;
  }
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (prescribed.bottom[i] && -at(g.zface(i, 0)) >= 0.0) bc.bottom[i].value = 0.0;
    if (prescribed.top[i] && at(g.zface(i, g.nz())) >= 0.0) bc.top[i].value = 0.0;
  }

  std::vector<AffineForm> forms = diffusive_face_fluxes(g, a, bc);

  // Advection of E with v = -q, upwinded. Boundary faces: only where v leaves.
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i <= g.nx(); ++i) {
      const std::size_t f = g.xface(i, j);
      const double v = -at(f);
      if (i == 0) {
        if (v < 0.0) forms[f].add(g.id(0, j), v);
      } else if (i == g.nx()) {
        if (v > 0.0) forms[f].add(g.id(g.nx() - 1, j), v);
      } else {
        forms[f].add(v > 0.0 ? g.id(i - 1, j) : g.id(i, j), v);
      }
    }
  for (std::size_t j = 0; j <= g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const std::size_t f = g.zface(i, j);
      const double v = -at(f);
      if (j == 0) {
        if (v < 0.0) forms[f].add(g.id(i, 0), v);
      } else if (j == g.nz()) {
        if (v > 0.0) forms[f].add(g.id(i, g.nz() - 1), v);
      } else {
        forms[f].add(v > 0.0 ? g.id(i, j - 1) : g.id(i, j), v);
      }
    }

  Eigen::VectorXd source(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i)
      source(static_cast<Eigen::Index>(g.id(i, j))) = tp.porosity[g.id(i, j)] * g.area(i, j);

  MleField out;
  out.seconds = solve_balance(g, forms, source, tolerance);
  const double emax = out.seconds.maxCoeff();
  const double emin = out.seconds.minCoeff();
  if (emin < -1e-6 * std::max(emax, 0.0))
    throw NumericalError("negative life expectancy (" + std::to_string(emin) + " s against max " +
                         std::to_string(emax) + " s)");
  return out;
}

}  // namespace pcgsa::aquifer
