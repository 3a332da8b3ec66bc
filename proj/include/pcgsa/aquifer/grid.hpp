#pragma once

// Rectilinear cell-centred grid and boundary-face bookkeeping.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

/// Cells (i, j), i along x, j along z from the bottom; id = j * nx + i.
struct Grid {
  std::vector<double> xe;  // nx + 1 column edges
  std::vector<double> ze;  // nz + 1 row edges

  Grid() = default;
  Grid(std::vector<double> x_edges, std::vector<double> z_edges) : xe(std::move(x_edges)), ze(std::move(z_edges)) {
    require(xe.size() >= 2 && ze.size() >= 2, "grid needs at least one cell per direction");
    for (std::size_t k = 1; k < xe.size(); ++k) require(xe[k] > xe[k - 1], "grid x edges must increase");
    for (std::size_t k = 1; k < ze.size(); ++k) require(ze[k] > ze[k - 1], "grid z edges must increase");
  }

  static Grid uniform(double length, std::size_t nx, double height, std::size_t nz) {
    std::vector<double> x(nx + 1), z(nz + 1);
    for (std::size_t k = 0; k <= nx; ++k) x[k] = length * static_cast<double>(k) / static_cast<double>(nx);
    for (std::size_t k = 0; k <= nz; ++k) z[k] = height * static_cast<double>(k) / static_cast<double>(nz);
    return Grid(std::move(x), std::move(z));
  }

  std::size_t nx() const { return xe.size() - 1; }
  std::size_t nz() const { return ze.size() - 1; }
  std::size_t cells() const { return nx() * nz(); }
  std::size_t id(std::size_t i, std::size_t j) const { return j * nx() + i; }
  double dx(std::size_t i) const { return xe[i + 1] - xe[i]; }
  double dz(std::size_t j) const { return ze[j + 1] - ze[j]; }
  double xc(std::size_t i) const { return 0.5 * (xe[i] + xe[i + 1]); }
  double zc(std::size_t j) const { return 0.5 * (ze[j] + ze[j + 1]); }
  double area(std::size_t i, std::size_t j) const { return dx(i) * dz(j); }

  // Face numbering: x-normal faces (i in 0..nx, row j) then z-normal faces
  // (column i, j in 0..nz).
  std::size_t x_faces() const { return (nx() + 1) * nz(); }
  std::size_t z_faces() const { return nx() * (nz() + 1); }
  std::size_t xface(std::size_t i, std::size_t j) const { return j * (nx() + 1) + i; }
  std::size_t zface(std::size_t i, std::size_t j) const { return x_faces() + j * nx() + i; }
  std::size_t faces() const { return x_faces() + z_faces(); }
};

/// Condition on one boundary face: no flux, or a prescribed value.
struct FaceCondition {
  std::optional<double> value;
  bool dirichlet() const { return value.has_value(); }
};

/// Conditions on the four sides, each indexed along the side
/// (rows for left/right, columns for bottom/top). Default: no flux.
struct BoundaryConditions {
  std::vector<FaceCondition> left, right, bottom, top;

  static BoundaryConditions closed(const Grid& g) {
    BoundaryConditions bc;
    bc.left.resize(g.nz());
    bc.right.resize(g.nz());
    bc.bottom.resize(g.nx());
    bc.top.resize(g.nx());
    return bc;
  }

  void check(const Grid& g) const {
    require(left.size() == g.nz() && right.size() == g.nz() && bottom.size() == g.nx() && top.size() == g.nx(),
            "boundary conditions do not match the grid");
  }
};

}  // namespace pcgsa::aquifer
