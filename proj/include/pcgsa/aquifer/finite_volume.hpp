#pragma once

// Cell-centred finite volumes for div(F) = s with F = -A grad u (+ advection).
// Face fluxes are kept as affine forms in the cell unknowns so that the same
// expressions assemble the matrix and recover fluxes after the solve.
//
// Normal part: two-point flux with harmonic weighting of the half-cell
// conductances. Cross part (A_xz): weighted tangential gradients of the two
// adjacent cells, assembled implicitly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pcgsa/aquifer/grid.hpp"
#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

struct AffineForm {
  std::vector<std::pair<std::size_t, double>> terms;
  double constant = 0.0;

  void add(std::size_t cell, double w) {
    if (w != 0.0) terms.emplace_back(cell, w);
  }
  void add(const AffineForm& other, double s) {
    if (s == 0.0) return;
    for (const auto& [c, w] : other.terms) add(c, s * w);
    constant += s * other.constant;
  }
  double operator()(const Eigen::VectorXd& u) const {
    double v = constant;
    for (const auto& [c, w] : terms) v += w * u(static_cast<Eigen::Index>(c));
    return v;
  }
};

/// Symmetric 2x2 tensor per cell.
struct TensorField {
  std::vector<double> xx, xz, zz;

  explicit TensorField(std::size_t n = 0) : xx(n, 0.0), xz(n, 0.0), zz(n, 0.0) {}
  std::size_t size() const { return xx.size(); }
};

namespace detail {

// Weight of the neighbour value in the face value between two cells with
// half-cell conductances a (own) and b (neighbour).
inline double neighbour_weight(double a, double b) { return a + b > 0.0 ? b / (a + b) : 0.5; }

// Tangential gradient d u / d(axis) in every cell as an affine form. axis 0
// differentiates along x (using A_xx), axis 1 along z (using A_zz). Each side
// contributes the slope from the cell centre to the flux-weighted face value;
// no-flux sides are skipped.
inline std::vector<AffineForm> cell_gradients(const Grid& g, const TensorField& a, const BoundaryConditions& bc,
                                              int axis) {
  std::vector<AffineForm> out(g.cells());
  for (std::size_t j = 0; j < g.nz(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const std::size_t c = g.id(i, j);
      const double h = axis == 0 ? g.dx(i) : g.dz(j);
      const double k = axis == 0 ? a.xx[c] : a.zz[c];
      AffineForm form;
      int sides = 0;
      for (int dir : {-1, 1}) {
        const bool inside = axis == 0 ? (dir < 0 ? i > 0 : i + 1 < g.nx()) : (dir < 0 ? j > 0 : j + 1 < g.nz());
        if (inside) {
          const std::size_t ni = axis == 0 ? static_cast<std::size_t>(static_cast<long>(i) + dir) : i;
          const std::size_t nj = axis == 1 ? static_cast<std::size_t>(static_cast<long>(j) + dir) : j;
          const std::size_t n = g.id(ni, nj);
          const double hn = axis == 0 ? g.dx(ni) : g.dz(nj);
          const double kn = axis == 0 ? a.xx[n] : a.zz[n];
          const double w = neighbour_weight(k / (0.5 * h), kn / (0.5 * hn)) / (0.5 * h) * dir;
          form.add(n, w);
          form.add(c, -w);
          ++sides;
        } else {
          const FaceCondition& f = axis == 0 ? (dir < 0 ? bc.left[j] : bc.right[j])
                                             : (dir < 0 ? bc.bottom[i] : bc.top[i]);
          if (!f.dirichlet()) continue;
          const double w = dir / (0.5 * h);
          form.constant += w * *f.value;
          form.add(c, -w);
          ++sides;
        }
      }
      if (sides > 1) {
        for (auto& t : form.terms) t.second /= sides;
        form.constant /= sides;
      }
      out[c] = std::move(form);
    }
  }
  return out;
}

}  // namespace detail

/// Flux density -(A grad u) . e through every face, e = +x for x-normal faces
/// and +z for z-normal faces; face numbering follows Grid.
inline std::vector<AffineForm> diffusive_face_fluxes(const Grid& g, const TensorField& a,
                                                     const BoundaryConditions& bc) {
  bc.check(g);
  require(a.size() == g.cells(), "tensor field does not match the grid");
  const auto gx = detail::cell_gradients(g, a, bc, 0);
  const auto gz = detail::cell_gradients(g, a, bc, 1);
  std::vector<AffineForm> flux(g.faces());

  // x-normal faces: normal component A_xx, tangential coupling A_xz * du/dz.
  for (std::size_t j = 0; j < g.nz(); ++j) {
    for (std::size_t i = 0; i <= g.nx(); ++i) {
      AffineForm& f = flux[g.xface(i, j)];
      if (i == 0 || i == g.nx()) {
        const std::size_t ci = i == 0 ? 0 : g.nx() - 1;
        const std::size_t c = g.id(ci, j);
        const FaceCondition& cond = i == 0 ? bc.left[j] : bc.right[j];
        if (!cond.dirichlet()) continue;
        const double t = a.xx[c] / (0.5 * g.dx(ci));
        const double sign = i == 0 ? 1.0 : -1.0;  // du/dx = sign * (u_c - u_b) / (h/2)
        f.add(c, -t * sign);
        f.constant += t * sign * *cond.value;
        f.add(gz[c], -a.xz[c]);
        continue;
      }
      const std::size_t p = g.id(i - 1, j);
      const std::size_t n = g.id(i, j);
      const double ap = a.xx[p] / (0.5 * g.dx(i - 1));
      const double an = a.xx[n] / (0.5 * g.dx(i));
      const double t = ap + an > 0.0 ? ap * an / (ap + an) : 0.0;
      f.add(n, -t);
      f.add(p, t);
      const double wp = detail::neighbour_weight(ap, an);  // an / (ap + an)
      f.add(gz[p], -wp * a.xz[p]);
      f.add(gz[n], -(1.0 - wp) * a.xz[n]);
    }
  }
  // z-normal faces: normal component A_zz, tangential coupling A_xz * du/dx.
  for (std::size_t j = 0; j <= g.nz(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      AffineForm& f = flux[g.zface(i, j)];
      if (j == 0 || j == g.nz()) {
        const std::size_t cj = j == 0 ? 0 : g.nz() - 1;
        const std::size_t c = g.id(i, cj);
        const FaceCondition& cond = j == 0 ? bc.bottom[i] : bc.top[i];
        if (!cond.dirichlet()) continue;
        const double t = a.zz[c] / (0.5 * g.dz(cj));
        const double sign = j == 0 ? 1.0 : -1.0;
        f.add(c, -t * sign);
        f.constant += t * sign * *cond.value;
        f.add(gx[c], -a.xz[c]);
        continue;
      }
      const std::size_t p = g.id(i, j - 1);
      const std::size_t n = g.id(i, j);
      const double ap = a.zz[p] / (0.5 * g.dz(j - 1));
      const double an = a.zz[n] / (0.5 * g.dz(j));
      const double t = ap + an > 0.0 ? ap * an / (ap + an) : 0.0;
      f.add(n, -t);
      f.add(p, t);
      const double wp = detail::neighbour_weight(ap, an);
      f.add(gx[p], -wp * a.xz[p]);
      f.add(gx[n], -(1.0 - wp) * a.xz[n]);
    }
  }
  return flux;
}

/// Area (per unit depth) of a face.
inline double face_area(const Grid& g, std::size_t face) {
  if (face < g.x_faces()) return g.dz(face / (g.nx() + 1));
  return g.dx((face - g.x_faces()) % g.nx());
}

/// Evaluates every face form at u.
inline Eigen::VectorXd evaluate_faces(const std::vector<AffineForm>& forms, const Eigen::VectorXd& u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(forms.size()));
  for (std::size_t f = 0; f < forms.size(); ++f) v(static_cast<Eigen::Index>(f)) = forms[f](u);
  return v;
}

/// Net outflow of every cell, sum over faces of +-flux * area, given face values.
inline Eigen::VectorXd cell_outflow(const Grid& g, const Eigen::VectorXd& face_flux) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(g.cells()));
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const auto fx = [&](std::size_t f) { return face_flux(static_cast<Eigen::Index>(f)) * g.dz(j); };
      const auto fz = [&](std::size_t f) { return face_flux(static_cast<Eigen::Index>(f)) * g.dx(i); };
      out(static_cast<Eigen::Index>(g.id(i, j))) = fx(g.xface(i + 1, j)) - fx(g.xface(i, j)) +
                                                   fz(g.zface(i, j + 1)) - fz(g.zface(i, j));
    }
  return out;
}

/// Solves sum_faces (+-form * area) = source per cell. Rows are equilibrated
/// before the sparse LU; a few refinement steps push the relative residual
/// below `tolerance`.
inline Eigen::VectorXd solve_balance(const Grid& g, const std::vector<AffineForm>& face_forms,
                                     const Eigen::VectorXd& source, double tolerance = 1e-10) {
  const auto n = static_cast<Eigen::Index>(g.cells());
  require(source.size() == n, "source does not match the grid");
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = source;
  auto add_face = [&](std::size_t cell, std::size_t face, double factor) {
    const AffineForm& f = face_forms[face];
    for (const auto& [c, w] : f.terms)
      triplets.emplace_back(static_cast<Eigen::Index>(cell), static_cast<Eigen::Index>(c), factor * w);
    rhs(static_cast<Eigen::Index>(cell)) -= factor * f.constant;
  };
  triplets.reserve(g.cells() * 16);
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const std::size_t c = g.id(i, j);
      add_face(c, g.xface(i + 1, j), g.dz(j));
      add_face(c, g.xface(i, j), -g.dz(j));
      add_face(c, g.zface(i, j + 1), g.dx(i));
      add_face(c, g.zface(i, j), -g.dx(i));
    }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
      scale(it.row()) = std::max(scale(it.row()), std::abs(it.value()));
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!(scale(r) > 0.0)) throw NumericalError("finite-volume system has an empty row (cell " + std::to_string(r) + ")");
    scale(r) = 1.0 / scale(r);
  }
  const Eigen::SparseMatrix<double> as = scale.asDiagonal() * a;
  const Eigen::VectorXd bs = scale.cwiseProduct(rhs);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(as);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU factorization failed: " + lu.lastErrorMessage());
  const double bnorm = bs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = lu.solve(bs);
  double rel = (bs - as * u).norm() / bnorm;
  for (int it = 0; it < 3 && rel > tolerance; ++it) {
    u += lu.solve(bs - as * u);
    rel = (bs - as * u).norm() / bnorm;
  }
  if (!(rel <= tolerance) || !u.allFinite())
    throw NumericalError("linear solve did not reach the residual tolerance (relative residual " +
                         std::to_string(rel) + ")");
  return u;
}

}  // namespace pcgsa::aquifer
