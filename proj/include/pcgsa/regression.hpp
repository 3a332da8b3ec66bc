#pragma once

// Sparse PCE fitting: hybrid LAR (LAR ranking + OLS refit per path prefix),
// leave-one-out error from the hat matrix, Chapelle's corrected LOO, and degree
// adaptivity by minimum corrected LOO.

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/basis.hpp"
#include "pcgsa/error.hpp"
#include "pcgsa/lar.hpp"
#include "pcgsa/multi_index.hpp"
#include "pcgsa/probability.hpp"
#include "pcgsa/sampling.hpp"

namespace pcgsa {

enum class ResponseScale { original, logarithmic };

inline std::string_view to_string(ResponseScale s) {
  return s == ResponseScale::original ? "original" : "logarithmic";
}

inline constexpr double kLeverageGuard = 1.0 - 1e-10;
inline constexpr double kConditionLimit = 1e12;

struct SparsePce {
  RandomVector inputs;
  MultiIndexSet active;
  Eigen::VectorXd coefficients;  // aligned with `active`, orthonormal-basis convention
  ResponseScale scale = ResponseScale::original;
  unsigned degree = 0;
  double q = 1.0;
  std::size_t candidate_size = 0;
  std::size_t training_size = 0;
  double err_loo = 0.0;
  double err_loo_corrected = 0.0;
  std::optional<double> err_gen;

  double sparsity_index() const {
    return candidate_size == 0 ? 1.0 : static_cast<double>(active.size()) / static_cast<double>(candidate_size);
  }

  /// Surrogate on the fitted scale at physical points (one per row).
  Eigen::VectorXd predict(const Eigen::MatrixXd& points) const {
    const Eigen::MatrixXd u = to_standard_rows(points, inputs);
    return eval_basis_matrix(active, u, inputs.families()) * coefficients;
  }

  /// Surrogate in the model's own units (exp back-transform for log fits).
  Eigen::VectorXd predict_original(const Eigen::MatrixXd& points) const {
    Eigen::VectorXd v = predict(points);
    if (scale == ResponseScale::logarithmic) v = v.array().exp().matrix();
    return v;
  }
};

/// Unbiased (N - 1) sample variance.
inline double empirical_variance(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 0.0;
  return (y.array() - y.mean()).square().sum() / static_cast<double>(y.size() - 1);
}

/// Relative LOO error from a single fit: mean(((y - psi c) / (1 - h))^2) / var(y),
/// h = diag(psi (psi^T psi)^-1 psi^T). Throws when a leverage saturates.
inline double loo_error(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y, const Eigen::VectorXd& coeffs) {
  require(psi.rows() == y.size() && psi.cols() == coeffs.size(), "loo_error: dimension mismatch");
  const Eigen::Index n = psi.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, psi.cols());
  const Eigen::VectorXd h = q.rowwise().squaredNorm();
  const Eigen::VectorXd residual = y - psi * coeffs;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (h(i) >= kLeverageGuard)
      throw NumericalError("loo_error: leverage of point " + std::to_string(i) + " is saturated");
    const double r = residual(i) / (1.0 - h(i));
    acc += r * r;
  }
  const double var = empirical_variance(y);
  if (var <= 0.0) {
    if (acc == 0.0) return 0.0;
    throw NumericalError("loo_error: responses have zero variance");
  }
  return acc / static_cast<double>(n) / var;
}

/// err_loo (1 - card/N)^-1 (1 + tr((psi^T psi)^-1)); both factors are >= 1.
inline double corrected_loo(double err_loo, std::size_t n, std::size_t card, const Eigen::MatrixXd& psi) {
  require(card < n, "corrected_loo: needs card(A) < N");
  require(static_cast<std::size_t>(psi.cols()) == card && static_cast<std::size_t>(psi.rows()) == n,
          "corrected_loo: matrix shape does not match N and card(A)");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(psi.cols()).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(psi.cols(), psi.cols()));
  const double trace = r_inv.squaredNorm();  // tr(R^-1 R^-T) = tr((psi^T psi)^-1)
  return err_loo / (1.0 - static_cast<double>(card) / static_cast<double>(n)) * (1.0 + trace);
}

/// True when `candidate` beats `incumbent` by more than roundoff.
inline bool strictly_better(double candidate, double incumbent) {
  return candidate < incumbent - 1e-9 * incumbent - 1e-13;
}

struct PrefixRecord {
  std::size_t size = 0;  // basis terms including the constant
  double err_loo = 0.0;
  double err_loo_corrected = 0.0;
};

struct HybridResult {
  std::vector<std::size_t> columns;  // selected columns of psi (constant first)
  Eigen::VectorXd coefficients;
  double err_loo = 0.0;
  double err_loo_corrected = 0.0;
  std::vector<PrefixRecord> path;
  std::vector<std::string> notes;
};

/// Hybrid LAR on a precomputed regression matrix. `constant_column` is the
/// zero-index column, always kept. Each LAR prefix is refit by OLS through an
/// incrementally grown QR so leverages, residuals and tr((psi^T psi)^-1) are
/// updated in O(N k) per step.
inline HybridResult hybrid_fit_matrix(const Eigen::MatrixXd& psi, std::size_t constant_column,
                                      const Eigen::VectorXd& y,
                                      std::optional<std::size_t> max_terms = std::nullopt) {
  const Eigen::Index n = psi.rows();
  require(y.size() == n, "hybrid fit: response length does not match the design matrix");
  require(n > 2, "hybrid fit: needs N > 2");
  require(constant_column < static_cast<std::size_t>(psi.cols()), "hybrid fit: bad constant column");

  HybridResult result;
  const double var = empirical_variance(y);
  if (!(var > 0.0) || (y.array() - y.mean()).matrix().norm() <= 1e-13 * y.norm()) {
    const double c0 = psi(0, static_cast<Eigen::Index>(constant_column));
    result.columns = {constant_column};
    result.coefficients = Eigen::VectorXd::Constant(1, y.mean() / c0);
    result.path.push_back({1, 0.0, 0.0});
    return result;
  }

  const LarPath lar = lar_path(psi, y, max_terms);
  std::vector<std::size_t> sequence{constant_column};
  for (auto j : lar.order)
    if (j != constant_column) sequence.push_back(j);
  const auto k_max = static_cast<Eigen::Index>(std::min<std::size_t>(sequence.size(), static_cast<std::size_t>(n)));

  Eigen::MatrixXd q(n, k_max);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(k_max, k_max);
  Eigen::MatrixXd r_inv = Eigen::MatrixXd::Zero(k_max, k_max);
  Eigen::VectorXd qty(k_max);
  Eigen::VectorXd leverage = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd residual = y;
  double r_frob2 = 0.0;
  double r_inv_frob2 = 0.0;

  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_k = 0;
  for (Eigen::Index k = 0; k < k_max; ++k) {
    const Eigen::VectorXd col = psi.col(static_cast<Eigen::Index>(sequence[static_cast<std::size_t>(k)]));
    Eigen::VectorXd v = col;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(k);
    for (int pass = 0; pass < 2; ++pass) {  // Gram-Schmidt with one reorthogonalization
      if (k == 0) break;
      const Eigen::VectorXd c = q.leftCols(k).transpose() * v;
      v -= q.leftCols(k) * c;
      coef += c;
    }
    const double rho = v.norm();
    if (!(rho > 1e-12 * col.norm())) {
      result.notes.push_back("prefix " + std::to_string(k + 1) + " skipped: column numerically dependent");
      break;
    }
    q.col(k) = v / rho;
    r.col(k).head(k) = coef;
    r(k, k) = rho;
    // R^-1 grows by one column: [S, -S r / rho; 0, 1 / rho].
    if (k > 0) r_inv.col(k).head(k) = -(r_inv.topLeftCorner(k, k) * coef) / rho;
    r_inv(k, k) = 1.0 / rho;
    r_frob2 += coef.squaredNorm() + rho * rho;
    r_inv_frob2 += r_inv.col(k).head(k + 1).squaredNorm();
    if (std::sqrt(r_frob2 * r_inv_frob2) > kConditionLimit) {
      result.notes.push_back("prefix " + std::to_string(k + 1) + " skipped: condition estimate above 1e12");
      break;
    }
    qty(k) = q.col(k).dot(y);
    residual -= qty(k) * q.col(k);
    leverage += q.col(k).cwiseAbs2();

    const auto card = static_cast<std::size_t>(k + 1);
    if (card >= static_cast<std::size_t>(n)) break;
    if (leverage.maxCoeff() >= kLeverageGuard) {
      result.notes.push_back("prefix " + std::to_string(card) + " skipped: saturated leverage");
      break;  // leverages only grow along the path
    }
    const double loo = (residual.array() / (1.0 - leverage.array())).square().mean() / var;
    const double factor = (1.0 + r_inv_frob2) / (1.0 - static_cast<double>(card) / static_cast<double>(n));
    const double corrected = loo * factor;
    result.path.push_back({card, loo, corrected});
    if (best_k == 0 || strictly_better(corrected, best)) {
      best = corrected;
      best_k = k + 1;
      result.err_loo = loo;
      result.err_loo_corrected = corrected;
    }
  }
  if (best_k == 0) throw NumericalError("hybrid fit: no admissible prefix on the LAR path");

  result.columns.assign(sequence.begin(), sequence.begin() + best_k);
  result.coefficients =
      r.topLeftCorner(best_k, best_k).triangularView<Eigen::Upper>().solve(qty.head(best_k));
  return result;
}

struct FitOptions {
  double q = 1.0;
  unsigned p_min = 1;
  unsigned p_max = 5;
  ResponseScale scale = ResponseScale::original;
  bool early_stop = true;
  unsigned patience = 3;  // consecutive non-improving degrees before stopping
  std::optional<std::size_t> max_terms;
};

namespace detail {

inline Eigen::VectorXd fit_scale_responses(const Eigen::VectorXd& y, ResponseScale scale) {
  if (scale == ResponseScale::original) return y;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!(y(i) > 0.0)) throw InvalidArgument("logarithmic scale needs strictly positive responses");
  return y.array().log().matrix();
}

inline SparsePce fit_on_candidate(const MultiIndexSet& candidate, const Eigen::MatrixXd& standard_points,
                                  const Eigen::VectorXd& y_scaled, const RandomVector& rv,
                                  const FitOptions& options) {
  const std::size_t zero = candidate.zero_position();
  require(zero < candidate.size(), "candidate basis must contain the zero index");
  const Eigen::MatrixXd psi = eval_basis_matrix(candidate, standard_points, rv.families());
  const HybridResult h = hybrid_fit_matrix(psi, zero, y_scaled, options.max_terms);

  // Re-express in the graded order of the active set.
  std::vector<MultiIndex> picked;
  for (auto c : h.columns) picked.push_back(candidate[c]);
  MultiIndexSet active(candidate.dimension(), picked, candidate.truncation());
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < h.columns.size(); ++k) {
    const auto& m = candidate[h.columns[k]];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(active.begin(), active.end(), m, graded_less) - active.begin());
    coeffs(static_cast<Eigen::Index>(pos)) = h.coefficients(static_cast<Eigen::Index>(k));
  }
  SparsePce pce{rv, std::move(active), std::move(coeffs)};
  pce.scale = options.scale;
  pce.degree = candidate.truncation().p;
  pce.q = candidate.truncation().q;
  pce.candidate_size = candidate.size();
  pce.training_size = static_cast<std::size_t>(y_scaled.size());
  pce.err_loo = h.err_loo;
  pce.err_loo_corrected = h.err_loo_corrected;
  return pce;
}

}  // namespace detail

/// One hybrid-LAR fit on a given candidate basis.
inline SparsePce hybrid_fit(const MultiIndexSet& candidate, const ExperimentalDesign& design,
                            const Eigen::VectorXd& responses, const RandomVector& rv,
                            const FitOptions& options = {}) {
  require(responses.size() == static_cast<Eigen::Index>(design.size()), "responses do not match the design");
  require(design.size() > 2, "hybrid fit needs N > 2");
  require(candidate.dimension() == rv.size(), "candidate basis dimension does not match the inputs");
  const Eigen::MatrixXd u = to_standard_rows(design.points, rv);
  return detail::fit_on_candidate(candidate, u, detail::fit_scale_responses(responses, options.scale), rv,
                                  options);
}

/// Relative generalization error on a validation set, in the model's units.
inline double generalization_error(const SparsePce& pce, const ExperimentalDesign& validation) {
  require(validation.responses.has_value(), "validation design has no responses");
  const Eigen::VectorXd& y = *validation.responses;
  const double var = empirical_variance(y);
  if (!(var > 0.0)) throw InvalidArgument("validation responses have zero variance");
  const Eigen::VectorXd yhat = pce.predict_original(validation.points);
  return (y - yhat).squaredNorm() / static_cast<double>(y.size()) / var;
}

struct DegreeRow {
  unsigned p = 0;
  std::size_t candidate_size = 0;
  std::size_t active_size = 0;
  double err_loo = std::numeric_limits<double>::quiet_NaN();
  double err_loo_corrected = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string message;
};

struct FitDiagnostics {
  std::vector<DegreeRow> rows;
  unsigned selected_p = 0;
};

/// Degree sweep p_min..p_max; keeps the global minimizer of the corrected LOO
/// error (ties to the smaller degree).
inline std::pair<SparsePce, FitDiagnostics> adaptive_fit(const ExperimentalDesign& design,
                                                         const Eigen::VectorXd& responses,
                                                         const RandomVector& rv, const FitOptions& options) {
  require(options.p_min >= 1 && options.p_min <= options.p_max, "degree range must satisfy 1 <= p_min <= p_max");
  require(responses.size() == static_cast<Eigen::Index>(design.size()), "responses do not match the design");
  require(design.size() > 2, "adaptive fit needs N > 2");
  const Eigen::MatrixXd u = to_standard_rows(design.points, rv);
  const Eigen::VectorXd y = detail::fit_scale_responses(responses, options.scale);

  FitDiagnostics diag;
  std::optional<SparsePce> best;
  unsigned stale = 0;
  for (unsigned p = options.p_min; p <= options.p_max; ++p) {
    DegreeRow row;
    row.p = p;
    try {
      const MultiIndexSet candidate = enumerate_hyperbolic(rv.size(), p, options.q);
      row.candidate_size = candidate.size();
      SparsePce pce = detail::fit_on_candidate(candidate, u, y, rv, options);
      row.active_size = pce.active.size();
      row.err_loo = pce.err_loo;
      row.err_loo_corrected = pce.err_loo_corrected;
      row.ok = true;
      if (!best || strictly_better(pce.err_loo_corrected, best->err_loo_corrected)) {
        best = std::move(pce);
        stale = 0;
      } else {
        ++stale;
      }
    } catch (const std::exception& e) {
      row.message = e.what();
      ++stale;
    }
    diag.rows.push_back(row);
    if (options.early_stop && best && stale >= options.patience) break;
  }
  if (!best) throw NumericalError("adaptive fit: every degree failed");
  diag.selected_p = best->degree;
  return {std::move(*best), std::move(diag)};
}

}  // namespace pcgsa
