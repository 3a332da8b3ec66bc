#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"

namespace pcgsa::aquifer {

/// K = R^T diag(kx, kz) R with R = [[c, s], [-s, c]], theta in degrees.
inline Eigen::Matrix2d rotate_tensor(double kx, double kz, double theta_degrees) {
  require(kx > 0.0 && kz > 0.0, "conductivity components must be positive");
  const double t = theta_degrees * std::numbers::pi / 180.0;
  const double c = std::cos(t);
  const double s = std::sin(t);
  Eigen::Matrix2d k;
  k(0, 0) = c * c * kx + s * s * kz;
  k(1, 1) = s * s * kx + c * c * kz;
  k(0, 1) = k(1, 0) = c * s * (kx - kz);
  return k;
}

/// phi * D = (aL - aT) q q^T / |q| + aT |q| I + phi Dm I.
inline Eigen::Matrix2d dispersion_tensor(const Eigen::Vector2d& q, double phi, double alpha_l, double alpha_t,
                                         double dm) {
  require(phi > 0.0 && alpha_l >= 0.0 && alpha_t >= 0.0 && dm >= 0.0, "dispersion: negative coefficient");
  Eigen::Matrix2d d = phi * dm * Eigen::Matrix2d::Identity();
  const double norm = q.norm();
  if (norm > 0.0) d += (alpha_l - alpha_t) * q * q.transpose() / norm + alpha_t * norm * Eigen::Matrix2d::Identity();
  return d;
}

}  // namespace pcgsa::aquifer
