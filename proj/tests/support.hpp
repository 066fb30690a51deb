#pragma once

// Shared generators and independent reference formulas for the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "cdpr/model.hpp"

namespace testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline cdpr::PlatformPose random_pose(Rng& rng, const cdpr::ScanRegion& r) {
  return cdpr::PlatformPose::planar(rng.uniform(r.x_min, r.x_max), rng.uniform(r.y_min, r.y_max));
}

// Hand-derived planar structure matrix of the four-cable robot, one norm per column.
inline Eigen::Matrix<double, 3, 4> closed_form_structure(const cdpr::PlanarLengths& L, double x,
                                                         double y) {
  const double w = L.w, h = L.h, wb = L.w_b, h1 = L.h_1, hbu = L.h_bu;
  const double up = h1 - h / 2 + y;
  const double lo = h / 2 + hbu + y;
  const double chi1 = std::hypot(up, w / 2 - wb / 2 + x);
  const double chi2 = std::hypot(up, wb / 2 - w / 2 + x);
  const double delta3 = std::hypot(lo, wb / 2 - w / 2 + x);
  const double delta4 = std::hypot(lo, w / 2 - wb / 2 + x);

  Eigen::Matrix<double, 3, 4> A;
  A(0, 0) = -(w - wb + 2 * x) / (2 * chi1);
  A(0, 1) = -(wb - w + 2 * x) / (2 * chi2);
  A(0, 2) = -(wb - w + 2 * x) / (2 * delta3);
  A(0, 3) = -(w - wb + 2 * x) / (2 * delta4);
  A(1, 0) = -up / chi1;
  A(1, 1) = -up / chi2;
  A(1, 2) = -lo / delta3;
  A(1, 3) = -lo / delta4;
  A(2, 0) = wb * up / (2 * chi1);
  A(2, 1) = -wb * up / (2 * chi2);
  A(2, 2) = -(2 * hbu * w + h * wb - 4 * hbu * x + 2 * wb * y) / (4 * delta3);
  A(2, 3) = (2 * hbu * w + h * wb + 4 * hbu * x + 2 * wb * y) / (4 * delta4);
  return A;
}

// Hand-derived counterbalance Jacobian (planar rows Fx, Fy, Mz as columns) for
// the single top-center platform point.
inline Eigen::Matrix<double, 3, 2> closed_form_counterbalance(const cdpr::PlanarLengths& L,
                                                              double x, double y) {
  const double wp = L.w_p, hp = L.h_p, hbp = L.h_bp;
  const double eta = std::hypot(wp + x, hbp - hp + y);
  const double kappa = std::hypot(wp - x, hbp - hp + y);
  Eigen::Matrix<double, 3, 2> Jd;
  Jd << -(wp + x) / eta, (wp - x) / kappa,
        -(hbp - hp + y) / eta, -(hbp - hp + y) / kappa,
        hbp * (wp + x) / eta, -hbp * (wp - x) / kappa;
  return Jd;
}

// Feasibility of A T = u with lo <= T <= hi, solved without any SVD: the null
// direction comes from signed 3x3 minors and the particular solution from the
// normal equations. Returns the feasible interval of the null-direction
// coefficient (lo > hi when empty).
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool empty() const { return !(lo <= hi); }
};

inline Interval reference_interval(const Eigen::Matrix<double, 3, 4>& A, const Eigen::Vector3d& u,
                                   const Eigen::Vector4d& lo, const Eigen::Vector4d& hi,
                                   double slack) {
  Eigen::Vector4d n;
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix3d minor;
    for (int c = 0, j = 0; c < 4; ++c)
      if (c != k) minor.col(j++) = A.col(c);
    n(k) = ((k % 2) ? -1.0 : 1.0) * minor.determinant();
  }
  n.normalize();
  const Eigen::Vector4d t0 = A.transpose() * (A * A.transpose()).ldlt().solve(u);

  Interval out;
  for (int k = 0; k < 4; ++k) {
    const double a = lo(k) - slack - t0(k);
    const double b = hi(k) + slack - t0(k);
    if (std::abs(n(k)) < 1e-14) {
      if (a > 0.0 || b < 0.0) return {1.0, -1.0};
      continue;
    }
    double s = a / n(k), e = b / n(k);
    if (s > e) std::swap(s, e);
    out.lo = std::max(out.lo, s);
    out.hi = std::min(out.hi, e);
  }
  return out;
}

}  // namespace testing
