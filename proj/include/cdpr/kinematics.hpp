#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cdpr/model.hpp"

namespace cdpr {

/// Cable lengths below this are treated as degenerate (m).
inline constexpr double kMinCableLength = 1e-9;

using Vector6d = Eigen::Matrix<double, 6, 1>;
using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, 6>;

/// Cable vectors at one pose. l_vec points from the anchor to the platform
/// attachment (p + r_i - a_i); u_hat = -l_vec / l_len points back along the
/// cable, i.e. the direction the cable pulls the platform.
struct CableState {
  std::vector<Vec3> l_vec;
  std::vector<double> l_len;
  std::vector<Vec3> u_hat;
  std::vector<Vec3> d_vec;
  std::vector<double> d_len;
  std::vector<Vec3> v_hat;
};

/// Row i of J_l is [u_i^T, (r_i x u_i)^T]; J_d likewise for the counterbalance
/// cables; J stacks J_l over J_d. Length rates are -J * [p_dot; omega].
struct Jacobians {
  JacobianMatrix J_l;
  JacobianMatrix J_d;
  JacobianMatrix J;
};

/// Throws SingularPoseError when any cable is shorter than kMinCableLength.
CableState cable_state(const RobotGeometry& geom, const PlatformPose& pose);

Jacobians jacobians(const RobotGeometry& geom, const PlatformPose& pose);
Jacobians jacobians(const RobotGeometry& geom, const CableState& cables);

struct CableRates {
  Eigen::VectorXd driven;          // l_dot, length n
  Eigen::VectorXd counterbalance;  // d_dot, length m
};

/// `twist` is [p_dot; omega_m].
CableRates cable_rates(const RobotGeometry& geom, const PlatformPose& pose, const Vector6d& twist);

/// Planar (Fx, Fy, Mz) rows of J^T, one column per cable. For the four-cable
/// planar robot applied to J_l this is the 3x4 structure matrix.
Eigen::Matrix<double, 3, Eigen::Dynamic> planar_view(const JacobianMatrix& J);

}  // namespace cdpr
