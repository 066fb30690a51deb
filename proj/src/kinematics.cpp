#include "cdpr/kinematics.hpp"

#include "cdpr/errors.hpp"

namespace cdpr {

namespace {

void fill(const std::vector<Vec3>& frame_points, const std::vector<Vec3>& body_points,
          const Vec3& p, bool counterbalance, std::vector<Vec3>& vec, std::vector<double>& len,
          std::vector<Vec3>& dir) {
  const std::size_t count = frame_points.size();
  vec.resize(count);
  len.resize(count);
  dir.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    vec[i] = p + body_points[i] - frame_points[i];
    len[i] = vec[i].norm();
    if (!(len[i] >= kMinCableLength)) throw SingularPoseError(i, counterbalance);
    dir[i] = -vec[i] / len[i];
  }
}

JacobianMatrix rows(const std::vector<Vec3>& body_points, const std::vector<Vec3>& dirs) {
  JacobianMatrix J(static_cast<Eigen::Index>(dirs.size()), 6);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    J.block<1, 3>(row, 0) = dirs[i].transpose();
    J.block<1, 3>(row, 3) = body_points[i].cross(dirs[i]).transpose();
  }
  return J;
}

}  // namespace

CableState cable_state(const RobotGeometry& geom, const PlatformPose& pose) {
  CableState s;
  fill(geom.anchors, geom.attachments, pose.position, false, s.l_vec, s.l_len, s.u_hat);
  fill(geom.cb_pulleys_fixed, geom.cb_pulleys_platform, pose.position, true, s.d_vec, s.d_len,
       s.v_hat);
  return s;
}

Jacobians jacobians(const RobotGeometry& geom, const CableState& cables) {
  Jacobians out;
  out.J_l = rows(geom.attachments, cables.u_hat);
  out.J_d = rows(geom.cb_pulleys_platform, cables.v_hat);
  out.J.resize(out.J_l.rows() + out.J_d.rows(), 6);
  out.J << out.J_l, out.J_d;
  return out;
}

Jacobians jacobians(const RobotGeometry& geom, const PlatformPose& pose) {
  return jacobians(geom, cable_state(geom, pose));
}

CableRates cable_rates(const RobotGeometry& geom, const PlatformPose& pose, const Vector6d& twist) {
  const auto jac = jacobians(geom, pose);
  return {-jac.J_l * twist, -jac.J_d * twist};
}

Eigen::Matrix<double, 3, Eigen::Dynamic> planar_view(const JacobianMatrix& J) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> A(3, J.rows());
  A.row(0) = J.col(0).transpose();
  A.row(1) = J.col(1).transpose();
  A.row(2) = J.col(5).transpose();
  return A;
}

}  // namespace cdpr
