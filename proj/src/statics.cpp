#include "cdpr/statics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "cdpr/errors.hpp"

namespace cdpr {

namespace {

void require_planar_four_cable(const RobotGeometry& geom, const PlatformPose& pose) {
  if (geom.driven_count() != 4)
    throw ConfigurationError("tension analysis needs exactly four driven cables");
  auto in_plane = [](const std::vector<Vec3>& pts) {
    return std::all_of(pts.begin(), pts.end(), [](const Vec3& p) { return p.z() == 0.0; });
  };
  if (pose.position.z() != 0.0 || !in_plane(geom.anchors) || !in_plane(geom.attachments) ||
      !in_plane(geom.cb_pulleys_fixed) || !in_plane(geom.cb_pulleys_platform))
    throw ConfigurationError("tension analysis needs a geometry in the z = 0 plane");
}

bool within(double value, double lo, double hi) {
  return value >= lo - kTensionTolerance && value <= hi + kTensionTolerance;
}

bool t5_within_bounds(const RobotGeometry& geom, double T5) {
  const std::size_t n = geom.driven_count();
  for (std::size_t j = 0; j < geom.cb_count(); ++j)
    if (!within(T5, geom.tension_min_N[n + j], geom.tension_max_N[n + j])) return false;
  return true;
}

double one_norm(const Eigen::Matrix3d& M) { return M.cwiseAbs().colwise().sum().maxCoeff(); }

CostResult aggregate(CandidateSet candidates, bool t5_ok) {
  CostResult out;
  out.t5_within_bounds = t5_ok;
  for (auto& c : candidates) {
    c.feasible = c.feasible && t5_ok;
    if (!c.feasible) continue;
    if (!out.feasible_any || c.norm > out.gamma + kTensionTolerance) {
      out.feasible_any = true;
      out.gamma = c.norm;
      out.best_candidate = c.candidate;
      out.T_opt_star = c.T;
    }
  }
  out.candidates = candidates;
  return out;
}

}  // namespace

Wrench3 gravity_wrench(const RobotGeometry& geom) {
  return {0.0, geom.platform_mass_kg * geom.gravity_mps2, 0.0};
}

EquilibriumInput equilibrium_input(const RobotGeometry& geom, const PlatformPose& pose,
                                   double T5) {
  if (!(T5 >= 0.0)) throw ValidationError("t5", "counterbalance tension must be non-negative");
  const auto jac = jacobians(geom, pose);
  EquilibriumInput in;
  in.G = gravity_wrench(geom);
  in.F = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(geom.cb_count()), T5);
  in.u = in.G - planar_view(jac.J_d) * in.F;
  return in;
}

PlanarStatics planar_statics(const RobotGeometry& geom, const PlatformPose& pose, double T5) {
  require_planar_four_cable(geom, pose);
  if (!(T5 >= 0.0)) throw ValidationError("t5", "counterbalance tension must be non-negative");
  PlanarStatics s;
  s.cables = cable_state(geom, pose);
  const auto jac = jacobians(geom, s.cables);
  s.A_l = planar_view(jac.J_l);
  s.input.G = gravity_wrench(geom);
  s.input.F = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(geom.cb_count()), T5);
  s.input.u = s.input.G - planar_view(jac.J_d) * s.input.F;
  return s;
}

CandidateSet candidate_tensions(const RobotGeometry& geom, const PlanarStatics& statics) {
  const auto& A = statics.A_l;
  const auto& u = statics.input.u;
  CandidateSet out;
  for (int k = 0; k < 4; ++k) {
    TensionSolution& sol = out[static_cast<std::size_t>(k)];
    sol.candidate = k + 1;

    std::array<int, 3> rest{};
    for (int i = 0, r = 0; i < 4; ++i)
      if (i != k) rest[static_cast<std::size_t>(r++)] = i;

    Eigen::Matrix3d B;
    for (int c = 0; c < 3; ++c) B.col(c) = A.col(rest[static_cast<std::size_t>(c)]);
    const double t_clamped = geom.tension_max_N[static_cast<std::size_t>(k)];
    const Eigen::Vector3d rhs = u - A.col(k) * t_clamped;

    Eigen::Matrix3d B_inv;
    bool invertible = false;
    B.computeInverseWithCheck(B_inv, invertible, 0.0);
    if (!invertible || !B_inv.allFinite()) continue;
    sol.rcond = 1.0 / (one_norm(B) * one_norm(B_inv));
    if (!(sol.rcond >= kMinReciprocalCondition)) continue;

    Eigen::Vector3d t = B_inv * rhs;
    t += B_inv * (rhs - B * t);  // one refinement step

    sol.T(k) = t_clamped;
    for (int c = 0; c < 3; ++c) sol.T(rest[static_cast<std::size_t>(c)]) = t(c);
    sol.valid = true;
    sol.norm = sol.T.norm();
    sol.feasible = true;
    for (std::size_t i = 0; i < 4; ++i)
      sol.feasible = sol.feasible && within(sol.T(static_cast<Eigen::Index>(i)),
                                            geom.tension_min_N[i], geom.tension_max_N[i]);
  }
  return out;
}

CandidateSet candidate_tensions(const RobotGeometry& geom, const PlatformPose& pose, double T5) {
  return candidate_tensions(geom, planar_statics(geom, pose, T5));
}

CostResult cost_rigid(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                      const FeasibilityOptions& options) {
  const auto candidates = candidate_tensions(geom, pose, T5);
  return aggregate(candidates, !options.enforce_t5_max || t5_within_bounds(geom, T5));
}

CostResult cost_elastic(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                        const FeasibilityOptions& options) {
  if (!geom.elastic) throw ConfigurationError("elastic analysis needs elastic cable parameters");
  const auto& e = *geom.elastic;
  const auto statics = planar_statics(geom, pose, T5);
  auto candidates = candidate_tensions(geom, statics);

  auto length_ok = [&](std::size_t k, double length, double tension) {
    const double unstretched = length * e.ea_N[k] / (tension + e.ea_N[k]);
    return unstretched >= e.l0_min_m[k] && unstretched <= e.l0_max_m[k];
  };

  const std::size_t n = geom.driven_count();
  bool counterbalance_ok = true;
  for (std::size_t j = 0; j < geom.cb_count(); ++j)
    counterbalance_ok = counterbalance_ok && length_ok(n + j, statics.cables.d_len[j], T5);

  for (auto& c : candidates) {
    if (!c.feasible) continue;
    bool ok = counterbalance_ok;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = length_ok(i, statics.cables.l_len[i], c.T(static_cast<Eigen::Index>(i)));
    c.feasible = ok;
  }
  return aggregate(candidates, !options.enforce_t5_max || t5_within_bounds(geom, T5));
}

NullspaceSplit nullspace_split(const RobotGeometry& geom, const PlatformPose& pose, double T5) {
  const auto statics = planar_statics(geom, pose, T5);
  Eigen::JacobiSVD<StructureMatrix> svd(statics.A_l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();
  if (!(sigma(2) > 1e-12 * sigma(0)))
    throw SingularConfigurationError("structure matrix is rank deficient at this pose");

  NullspaceSplit out;
  const Eigen::Vector3d coeffs = (svd.matrixU().transpose() * statics.input.u).cwiseQuotient(sigma);
  out.particular = svd.matrixV().leftCols<3>() * coeffs;
  out.direction = svd.matrixV().col(3);
  const double sum = out.direction.sum();
  if (sum < 0.0 || (sum == 0.0 && out.direction(0) < 0.0)) out.direction = -out.direction;
  return out;
}

Tensions nullspace_solver(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                          double alpha) {
  const auto split = nullspace_split(geom, pose, T5);
  return split.particular + alpha * split.direction;
}

AlphaInterval feasible_alpha_interval(const RobotGeometry& geom, const PlatformPose& pose,
                                      double T5) {
  const auto split = nullspace_split(geom, pose, T5);
  AlphaInterval range;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double t0 = split.particular(i);
    const double dir = split.direction(i);
    // Tolerance matches the candidate bound check plus room for the rounding
    // difference between the two solution routes.
    const double slack =
        kTensionTolerance + 1e-12 * std::max(std::abs(t0), geom.tension_max_N[k]);
    const double lo = geom.tension_min_N[k] - slack;
    const double hi = geom.tension_max_N[k] + slack;
    if (std::abs(dir) < 1e-14) {
      if (t0 < lo || t0 > hi) return {1.0, 0.0};
      continue;
    }
    double a = (lo - t0) / dir;
    double b = (hi - t0) / dir;
    if (a > b) std::swap(a, b);
    range.lo = std::max(range.lo, a);
    range.hi = std::min(range.hi, b);
  }
  return range;
}

bool nullspace_oracle(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                      const FeasibilityOptions& options) {
  if (options.enforce_t5_max && !t5_within_bounds(geom, T5)) return false;
  return !feasible_alpha_interval(geom, pose, T5).empty();
}

Vector6d dynamics_residual(const RobotGeometry& geom, const PlatformPose& pose,
                           const Vector6d& velocity, const Vector6d& acceleration,
                           const Eigen::VectorXd& T, const Eigen::VectorXd& F) {
  if (T.size() != static_cast<Eigen::Index>(geom.driven_count()) ||
      F.size() != static_cast<Eigen::Index>(geom.cb_count()))
    throw ValidationError("tensions", "tension vectors do not match the cable counts");
  const auto jac = jacobians(geom, pose);

  const Eigen::Vector3d omega = velocity.tail<3>();
  const Eigen::Matrix3d& I = geom.platform_inertia;

  Vector6d inertial;
  inertial.head<3>() = geom.platform_mass_kg * acceleration.head<3>();
  inertial.tail<3>() = I * acceleration.tail<3>() + omega.cross(I * omega);

  Vector6d gravity = Vector6d::Zero();
  gravity(1) = geom.platform_mass_kg * geom.gravity_mps2;

  Eigen::VectorXd tensions(T.size() + F.size());
  tensions << T, F;
  return inertial + gravity - jac.J.transpose() * tensions;
}

}  // namespace cdpr
