#pragma once

#include <array>
#include <limits>

#include <Eigen/Core>

#include "cdpr/kinematics.hpp"
#include "cdpr/model.hpp"

namespace cdpr {

/// Slack on tension bound checks (N).
inline constexpr double kTensionTolerance = 1e-6;
/// Relative residual bound for the linear systems solved per candidate.
inline constexpr double kResidualTolerance = 1e-9;
/// Candidates whose 3x3 block has a smaller 1-norm reciprocal condition are dropped.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// Planar wrench (Fx, Fy, Mz).
using Wrench3 = Eigen::Vector3d;
/// Planar structure matrix of the four driven cables, A_l = planar rows of J_l^T.
using StructureMatrix = Eigen::Matrix<double, 3, 4>;
using Tensions = Eigen::Vector4d;

struct FeasibilityOptions {
  /// Check the counterbalance tension against its bounds. Switched off for
  /// the active-counterbalance study, which lets T5 exceed the rated maximum.
  bool enforce_t5_max = true;
};

/// [0, m g, 0]: the wrench the cables must supply to hold the platform.
Wrench3 gravity_wrench(const RobotGeometry& geom);

/// Right-hand side of J_l^T T = u after moving the counterbalance wrench
/// over: u = G - J_d^T F with every F_j = T5.
struct EquilibriumInput {
  Wrench3 u = Wrench3::Zero();
  Eigen::VectorXd F;
  Wrench3 G = Wrench3::Zero();
};

EquilibriumInput equilibrium_input(const RobotGeometry& geom, const PlatformPose& pose, double T5);

/// Everything the tension analysis needs at one pose. Requires four driven
/// cables and a geometry lying in the z = 0 plane (ConfigurationError otherwise).
struct PlanarStatics {
  CableState cables;
  StructureMatrix A_l = StructureMatrix::Zero();
  EquilibriumInput input;
};

PlanarStatics planar_statics(const RobotGeometry& geom, const PlatformPose& pose, double T5);

/// One clamped candidate: cable `candidate` (1-based) held at its upper bound
/// and the other three solved from the remaining 3x3 system.
struct TensionSolution {
  int candidate = 0;
  Tensions T = Tensions::Zero();
  bool valid = false;     // false when the 3x3 block is near-singular
  bool feasible = false;  // valid and every entry within its bounds
  double norm = std::numeric_limits<double>::quiet_NaN();
  double rcond = 0.0;
};

using CandidateSet = std::array<TensionSolution, 4>;

CandidateSet candidate_tensions(const RobotGeometry& geom, const PlatformPose& pose, double T5);
CandidateSet candidate_tensions(const RobotGeometry& geom, const PlanarStatics& statics);

/// Aggregate of the four candidates: gamma is the largest feasible candidate
/// norm and T_opt_star the candidate that attains it (lowest index on ties).
struct CostResult {
  bool feasible_any = false;
  bool t5_within_bounds = true;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  int best_candidate = 0;
  Tensions T_opt_star = Tensions::Constant(std::numeric_limits<double>::quiet_NaN());
  CandidateSet candidates{};
};

CostResult cost_rigid(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                      const FeasibilityOptions& options = {});

/// As cost_rigid, plus the unstretched-length window
/// l0_min <= l * EA / (T + EA) <= l0_max on every driven and counterbalance
/// cable. Throws ConfigurationError when the geometry has no elastic data.
CostResult cost_elastic(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                        const FeasibilityOptions& options = {});

/// T(alpha) = pinv(A_l) u + alpha * n, with n the unit null vector of A_l.
/// The sign of n is fixed so that its entries sum to a positive value.
struct NullspaceSplit {
  Tensions particular = Tensions::Zero();
  Tensions direction = Tensions::Zero();
};

/// Throws SingularConfigurationError when A_l has rank below 3.
NullspaceSplit nullspace_split(const RobotGeometry& geom, const PlatformPose& pose, double T5);
Tensions nullspace_solver(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                          double alpha);

/// Closed interval of alpha values keeping every driven tension within its
/// bounds (lo > hi when empty).
struct AlphaInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool empty() const { return !(lo <= hi); }
};

AlphaInterval feasible_alpha_interval(const RobotGeometry& geom, const PlatformPose& pose,
                                      double T5);

/// Exact feasibility of the bounded tension problem, independent of the
/// clamped-candidate method. True iff some alpha satisfies every bound (and
/// T5 is within its own bounds when enforced).
bool nullspace_oracle(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                      const FeasibilityOptions& options = {});

/// M q_dd + C(q, q_d) q_d + G - J^T [T; F] with external loads taken as zero.
/// `velocity` and `acceleration` are [v; omega] and [v_dot; omega_dot].
Vector6d dynamics_residual(const RobotGeometry& geom, const PlatformPose& pose,
                           const Vector6d& velocity, const Vector6d& acceleration,
                           const Eigen::VectorXd& T, const Eigen::VectorXd& F);

}  // namespace cdpr
