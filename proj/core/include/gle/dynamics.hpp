#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "gle/rng.hpp"
#include "gle/state.hpp"

namespace gle {

// Integration parameters. dt is a request: the integrator rounds it down to
// the nearest dyadic fraction of the output interval so that every step is
// addressable in the Wiener tree (adaptive halving then stays on the tree).
struct SimParams {
  double m = 1.0;
  double gamma = 1.0;
  double dt = 1e-3;
  double T = 1.0;
  uint64_t seed = 0;
  double delta_min = 1e-4;
  int max_halvings = 20;

  void validate_gle() const;
  void validate_overdamped() const;
};

// Smooth cutoff theta_R: 1 on |t| <= R, 0 on |t| >= R+1, quintic smoothstep
// in between (C^2, monotone). Requires R > 2.
struct CutoffSpec {
  double radius = 5.0;
  void validate() const;
};

double apply_cutoff(const CutoffSpec& spec, double t);

// Wiener increments feeding one proposed step of width h. Zero noise gives
// the deterministic flow of the splitting scheme.
struct StepNoise {
  double h = 0.0;
  Eigen::MatrixXd dW_v;                // d x N, channel j = 0
  std::vector<Eigen::MatrixXd> dW_z;   // per particle, d x k_i, channels j >= 1
  // Sub-increments over the two halves of the span, used by the overdamped
  // scheme's Strang halves.
  std::vector<Eigen::MatrixXd> dW_z_first_half;
  std::vector<Eigen::MatrixXd> dW_z_second_half;

  static StepNoise zero(const System& sys, double h);
  static StepNoise from_bundle(const NoiseBundle& bundle, const System& sys,
                               const DyadicSpan& span);
};

struct StepResult {
  double guard_distance = 0.0;  // min pair separation reached by the proposal
};

// One step of the GLE splitting scheme (kick / drift / exact OU / drift /
// kick), in place. Passing a cutoff runs the truncated drift instead.
StepResult step_gle(PhaseState& state, const System& sys,
                    const SimParams& params, const StepNoise& noise,
                    const CutoffSpec* cutoff = nullptr);

// One step of the overdamped (q, f) scheme: exact OU half-steps for f around
// the frozen mean, Euler-Maruyama for q.
StepResult step_overdamped(OverdampedState& state, const System& sys,
                           const SimParams& params, const StepNoise& noise,
                           const CutoffSpec* cutoff = nullptr);

// Trajectory on the output grid. States are recorded at base-cell boundaries,
// which every accepted step sequence lands on exactly.
template <typename StateT>
struct TrajectoryT {
  std::vector<double> times;
  std::vector<StateT> states;
  std::vector<double> min_guard_distance;  // per recorded interval
  long long accepted_steps = 0;
  long long rejected_steps = 0;
  double min_guard_overall = 0.0;
  uint64_t seed = 0;
  double base_width = 0.0;

  const StateT& final_state() const { return states.back(); }
};

using Trajectory = TrajectoryT<PhaseState>;
using OverdampedTrajectory = TrajectoryT<OverdampedState>;

Trajectory simulate_gle(const PhaseState& initial, const System& sys,
                        const SimParams& params, int output_points,
                        const CutoffSpec* cutoff = nullptr);

OverdampedTrajectory simulate_overdamped(const OverdampedState& initial,
                                         const System& sys,
                                         const SimParams& params,
                                         int output_points,
                                         const CutoffSpec* cutoff = nullptr);

// Initial condition map between the two systems:
// q_i(0) = x_i(0), f_il(0) = z_il(0) + lambda_il x_i(0).
OverdampedState lift_initial_condition(const Eigen::MatrixXd& x0,
                                       const std::vector<Eigen::MatrixXd>& z0,
                                       const KernelSpec& spec);

// Reconstruct z_il(t) from the recorded position path and the Wiener tree:
//   z(t) = e^{-at}(z(0) + l x(0)) - l x(t) + l a int_0^t e^{-a(t-r)} x(r) dr
//          + sqrt(2a) int_0^t e^{-a(t-r)} dW(r),
// with trapezoid quadrature for the drift integral and left-point sums for
// the stochastic one. First-order accurate in the recording step.
Eigen::VectorXd duhamel_reconstruct_z(const Trajectory& traj,
                                      const System& sys, int i, int l,
                                      double t);

// Run the GLE and its overdamped limit on the same Wiener channels (same
// seed, same base grid) with initial conditions linked by
// lift_initial_condition, and report sup_t |x_m(t) - q(t)| on the grid.
struct CoupledPairResult {
  Trajectory gle;
  OverdampedTrajectory overdamped;
  double sup_distance = 0.0;
};

CoupledPairResult coupled_small_mass_pair(const PhaseState& initial,
                                          const System& sys,
                                          const SimParams& gle_params,
                                          const SimParams& over_params,
                                          int output_points,
                                          const CutoffSpec* cutoff = nullptr);

// Drift of the GLE velocity equation (scaled by 1/m in the kick) and of the
// overdamped q equation; exposed for tests of the truncated-drift Lipschitz
// property.
Eigen::MatrixXd gle_force_field(const System& sys,
                                const Eigen::MatrixXd& positions,
                                const std::vector<Eigen::MatrixXd>& z,
                                const CutoffSpec* cutoff,
                                double* guard_out = nullptr);

}  // namespace gle
