#pragma once

#include <Eigen/Core>
#include <vector>

#include "gle/dynamics.hpp"
#include "gle/rng.hpp"
#include "gle/state.hpp"

namespace gle {

// Perturbation constants of the Lyapunov candidates: epsilon weights the
// cross terms, R scales the gamma = 0 construction, kappa is the exponential
// tilt used by the overdamped energy bounds.
struct LyapunovParams {
  double epsilon = 0.05;
  double R = 2.0;
  double kappa = 0.1;
  void validate(bool needs_R) const;
};

// First derivatives and the v/z Laplacians of a scalar observable at a state;
// exactly the data the generator consumes.
struct GeneratorInput {
  Eigen::MatrixXd grad_x;               // d x N
  Eigen::MatrixXd grad_v;               // d x N
  std::vector<Eigen::MatrixXd> grad_z;  // per particle, d x k_i
  Eigen::VectorXd lap_v;                // per particle
  std::vector<Eigen::VectorXd> lap_z;   // per particle, per mode

  static GeneratorInput zero(const System& sys);
};

// H_N = m|v|^2/2 + sum U(x_i) + sum_{i<j} G(x_i - x_j) + sum |z_i|^2/2.
double hamiltonian_N(const PhaseState& state, const System& sys, double m);

// Apply the generator of the Markovian system to an observable described by
// its derivatives at `state`.
double generator_apply(const GeneratorInput& input, const PhaseState& state,
                       const System& sys, double m, double gamma);

// Closed forms used as cross-checks of generator_apply. The constants follow
// from the generator definition itself (and are pinned by stationarity:
// the Gibbs average of L H_N must vanish).
double closed_form_LHN(const PhaseState& state, const System& sys, double m,
                       double gamma);
// L applied to m<x,v>.
double closed_form_Lmxv(const PhaseState& state, const System& sys, double m,
                        double gamma);

// ---------------------------------------------------------------------------
// Lyapunov candidates. Value plus analytic derivatives in one pass.
//   hn  : H_N itself (negative control; not a Lyapunov function)
//   vn1 : H_N + eps m <x,v> - eps m sum_i <v_i, sum_j (x_i-x_j)/|x_i-x_j|>
//   vn2 : H_N + eps R m <x,v> + eps R^2 m sum <v_i, z_i1>
//         - eps m sum_i <v_i, ...> sqrt(Q_R^N)
//   v1/v2: single-particle analogues with the origin playing the partner role
//          and Q_R = R^4 |z_1|^2 + m|v|^2 + 2U + 2G + R.
// ---------------------------------------------------------------------------

enum class Candidate { HN, VN1, VN2, V1, V2 };

struct CandidateEval {
  double value = 0.0;
  GeneratorInput derivs;
};

CandidateEval eval_candidate(Candidate which, const PhaseState& state,
                             const System& sys, double m,
                             const LyapunovParams& params);

double v1_eval(const PhaseState& state, const System& sys, double m,
               const LyapunovParams& params);
double v2_eval(const PhaseState& state, const System& sys, double m,
               const LyapunovParams& params);
double vN1_eval(const PhaseState& state, const System& sys, double m,
                const LyapunovParams& params);
double vN2_eval(const PhaseState& state, const System& sys, double m,
                const LyapunovParams& params);

// Energy functionals of the overdamped system:
//   Gamma1 (beta1 > 1): gamma|q|^2/2 + sum |f|^2/(2 alpha)
//                       + eps gamma sum_{i<j} |q_i-q_j|^{-(beta1-1)}
//   Gamma2 (beta1 = 1): log interaction instead of the power.
double gamma1_eval(const OverdampedState& state, const System& sys,
                   double gamma, const LyapunovParams& params);
double gamma2_eval(const OverdampedState& state, const System& sys,
                   double gamma, const LyapunovParams& params);

// ---------------------------------------------------------------------------
// Sampled certification of the drift inequality L V <= -c V + D.
//
// The fit takes c = -max(LV/V) over the top quintile of sampled V (the
// asymptotic drift ratio) and, when c > 0, the smallest D covering every
// sample. A candidate with c <= 0 fails: the high-energy samples with
// nonnegative drift ratio are reported as violations.
// ---------------------------------------------------------------------------

struct ScanSettings {
  int n_samples = 10000;
  double radius_lo = 1e-2;
  double radius_hi = 10.0;
  double speed_hi = 10.0;   // |v_i| and |z_il| magnitudes sampled in [0, hi]
  double near_lo = 1e-3;
  double near_hi = 1e-1;
  double near_fraction = 1.0 / 3.0;
  double rest_fraction = 0.15;  // fraction of samples with v = 0, z = 0
  uint64_t seed = 1;
};

struct ScanViolation {
  int sample_index = 0;
  double V = 0.0;
  double LV = 0.0;
  double margin = 0.0;  // drift ratio LV/V at the sample
  Eigen::VectorXd state_flat;
};

struct ScanReport {
  Candidate candidate = Candidate::HN;
  LyapunovParams params;
  int n_samples = 0;
  double c_fit = 0.0;
  double D_fit = 0.0;
  double min_value = 0.0;  // smallest sampled V (diagnoses bad shifts)
  int violation_count = 0;
  std::vector<ScanViolation> violations;  // capped sample of witnesses
  bool ok() const { return violation_count == 0 && c_fit > 0.0; }
};

ScanReport drift_scan(Candidate which, const System& sys, double m,
                      double gamma, const LyapunovParams& params,
                      const ScanSettings& settings);

// Grid search over (epsilon, R); returns every report, best first (largest
// violation-free c_fit).
std::vector<ScanReport> drift_scan_grid(Candidate which, const System& sys,
                                        double m, double gamma,
                                        const std::vector<double>& eps_grid,
                                        const std::vector<double>& R_grid,
                                        const ScanSettings& settings);

// Random phase point from the scan's stratified measure; exposed for tests.
PhaseState sample_scan_state(const System& sys, const ScanSettings& settings,
                             RngStream& rng);

const char* to_string(Candidate c);

}  // namespace gle
