#include "gle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gle {

// ---------------------------------------------------------------------------
// states and system
// ---------------------------------------------------------------------------

void System::validate() const {
  if (n < 1) throw Error(ErrorKind::ValidationError, "need at least one particle");
  if (d < 1) throw Error(ErrorKind::ValidationError, "dimension must be >= 1");
  confining.validate();
  if (singular) singular->validate();
  kernels.validate();
  if (kernels.particles() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "kernel spec particle count does not match system");
}

bool PhaseState::finite() const {
  if (!x.allFinite() || !v.allFinite()) return false;
  for (const auto& zi : z)
    if (!zi.allFinite()) return false;
  return true;
}

PhaseState PhaseState::zero(const System& sys) {
  PhaseState s;
  s.x = Eigen::MatrixXd::Zero(sys.d, sys.n);
  s.v = Eigen::MatrixXd::Zero(sys.d, sys.n);
  s.z.reserve(static_cast<size_t>(sys.n));
  for (int i = 0; i < sys.n; ++i)
    s.z.push_back(Eigen::MatrixXd::Zero(sys.d, sys.kernels.mode_count(i)));
  return s;
}

bool OverdampedState::finite() const {
  if (!q.allFinite()) return false;
  for (const auto& fi : f)
    if (!fi.allFinite()) return false;
  return true;
}

double guard_distance(const System& sys, const Eigen::MatrixXd& positions) {
  if (!sys.singular) return std::numeric_limits<double>::infinity();
  if (sys.singular_at_origin()) return positions.col(0).norm();
  return min_pair_distance(positions);
}

void check_in_domain(const System& sys, const Eigen::MatrixXd& positions) {
  if (!(guard_distance(sys, positions) > 0.0))
    throw Error(ErrorKind::CoincidentParticles,
                "configuration outside the admissible domain");
}

// ---------------------------------------------------------------------------
// params and cutoff
// ---------------------------------------------------------------------------

void SimParams::validate_gle() const {
  if (!(m > 0.0)) throw Error(ErrorKind::ValidationError, "mass must be positive");
  if (gamma < 0.0) throw Error(ErrorKind::ValidationError, "gamma must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::ValidationError, "dt must be positive");
  if (T < 0.0) throw Error(ErrorKind::ValidationError, "horizon must be >= 0");
  const double fast = m / (10.0 * std::max(gamma, 1.0));
  if (dt > fast * (1.0 + 1e-12))
    throw Error(ErrorKind::ValidationError,
                "dt too large to resolve the fast velocity scale: need dt <= m/(10 max(gamma,1))");
  if (!(delta_min > 0.0))
    throw Error(ErrorKind::ValidationError, "delta_min must be positive");
  if (max_halvings < 0 || max_halvings > 40)
    throw Error(ErrorKind::ValidationError, "max_halvings out of range [0, 40]");
}

void SimParams::validate_overdamped() const {
  if (!(gamma > 0.0))
    throw Error(ErrorKind::GammaZero, "overdamped dynamics requires gamma > 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::ValidationError, "dt must be positive");
  if (T < 0.0) throw Error(ErrorKind::ValidationError, "horizon must be >= 0");
  if (!(delta_min > 0.0))
    throw Error(ErrorKind::ValidationError, "delta_min must be positive");
  if (max_halvings < 0 || max_halvings > 40)
    throw Error(ErrorKind::ValidationError, "max_halvings out of range [0, 40]");
}

void CutoffSpec::validate() const {
  if (!(radius > 2.0))
    throw Error(ErrorKind::ValidationError, "cutoff radius must exceed 2");
}

double apply_cutoff(const CutoffSpec& spec, double t) {
  const double a = std::abs(t);
  if (a <= spec.radius) return 1.0;
  if (a >= spec.radius + 1.0) return 0.0;
  const double u = a - spec.radius;  // in (0,1)
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  return 1.0 - s;
}

// ---------------------------------------------------------------------------
// forces
// ---------------------------------------------------------------------------

namespace {

constexpr double kTinySeparation = 1e-300;

// lambda weights of particle i as a vector
Eigen::VectorXd lambda_vec(const System& sys, int i) {
  const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
  Eigen::VectorXd l(static_cast<Eigen::Index>(modes.size()));
  for (size_t j = 0; j < modes.size(); ++j)
    l[static_cast<Eigen::Index>(j)] = modes[j].lambda;
  return l;
}

}  // namespace

Eigen::MatrixXd gle_force_field(const System& sys,
                                const Eigen::MatrixXd& positions,
                                const std::vector<Eigen::MatrixXd>& z,
                                const CutoffSpec* cutoff, double* guard_out) {
  const int n = static_cast<int>(positions.cols());
  const int d = static_cast<int>(positions.rows());
  Eigen::MatrixXd force(d, n);
  double guard = std::numeric_limits<double>::infinity();

  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = positions.col(i);
    if (cutoff) {
      const double theta = apply_cutoff(*cutoff, xi.norm());
      force.col(i) = theta > 0.0
                         ? Eigen::VectorXd(-theta * u_grad(sys.confining, xi))
                         : Eigen::VectorXd(Eigen::VectorXd::Zero(d));
    } else {
      force.col(i) = -u_grad(sys.confining, xi);
    }
    // memory coupling sum_l lambda_il z_il
    force.col(i) += z[static_cast<size_t>(i)] * lambda_vec(sys, i);
  }

  if (sys.singular) {
    const auto& pot = *sys.singular;
    if (sys.singular_at_origin()) {
      const double rho = positions.col(0).norm();
      guard = rho;
      if (cutoff) {
        const double theta = rho > 0.0 ? apply_cutoff(*cutoff, 1.0 / rho) : 0.0;
        if (theta > 0.0) force.col(0) -= theta * g_grad(pot, positions.col(0));
      } else {
        if (!(rho >= kTinySeparation))
          throw Error(ErrorKind::ZeroSeparation, "particle at the origin");
        force.col(0) -= g_grad(pot, positions.col(0));
      }
    } else {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Eigen::VectorXd r = positions.col(i) - positions.col(j);
          const double rho = r.norm();
          guard = std::min(guard, rho);
          if (cutoff) {
            const double theta =
                rho > 0.0 ? apply_cutoff(*cutoff, 1.0 / rho) : 0.0;
            if (theta <= 0.0) continue;
            const Eigen::VectorXd g =
                theta * (g_radial_d1(pot, rho) / rho) * r;
            force.col(i) -= g;
            force.col(j) += g;
          } else {
            if (!(rho >= kTinySeparation))
              throw Error(ErrorKind::CoincidentParticles,
                          "coincident particles in force evaluation");
            const Eigen::VectorXd g = (g_radial_d1(pot, rho) / rho) * r;
            force.col(i) -= g;
            force.col(j) += g;
          }
        }
      }
    }
  }

  if (guard_out) *guard_out = guard;
  return force;
}

// ---------------------------------------------------------------------------
// steps
// ---------------------------------------------------------------------------

StepNoise StepNoise::zero(const System& sys, double h) {
  StepNoise noise;
  noise.h = h;
  noise.dW_v = Eigen::MatrixXd::Zero(sys.d, sys.n);
  for (int i = 0; i < sys.n; ++i) {
    const int k = sys.kernels.mode_count(i);
    noise.dW_z.push_back(Eigen::MatrixXd::Zero(sys.d, k));
    noise.dW_z_first_half.push_back(Eigen::MatrixXd::Zero(sys.d, k));
    noise.dW_z_second_half.push_back(Eigen::MatrixXd::Zero(sys.d, k));
  }
  return noise;
}

StepNoise StepNoise::from_bundle(const NoiseBundle& bundle, const System& sys,
                                 const DyadicSpan& span) {
  StepNoise noise;
  noise.h = bundle.base_width() / static_cast<double>(1ll << span.level);
  noise.dW_v.resize(sys.d, sys.n);
  const DyadicSpan left{span.cell, span.level + 1, 2 * span.index};
  const DyadicSpan right{span.cell, span.level + 1, 2 * span.index + 1};
  for (int i = 0; i < sys.n; ++i) {
    noise.dW_v.col(i) = bundle.channel(i, 0).increment(span);
    const int k = sys.kernels.mode_count(i);
    Eigen::MatrixXd zfull(sys.d, k), zleft(sys.d, k), zright(sys.d, k);
    for (int l = 0; l < k; ++l) {
      zleft.col(l) = bundle.channel(i, l + 1).increment(left);
      zright.col(l) = bundle.channel(i, l + 1).increment(right);
      zfull.col(l) = zleft.col(l) + zright.col(l);
    }
    noise.dW_z.push_back(std::move(zfull));
    noise.dW_z_first_half.push_back(std::move(zleft));
    noise.dW_z_second_half.push_back(std::move(zright));
  }
  return noise;
}

StepResult step_gle(PhaseState& state, const System& sys,
                    const SimParams& params, const StepNoise& noise,
                    const CutoffSpec* cutoff) {
  const double h = noise.h;
  const double m = params.m;
  const double inv_sqrt_h = 1.0 / std::sqrt(h);
  double guard = std::numeric_limits<double>::infinity();
  double g = 0.0;

  // B: half kick
  state.v += (0.5 * h / m) *
             gle_force_field(sys, state.x, state.z, cutoff, &g);
  guard = std::min(guard, g);

  // A: half drift; memory variables absorb the -lambda v forcing
  state.x += (0.5 * h) * state.v;
  for (int i = 0; i < sys.n; ++i)
    state.z[static_cast<size_t>(i)] -=
        (0.5 * h) * state.v.col(i) * lambda_vec(sys, i).transpose();
  guard = std::min(guard, guard_distance(sys, state.x));

  // O: exact OU for the friction and for every memory mode
  if (params.gamma > 0.0) {
    const double decay = std::exp(-params.gamma * h / m);
    const double coef = std::sqrt((1.0 - decay * decay) / m);
    state.v = decay * state.v + coef * inv_sqrt_h * noise.dW_v;
  }
  for (int i = 0; i < sys.n; ++i) {
    auto& zi = state.z[static_cast<size_t>(i)];
    const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
    for (size_t l = 0; l < modes.size(); ++l) {
      const double decay = std::exp(-modes[l].alpha * h);
      zi.col(static_cast<Eigen::Index>(l)) =
          decay * zi.col(static_cast<Eigen::Index>(l)) +
          std::sqrt(1.0 - decay * decay) * inv_sqrt_h *
              noise.dW_z[static_cast<size_t>(i)].col(static_cast<Eigen::Index>(l));
    }
  }

  // A: half drift
  state.x += (0.5 * h) * state.v;
  for (int i = 0; i < sys.n; ++i)
    state.z[static_cast<size_t>(i)] -=
        (0.5 * h) * state.v.col(i) * lambda_vec(sys, i).transpose();

  // B: half kick at the new positions
  state.v += (0.5 * h / m) *
             gle_force_field(sys, state.x, state.z, cutoff, &g);
  guard = std::min(guard, g);

  state.t += h;
  return {guard};
}

StepResult step_overdamped(OverdampedState& state, const System& sys,
                           const SimParams& params, const StepNoise& noise,
                           const CutoffSpec* cutoff) {
  if (!(params.gamma > 0.0))
    throw Error(ErrorKind::GammaZero, "overdamped step requires gamma > 0");
  const double h = noise.h;
  const double inv_sqrt_half = 1.0 / std::sqrt(0.5 * h);
  double guard = std::numeric_limits<double>::infinity();

  auto f_half = [&](const std::vector<Eigen::MatrixXd>& dw) {
    for (int i = 0; i < sys.n; ++i) {
      auto& fi = state.f[static_cast<size_t>(i)];
      const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
      for (size_t l = 0; l < modes.size(); ++l) {
        const auto lc = static_cast<Eigen::Index>(l);
        const double decay = std::exp(-modes[l].alpha * 0.5 * h);
        const Eigen::VectorXd mean = modes[l].lambda * state.q.col(i);
        fi.col(lc) = mean + decay * (fi.col(lc) - mean) +
                     std::sqrt(1.0 - decay * decay) * inv_sqrt_half *
                         dw[static_cast<size_t>(i)].col(lc);
      }
    }
  };

  f_half(noise.dW_z_first_half);

  // q: Euler-Maruyama on gamma dq = [-grad U - sum grad G - (sum l^2) q + sum l f] dt + sqrt(2 gamma) dW
  Eigen::MatrixXd drift(sys.d, sys.n);
  double g = 0.0;
  // reuse the force assembly without the memory coupling by passing zero z
  std::vector<Eigen::MatrixXd> empty_z;
  empty_z.reserve(static_cast<size_t>(sys.n));
  for (int i = 0; i < sys.n; ++i)
    empty_z.push_back(Eigen::MatrixXd::Zero(sys.d, sys.kernels.mode_count(i)));
  drift = gle_force_field(sys, state.q, empty_z, cutoff, &g);
  guard = std::min(guard, g);
  for (int i = 0; i < sys.n; ++i) {
    const Eigen::VectorXd lam = lambda_vec(sys, i);
    drift.col(i) += state.f[static_cast<size_t>(i)] * lam;
    drift.col(i) -= lam.squaredNorm() * state.q.col(i);
  }
  state.q += (h / params.gamma) * drift +
             std::sqrt(2.0 / params.gamma) * noise.dW_v;
  guard = std::min(guard, guard_distance(sys, state.q));

  f_half(noise.dW_z_second_half);

  state.t += h;
  return {guard};
}

// ---------------------------------------------------------------------------
// simulation driver (shared by both systems)
// ---------------------------------------------------------------------------

namespace {

int nominal_level(double base_width, double dt_request) {
  int level = 0;
  double w = base_width;
  while (w > dt_request * (1.0 + 1e-12) && level < 40) {
    w *= 0.5;
    ++level;
  }
  return level;
}

template <typename StateT, typename StepFn>
TrajectoryT<StateT> run_simulation(const StateT& initial, const System& sys,
                                   const SimParams& params, int output_points,
                                   const CutoffSpec* cutoff, StepFn&& step_fn,
                                   bool needs_halves) {
  (void)needs_halves;
  TrajectoryT<StateT> traj;
  traj.seed = params.seed;
  traj.times.push_back(initial.t);
  traj.states.push_back(initial);
  traj.min_guard_overall = std::numeric_limits<double>::infinity();
  if (params.T <= 0.0) {
    traj.base_width = 0.0;
    return traj;
  }
  if (output_points < 1)
    throw Error(ErrorKind::ValidationError, "need at least one output point");

  const double h0 = params.T / output_points;
  traj.base_width = h0;
  const int level0 = nominal_level(h0, params.dt);
  NoiseBundle bundle(params.seed, sys.n, sys.d,
                     sys.kernels.modes_per_particle(), h0);
  // reject on close approach only when the untruncated singular drift is live
  const bool guard_active = sys.singular.has_value() && cutoff == nullptr;

  StateT state = initial;
  const double t0 = initial.t;

  for (int cell = 0; cell < output_points; ++cell) {
    double cell_guard = std::numeric_limits<double>::infinity();

    // depth-first dyadic advance across this cell
    auto advance = [&](auto&& self, int level, std::int64_t index) -> void {
      const DyadicSpan span{cell, level, index};
      StateT trial = state;
      bool ok = true;
      bool nonfinite = false;
      double step_guard = 0.0;
      try {
        const StepNoise noise = StepNoise::from_bundle(bundle, sys, span);
        step_guard = step_fn(trial, noise).guard_distance;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ZeroSeparation ||
            e.kind() == ErrorKind::CoincidentParticles) {
          ok = false;
        } else {
          throw;
        }
      }
      if (ok && !trial.finite()) {
        ok = false;
        nonfinite = true;
      }
      if (ok && guard_active && step_guard < params.delta_min) ok = false;

      if (ok) {
        state = std::move(trial);
        ++traj.accepted_steps;
        cell_guard = std::min(cell_guard, step_guard);
        return;
      }
      ++traj.rejected_steps;
      if (level - level0 >= params.max_halvings) {
        if (nonfinite)
          throw Error(ErrorKind::NonFinite,
                      "non-finite state at t = " + std::to_string(state.t));
        throw StepRejectedError(
            state.t, "step rejected at t = " + std::to_string(state.t) +
                         ": pair distance below delta_min after max halvings");
      }
      self(self, level + 1, 2 * index);
      self(self, level + 1, 2 * index + 1);
    };

    const std::int64_t steps = 1ll << level0;
    for (std::int64_t idx = 0; idx < steps; ++idx) advance(advance, level0, idx);

    state.t = t0 + (cell + 1) * h0;  // pin to the exact grid time
    traj.times.push_back(state.t);
    traj.states.push_back(state);
    traj.min_guard_distance.push_back(cell_guard);
    traj.min_guard_overall = std::min(traj.min_guard_overall, cell_guard);
  }
  return traj;
}

}  // namespace

Trajectory simulate_gle(const PhaseState& initial, const System& sys,
                        const SimParams& params, int output_points,
                        const CutoffSpec* cutoff) {
  sys.validate();
  params.validate_gle();
  if (cutoff) cutoff->validate();
  if (sys.singular) check_in_domain(sys, initial.x);
  if (!initial.finite())
    throw Error(ErrorKind::NonFinite, "initial state not finite");
  return run_simulation(
      initial, sys, params, output_points, cutoff,
      [&](PhaseState& s, const StepNoise& n) {
        return step_gle(s, sys, params, n, cutoff);
      },
      false);
}

OverdampedTrajectory simulate_overdamped(const OverdampedState& initial,
                                         const System& sys,
                                         const SimParams& params,
                                         int output_points,
                                         const CutoffSpec* cutoff) {
  sys.validate();
  params.validate_overdamped();
  if (cutoff) cutoff->validate();
  if (sys.singular) check_in_domain(sys, initial.q);
  if (!initial.finite())
    throw Error(ErrorKind::NonFinite, "initial state not finite");
  return run_simulation(
      initial, sys, params, output_points, cutoff,
      [&](OverdampedState& s, const StepNoise& n) {
        return step_overdamped(s, sys, params, n, cutoff);
      },
      true);
}

// ---------------------------------------------------------------------------
// initial-condition lift, Duhamel reconstruction, coupled pair
// ---------------------------------------------------------------------------

OverdampedState lift_initial_condition(const Eigen::MatrixXd& x0,
                                       const std::vector<Eigen::MatrixXd>& z0,
                                       const KernelSpec& spec) {
  if (min_pair_distance(x0) <= 0.0 && x0.cols() > 1)
    throw Error(ErrorKind::CoincidentParticles,
                "coincident particles in initial condition");
  OverdampedState out;
  out.q = x0;
  out.f.reserve(z0.size());
  for (size_t i = 0; i < z0.size(); ++i) {
    const auto& modes = spec.modes[i];
    Eigen::MatrixXd fi = z0[i];
    for (size_t l = 0; l < modes.size(); ++l)
      fi.col(static_cast<Eigen::Index>(l)) +=
          modes[l].lambda * x0.col(static_cast<Eigen::Index>(i));
    out.f.push_back(std::move(fi));
  }
  return out;
}

Eigen::VectorXd duhamel_reconstruct_z(const Trajectory& traj,
                                      const System& sys, int i, int l,
                                      double t) {
  const auto& times = traj.times;
  if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
    throw Error(ErrorKind::HorizonExceeded,
                "reconstruction time outside the stored horizon");
  // snap to the closest recorded grid point
  size_t jt = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < times.size(); ++j) {
    const double d = std::abs(times[j] - t);
    if (d < best) {
      best = d;
      jt = j;
    }
  }
  const double ts = times[jt] - times.front();

  const auto& mode = sys.kernels.modes[static_cast<size_t>(i)][static_cast<size_t>(l)];
  const double alpha = mode.alpha;
  const double lambda = mode.lambda;
  const Eigen::VectorXd x0 = traj.states.front().x.col(i);
  const Eigen::VectorXd z0 =
      traj.states.front().z[static_cast<size_t>(i)].col(l);

  Eigen::VectorXd out = std::exp(-alpha * ts) * (z0 + lambda * x0) -
                        lambda * traj.states[jt].x.col(i);

  // trapezoid quadrature of alpha * int_0^t e^{-alpha (t-r)} x(r) dr
  if (jt > 0) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(sys.d);
    for (size_t j = 0; j + 1 <= jt; ++j) {
      const double r0 = times[j] - times.front();
      const double r1 = times[j + 1] - times.front();
      const double w0 = std::exp(-alpha * (ts - r0));
      const double w1 = std::exp(-alpha * (ts - r1));
      acc += 0.5 * (r1 - r0) *
             (w0 * traj.states[j].x.col(i) + w1 * traj.states[j + 1].x.col(i));
    }
    out += lambda * alpha * acc;

    // left-point stochastic convolution over the recorded cells
    NoiseBundle bundle(traj.seed, sys.n, sys.d,
                       sys.kernels.modes_per_particle(), traj.base_width);
    Eigen::VectorXd noise_acc = Eigen::VectorXd::Zero(sys.d);
    for (size_t j = 0; j < jt; ++j) {
      const double r0 = times[j] - times.front();
      noise_acc += std::exp(-alpha * (ts - r0)) *
                   bundle.channel(i, l + 1).increment(
                       {static_cast<std::int64_t>(j), 0, 0});
    }
    out += std::sqrt(2.0 * alpha) * noise_acc;
  }
  return out;
}

CoupledPairResult coupled_small_mass_pair(const PhaseState& initial,
                                          const System& sys,
                                          const SimParams& gle_params,
                                          const SimParams& over_params,
                                          int output_points,
                                          const CutoffSpec* cutoff) {
  if (gle_params.seed != over_params.seed ||
      gle_params.T != over_params.T)
    throw Error(ErrorKind::ValidationError,
                "coupled pair requires matching seed and horizon");
  over_params.validate_overdamped();

  CoupledPairResult result;
  result.gle = simulate_gle(initial, sys, gle_params, output_points, cutoff);
  const OverdampedState lifted =
      lift_initial_condition(initial.x, initial.z, sys.kernels);
  OverdampedState start = lifted;
  start.t = initial.t;
  result.overdamped =
      simulate_overdamped(start, sys, over_params, output_points, cutoff);

  double sup = 0.0;
  for (size_t j = 0; j < result.gle.states.size(); ++j) {
    const double dist =
        (result.gle.states[j].x - result.overdamped.states[j].q).norm();
    sup = std::max(sup, dist);
  }
  result.sup_distance = sup;
  return result;
}

}  // namespace gle
