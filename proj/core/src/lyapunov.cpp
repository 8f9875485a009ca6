#include "gle/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gle {

void LyapunovParams::validate(bool needs_R) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::ValidationError, "epsilon must lie in (0,1)");
  if (needs_R && !(R > 1.0))
    throw Error(ErrorKind::ValidationError, "R must exceed 1");
  if (!(kappa > 0.0 && kappa < 1.0))
    throw Error(ErrorKind::ValidationError, "kappa must lie in (0,1)");
}

GeneratorInput GeneratorInput::zero(const System& sys) {
  GeneratorInput g;
  g.grad_x = Eigen::MatrixXd::Zero(sys.d, sys.n);
  g.grad_v = Eigen::MatrixXd::Zero(sys.d, sys.n);
  g.lap_v = Eigen::VectorXd::Zero(sys.n);
  for (int i = 0; i < sys.n; ++i) {
    const int k = sys.kernels.mode_count(i);
    g.grad_z.push_back(Eigen::MatrixXd::Zero(sys.d, k));
    g.lap_z.push_back(Eigen::VectorXd::Zero(k));
  }
  return g;
}

namespace {

void check_dims(const GeneratorInput& in, const PhaseState& state,
                const System& sys) {
  if (in.grad_x.rows() != sys.d || in.grad_x.cols() != sys.n ||
      in.grad_v.rows() != sys.d || in.grad_v.cols() != sys.n ||
      in.lap_v.size() != sys.n ||
      static_cast<int>(in.grad_z.size()) != sys.n ||
      static_cast<int>(in.lap_z.size()) != sys.n ||
      state.x.cols() != sys.n || state.x.rows() != sys.d)
    throw Error(ErrorKind::DimensionMismatch,
                "generator input does not match system dimensions");
  for (int i = 0; i < sys.n; ++i) {
    const int k = sys.kernels.mode_count(i);
    if (in.grad_z[static_cast<size_t>(i)].cols() != k ||
        in.lap_z[static_cast<size_t>(i)].size() != k)
      throw Error(ErrorKind::DimensionMismatch,
                  "generator input memory block does not match mode count");
  }
}

void axpy(double a, const GeneratorInput& g, GeneratorInput& out) {
  out.grad_x += a * g.grad_x;
  out.grad_v += a * g.grad_v;
  out.lap_v += a * g.lap_v;
  for (size_t i = 0; i < g.grad_z.size(); ++i) {
    out.grad_z[i] += a * g.grad_z[i];
    out.lap_z[i] += a * g.lap_z[i];
  }
}

struct EnergyParts {
  double u_sum = 0.0;
  double g_sum = 0.0;
  Eigen::MatrixXd grad_x;  // gradient of (sum U + sum G) per particle
};

EnergyParts energy_parts(const PhaseState& state, const System& sys) {
  EnergyParts parts;
  parts.grad_x = Eigen::MatrixXd::Zero(sys.d, sys.n);
  for (int i = 0; i < sys.n; ++i) {
    parts.u_sum += u_value(sys.confining, state.x.col(i));
    parts.grad_x.col(i) = u_grad(sys.confining, state.x.col(i));
  }
  if (sys.singular) {
    if (sys.singular_at_origin()) {
      parts.g_sum = g_value(*sys.singular, state.x.col(0));
      parts.grad_x.col(0) += g_grad(*sys.singular, state.x.col(0));
    } else {
      const PairFieldResult pf = pair_field(*sys.singular, state.x);
      parts.g_sum = pf.energy;
      parts.grad_x += pf.grad_sums;
    }
  }
  return parts;
}

struct PairGeometry {
  double P = 0.0;                  // sum_i <v_i, u_i>
  std::vector<Eigen::VectorXd> u;  // unit-vector sums per particle
  Eigen::MatrixXd gPx;             // grad_x of P
};

PairGeometry pair_geometry(const PhaseState& state, const System& sys) {
  PairGeometry geo;
  geo.u.assign(static_cast<size_t>(sys.n), Eigen::VectorXd::Zero(sys.d));
  geo.gPx = Eigen::MatrixXd::Zero(sys.d, sys.n);
  if (sys.singular_at_origin()) {
    const Eigen::VectorXd x = state.x.col(0);
    const double rho = x.norm();
    if (!(rho > 0.0))
      throw Error(ErrorKind::CoincidentParticles, "particle at the origin");
    const Eigen::VectorXd e = x / rho;
    const Eigen::VectorXd v = state.v.col(0);
    geo.u[0] = e;
    geo.gPx.col(0) = (v - e * e.dot(v)) / rho;
    geo.P = e.dot(v);
    return geo;
  }
  for (int i = 0; i < sys.n; ++i) {
    for (int j = i + 1; j < sys.n; ++j) {
      const Eigen::VectorXd r = state.x.col(i) - state.x.col(j);
      const double rho = r.norm();
      if (!(rho > 0.0))
        throw Error(ErrorKind::CoincidentParticles,
                    "coincident particles in candidate evaluation");
      const Eigen::VectorXd e = r / rho;
      geo.u[static_cast<size_t>(i)] += e;
      geo.u[static_cast<size_t>(j)] -= e;
      const Eigen::VectorXd dv = state.v.col(i) - state.v.col(j);
      const Eigen::VectorXd g = (dv - e * e.dot(dv)) / rho;
      geo.gPx.col(i) += g;
      geo.gPx.col(j) -= g;
    }
  }
  for (int i = 0; i < sys.n; ++i)
    geo.P += state.v.col(i).dot(geo.u[static_cast<size_t>(i)]);
  return geo;
}

// H_N with full derivative set.
CandidateEval eval_hamiltonian(const PhaseState& state, const System& sys,
                               double m) {
  const EnergyParts parts = energy_parts(state, sys);
  CandidateEval out;
  out.derivs = GeneratorInput::zero(sys);
  double zsq = 0.0;
  for (const auto& zi : state.z) zsq += zi.squaredNorm();
  out.value = 0.5 * m * state.v.squaredNorm() + parts.u_sum + parts.g_sum +
              0.5 * zsq;
  out.derivs.grad_x = parts.grad_x;
  out.derivs.grad_v = m * state.v;
  out.derivs.lap_v.setConstant(m * sys.d);
  for (int i = 0; i < sys.n; ++i) {
    out.derivs.grad_z[static_cast<size_t>(i)] = state.z[static_cast<size_t>(i)];
    out.derivs.lap_z[static_cast<size_t>(i)].setConstant(sys.d);
  }
  return out;
}

// T1 = <x, v>
CandidateEval eval_xv(const PhaseState& state, const System& sys) {
  CandidateEval out;
  out.derivs = GeneratorInput::zero(sys);
  out.value = (state.x.array() * state.v.array()).sum();
  out.derivs.grad_x = state.v;
  out.derivs.grad_v = state.x;
  return out;
}

// T2 = sum_i <v_i, z_{i,1}>
CandidateEval eval_vz1(const PhaseState& state, const System& sys) {
  CandidateEval out;
  out.derivs = GeneratorInput::zero(sys);
  for (int i = 0; i < sys.n; ++i) {
    const Eigen::VectorXd z1 = state.z[static_cast<size_t>(i)].col(0);
    out.value += state.v.col(i).dot(z1);
    out.derivs.grad_v.col(i) = z1;
    out.derivs.grad_z[static_cast<size_t>(i)].col(0) = state.v.col(i);
  }
  return out;
}

// P = sum_i <v_i, u_i>; u from the pair geometry (origin for n = 1).
CandidateEval eval_P(const PhaseState& state, const System& sys,
                     const PairGeometry& geo) {
  CandidateEval out;
  out.derivs = GeneratorInput::zero(sys);
  out.value = geo.P;
  out.derivs.grad_x = geo.gPx;
  for (int i = 0; i < sys.n; ++i)
    out.derivs.grad_v.col(i) = geo.u[static_cast<size_t>(i)];
  return out;
}

// W = P * sqrt(Q) with Q = cz * sum_i |z_{i,1}|^2 + m|v|^2 + 2 sum U
//                         + 2 sum G + c0.
CandidateEval eval_P_sqrtQ(const PhaseState& state, const System& sys,
                           double m, double cz, double c0,
                           const PairGeometry& geo) {
  const EnergyParts parts = energy_parts(state, sys);
  double z1sq = 0.0;
  for (const auto& zi : state.z) z1sq += zi.col(0).squaredNorm();
  const double Q = cz * z1sq + m * state.v.squaredNorm() +
                   2.0 * (parts.u_sum + parts.g_sum) + c0;
  if (!(Q > 0.0))
    throw Error(ErrorKind::NonPositiveRadicand,
                "radicand of the Lyapunov square root is not positive; "
                "check the potential shift constants");
  const double S = std::sqrt(Q);
  const double P = geo.P;

  CandidateEval out;
  out.derivs = GeneratorInput::zero(sys);
  out.value = P * S;
  for (int i = 0; i < sys.n; ++i) {
    // grad(W) = S grad(P) + P grad(Q) / (2S)
    out.derivs.grad_x.col(i) =
        S * geo.gPx.col(i) + (P / S) * parts.grad_x.col(i);
    out.derivs.grad_v.col(i) = S * geo.u[static_cast<size_t>(i)] +
                               (P / S) * m * state.v.col(i);
    const Eigen::VectorXd z1 = state.z[static_cast<size_t>(i)].col(0);
    out.derivs.grad_z[static_cast<size_t>(i)].col(0) = (P / S) * cz * z1;
    // Laplacians through the product and the square-root composition
    out.derivs.lap_v[i] =
        2.0 * m * geo.u[static_cast<size_t>(i)].dot(state.v.col(i)) / S +
        P * (m * sys.d / S -
             m * m * state.v.col(i).squaredNorm() / (S * S * S));
    out.derivs.lap_z[static_cast<size_t>(i)][0] =
        P * (cz * sys.d / S - cz * cz * z1.squaredNorm() / (S * S * S));
  }
  return out;
}

void require(bool cond, const char* msg) {
  if (!cond) throw Error(ErrorKind::RegimeMismatch, msg);
}

}  // namespace

double hamiltonian_N(const PhaseState& state, const System& sys, double m) {
  return eval_hamiltonian(state, sys, m).value;
}

double generator_apply(const GeneratorInput& input, const PhaseState& state,
                       const System& sys, double m, double gamma) {
  check_dims(input, state, sys);
  const Eigen::MatrixXd force = gle_force_field(sys, state.x, state.z, nullptr);
  double acc = 0.0;
  for (int i = 0; i < sys.n; ++i) {
    acc += input.grad_x.col(i).dot(state.v.col(i));
    acc += input.grad_v.col(i).dot(-gamma * state.v.col(i) + force.col(i)) / m;
    acc += gamma / (m * m) * input.lap_v[i];
    const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
    const auto& gz = input.grad_z[static_cast<size_t>(i)];
    const auto& zi = state.z[static_cast<size_t>(i)];
    for (size_t l = 0; l < modes.size(); ++l) {
      const auto lc = static_cast<Eigen::Index>(l);
      acc += gz.col(lc).dot(-modes[l].alpha * zi.col(lc) -
                            modes[l].lambda * state.v.col(i));
      acc += modes[l].alpha * input.lap_z[static_cast<size_t>(i)][lc];
    }
  }
  return acc;
}

double closed_form_LHN(const PhaseState& state, const System& sys, double m,
                       double gamma) {
  double zterm = 0.0, alpha_sum = 0.0;
  for (int i = 0; i < sys.n; ++i) {
    const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
    const auto& zi = state.z[static_cast<size_t>(i)];
    for (size_t l = 0; l < modes.size(); ++l) {
      zterm +=
          modes[l].alpha * zi.col(static_cast<Eigen::Index>(l)).squaredNorm();
      alpha_sum += modes[l].alpha;
    }
  }
  return -gamma * state.v.squaredNorm() - zterm + gamma * sys.n * sys.d / m +
         sys.d * alpha_sum;
}

double closed_form_Lmxv(const PhaseState& state, const System& sys, double m,
                        double gamma) {
  double acc = m * state.v.squaredNorm();
  acc -= gamma * (state.x.array() * state.v.array()).sum();
  for (int i = 0; i < sys.n; ++i) {
    acc -= state.x.col(i).dot(u_grad(sys.confining, state.x.col(i)));
    const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
    const auto& zi = state.z[static_cast<size_t>(i)];
    for (size_t l = 0; l < modes.size(); ++l)
      acc += modes[l].lambda *
             state.x.col(i).dot(zi.col(static_cast<Eigen::Index>(l)));
  }
  if (sys.singular) {
    if (sys.singular_at_origin()) {
      acc -= state.x.col(0).dot(g_grad(*sys.singular, state.x.col(0)));
    } else {
      for (int i = 0; i < sys.n; ++i)
        for (int j = i + 1; j < sys.n; ++j) {
          const Eigen::VectorXd r = state.x.col(i) - state.x.col(j);
          acc -= r.dot(g_grad(*sys.singular, r));
        }
    }
  }
  return acc;
}

CandidateEval eval_candidate(Candidate which, const PhaseState& state,
                             const System& sys, double m,
                             const LyapunovParams& params) {
  const bool needs_R = which == Candidate::VN2 || which == Candidate::V2;
  params.validate(needs_R);
  CandidateEval out = eval_hamiltonian(state, sys, m);
  if (which == Candidate::HN) return out;

  const double eps = params.epsilon;
  const double R = params.R;
  const PairGeometry geo =
      (sys.singular || sys.n > 1) ? pair_geometry(state, sys) : PairGeometry{};

  switch (which) {
    case Candidate::VN1:
    case Candidate::V1: {
      // H + eps m <x,v> - eps m P
      const CandidateEval t1 = eval_xv(state, sys);
      out.value += eps * m * t1.value;
      axpy(eps * m, t1.derivs, out.derivs);
      if (sys.singular || sys.n > 1) {
        const CandidateEval p = eval_P(state, sys, geo);
        out.value -= eps * m * p.value;
        axpy(-eps * m, p.derivs, out.derivs);
      }
      break;
    }
    case Candidate::VN2:
    case Candidate::V2: {
      // H + eps R m <x,v> + eps R^2 m T2 - eps m P sqrt(Q)
      const CandidateEval t1 = eval_xv(state, sys);
      out.value += eps * R * m * t1.value;
      axpy(eps * R * m, t1.derivs, out.derivs);
      const CandidateEval t2 = eval_vz1(state, sys);
      out.value += eps * R * R * m * t2.value;
      axpy(eps * R * R * m, t2.derivs, out.derivs);
      const double cz = which == Candidate::VN2 ? std::pow(R, 6.0)
                                                : std::pow(R, 4.0);
      const double c0 = which == Candidate::VN2 ? R * R : R;
      const CandidateEval w = eval_P_sqrtQ(state, sys, m, cz, c0, geo);
      out.value -= eps * m * w.value;
      axpy(-eps * m, w.derivs, out.derivs);
      break;
    }
    case Candidate::HN:
      break;
  }
  return out;
}

double v1_eval(const PhaseState& state, const System& sys, double m,
               const LyapunovParams& params) {
  require(sys.n == 1, "V1 is the single-particle candidate");
  return eval_candidate(Candidate::V1, state, sys, m, params).value;
}

double v2_eval(const PhaseState& state, const System& sys, double m,
               const LyapunovParams& params) {
  require(sys.n == 1, "V2 is the single-particle candidate");
  return eval_candidate(Candidate::V2, state, sys, m, params).value;
}

double vN1_eval(const PhaseState& state, const System& sys, double m,
                const LyapunovParams& params) {
  return eval_candidate(Candidate::VN1, state, sys, m, params).value;
}

double vN2_eval(const PhaseState& state, const System& sys, double m,
                const LyapunovParams& params) {
  return eval_candidate(Candidate::VN2, state, sys, m, params).value;
}

namespace {

double quadratic_parts(const OverdampedState& state, const System& sys,
                       double gamma) {
  double acc = 0.5 * gamma * state.q.squaredNorm();
  for (int i = 0; i < sys.n; ++i) {
    const auto& modes = sys.kernels.modes[static_cast<size_t>(i)];
    const auto& fi = state.f[static_cast<size_t>(i)];
    for (size_t l = 0; l < modes.size(); ++l)
      acc += 0.5 / modes[l].alpha *
             fi.col(static_cast<Eigen::Index>(l)).squaredNorm();
  }
  return acc;
}

}  // namespace

double gamma1_eval(const OverdampedState& state, const System& sys,
                   double gamma, const LyapunovParams& params) {
  params.validate(false);
  if (!sys.singular || !(sys.singular->beta1 > 1.0))
    throw Error(ErrorKind::WrongBetaRegime, "Gamma1 requires beta1 > 1");
  double acc = quadratic_parts(state, sys, gamma);
  const double p = sys.singular->beta1 - 1.0;
  for (int i = 0; i < sys.n; ++i)
    for (int j = i + 1; j < sys.n; ++j) {
      const double rho = (state.q.col(i) - state.q.col(j)).norm();
      if (!(rho > 0.0))
        throw Error(ErrorKind::CoincidentParticles, "coincident particles");
      acc += params.epsilon * gamma * std::pow(rho, -p);
    }
  return acc;
}

double gamma2_eval(const OverdampedState& state, const System& sys,
                   double gamma, const LyapunovParams& params) {
  params.validate(false);
  if (!sys.singular || sys.singular->beta1 != 1.0)
    throw Error(ErrorKind::WrongBetaRegime, "Gamma2 requires beta1 = 1");
  double acc = quadratic_parts(state, sys, gamma);
  for (int i = 0; i < sys.n; ++i)
    for (int j = i + 1; j < sys.n; ++j) {
      const double rho = (state.q.col(i) - state.q.col(j)).norm();
      if (!(rho > 0.0))
        throw Error(ErrorKind::CoincidentParticles, "coincident particles");
      acc -= params.epsilon * gamma * std::log(rho);
    }
  return acc;
}

// ---------------------------------------------------------------------------
// drift scan
// ---------------------------------------------------------------------------

namespace {

double log_uniform(RngStream& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

void check_regime(Candidate which, const System& sys, double gamma) {
  switch (which) {
    case Candidate::VN1:
      require(gamma > 0.0, "VN1 requires gamma > 0");
      break;
    case Candidate::VN2:
      require(gamma == 0.0, "VN2 requires gamma = 0");
      require(sys.confining.growth_exponent == 1,
              "VN2 requires a quadratic confining potential");
      break;
    case Candidate::V1:
      require(sys.n == 1 && gamma > 0.0, "V1 requires n = 1 and gamma > 0");
      break;
    case Candidate::V2:
      require(sys.n == 1 && gamma == 0.0 &&
                  sys.confining.growth_exponent == 1,
              "V2 requires n = 1, gamma = 0 and a quadratic potential");
      break;
    case Candidate::HN:
      break;
  }
}

Eigen::VectorXd flatten_state(const PhaseState& s) {
  Eigen::Index zsize = 0;
  for (const auto& zi : s.z) zsize += zi.size();
  Eigen::VectorXd out(s.x.size() + s.v.size() + zsize);
  Eigen::Index at = 0;
  out.segment(at, s.x.size()) = Eigen::Map<const Eigen::VectorXd>(s.x.data(), s.x.size());
  at += s.x.size();
  out.segment(at, s.v.size()) = Eigen::Map<const Eigen::VectorXd>(s.v.data(), s.v.size());
  at += s.v.size();
  for (const auto& zi : s.z) {
    out.segment(at, zi.size()) = Eigen::Map<const Eigen::VectorXd>(zi.data(), zi.size());
    at += zi.size();
  }
  return out;
}

}  // namespace

PhaseState sample_scan_state(const System& sys, const ScanSettings& settings,
                             RngStream& rng) {
  PhaseState s = PhaseState::zero(sys);
  if (sys.n == 1) {
    const bool near = rng.uniform() < settings.near_fraction;
    const double rho = near
                           ? log_uniform(rng, settings.near_lo, settings.near_hi)
                           : log_uniform(rng, settings.radius_lo, settings.radius_hi);
    s.x.col(0) = rho * rng.direction(sys.d);
  } else {
    const Eigen::VectorXd center =
        log_uniform(rng, settings.radius_lo, settings.radius_hi) *
        rng.direction(sys.d);
    s.x.col(0) = center;
    for (int i = 1; i < sys.n; ++i) {
      const bool near = rng.uniform() < settings.near_fraction;
      const double sep =
          near ? log_uniform(rng, settings.near_lo, settings.near_hi)
               : log_uniform(rng, settings.near_hi, settings.radius_hi);
      s.x.col(i) = s.x.col(i - 1) + sep * rng.direction(sys.d);
    }
  }
  if (rng.uniform() >= settings.rest_fraction) {
    for (int i = 0; i < sys.n; ++i) {
      s.v.col(i) = (settings.speed_hi * rng.uniform()) * rng.direction(sys.d);
      auto& zi = s.z[static_cast<size_t>(i)];
      for (Eigen::Index l = 0; l < zi.cols(); ++l)
        zi.col(l) = (settings.speed_hi * rng.uniform()) * rng.direction(sys.d);
    }
  }
  return s;
}

ScanReport drift_scan(Candidate which, const System& sys, double m,
                      double gamma, const LyapunovParams& params,
                      const ScanSettings& settings) {
  sys.validate();
  check_regime(which, sys, gamma);
  ScanReport report;
  report.candidate = which;
  report.params = params;
  report.n_samples = settings.n_samples;
  report.min_value = std::numeric_limits<double>::infinity();

  RngStream rng(settings.seed, 0x5ca1, 0);
  std::vector<PhaseState> states;
  states.reserve(static_cast<size_t>(settings.n_samples));
  std::vector<double> values(static_cast<size_t>(settings.n_samples));
  std::vector<double> drifts(static_cast<size_t>(settings.n_samples));
  for (int k = 0; k < settings.n_samples; ++k) {
    PhaseState s = sample_scan_state(sys, settings, rng);
    const CandidateEval eval = eval_candidate(which, s, sys, m, params);
    values[static_cast<size_t>(k)] = eval.value;
    drifts[static_cast<size_t>(k)] =
        generator_apply(eval.derivs, s, sys, m, gamma);
    report.min_value = std::min(report.min_value, eval.value);
    states.push_back(std::move(s));
  }

  // top quintile by V carries the asymptotic drift information
  std::vector<double> sorted = values;
  std::nth_element(sorted.begin(),
                   sorted.begin() + static_cast<long>(sorted.size() * 4 / 5),
                   sorted.end());
  const double v_threshold = sorted[sorted.size() * 4 / 5];

  double worst_ratio = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < values.size(); ++k) {
    if (values[k] < v_threshold) continue;
    if (values[k] <= 0.0) {
      worst_ratio = std::numeric_limits<double>::infinity();
      continue;
    }
    worst_ratio = std::max(worst_ratio, drifts[k] / values[k]);
  }
  report.c_fit = -worst_ratio;

  if (report.c_fit > 0.0) {
    double D = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < values.size(); ++k)
      D = std::max(D, drifts[k] + report.c_fit * values[k]);
    report.D_fit = D;
    return report;  // bound holds on every sample by construction
  }

  // candidate fails: report the high-energy samples with nonnegative drift
  double D = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < values.size(); ++k) {
    D = std::max(D, drifts[k]);
    if (values[k] < v_threshold) continue;
    const bool bad = values[k] <= 0.0 || drifts[k] / values[k] >= 0.0;
    if (!bad) continue;
    ++report.violation_count;
    if (report.violations.size() < 16) {
      ScanViolation v;
      v.sample_index = static_cast<int>(k);
      v.V = values[k];
      v.LV = drifts[k];
      v.margin = values[k] > 0.0 ? drifts[k] / values[k]
                                 : std::numeric_limits<double>::infinity();
      v.state_flat = flatten_state(states[k]);
      report.violations.push_back(std::move(v));
    }
  }
  report.D_fit = D;
  return report;
}

std::vector<ScanReport> drift_scan_grid(Candidate which, const System& sys,
                                        double m, double gamma,
                                        const std::vector<double>& eps_grid,
                                        const std::vector<double>& R_grid,
                                        const ScanSettings& settings) {
  const bool needs_R = which == Candidate::VN2 || which == Candidate::V2;
  std::vector<ScanReport> reports;
  for (double eps : eps_grid) {
    if (needs_R) {
      for (double R : R_grid) {
        LyapunovParams p;
        p.epsilon = eps;
        p.R = R;
        reports.push_back(drift_scan(which, sys, m, gamma, p, settings));
      }
    } else {
      LyapunovParams p;
      p.epsilon = eps;
      reports.push_back(drift_scan(which, sys, m, gamma, p, settings));
    }
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const ScanReport& a, const ScanReport& b) {
                     if (a.ok() != b.ok()) return a.ok();
                     if (a.ok()) return a.c_fit > b.c_fit;
                     return a.violation_count < b.violation_count;
                   });
  return reports;
}

const char* to_string(Candidate c) {
  switch (c) {
    case Candidate::HN: return "hn";
    case Candidate::VN1: return "vn1";
    case Candidate::VN2: return "vn2";
    case Candidate::V1: return "v1";
    case Candidate::V2: return "v2";
  }
  return "?";
}

}  // namespace gle
