#include "gle/kernels.hpp"

#include <cmath>

namespace gle {

std::vector<int> KernelSpec::modes_per_particle() const {
  std::vector<int> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back(static_cast<int>(m.size()));
  return out;
}

void KernelSpec::validate() const {
  if (modes.empty())
    throw Error(ErrorKind::ValidationError, "kernel spec has no particles");
  for (const auto& particle_modes : modes) {
    if (particle_modes.empty())
      throw Error(ErrorKind::ValidationError,
                  "each particle needs at least one kernel mode");
    for (const auto& m : particle_modes)
      if (!(m.lambda > 0.0) || !(m.alpha > 0.0))
        throw Error(ErrorKind::ValidationError,
                    "kernel mode weights and rates must be positive");
  }
}

KernelSpec KernelSpec::uniform(int n_particles,
                               std::vector<KernelMode> shared) {
  KernelSpec spec;
  spec.modes.assign(static_cast<size_t>(n_particles), shared);
  spec.validate();
  return spec;
}

double kernel_eval(const KernelSpec& spec, int i, double t) {
  if (t < 0.0)
    throw Error(ErrorKind::NegativeTime, "kernel evaluated at negative time");
  double sum = 0.0;
  for (const auto& m : spec.modes[static_cast<size_t>(i)])
    sum += m.lambda * m.lambda * std::exp(-m.alpha * t);
  return sum;
}

double ou_exact_step(double z, double alpha, double dt, double xi) {
  const double decay = std::exp(-alpha * dt);
  return decay * z + std::sqrt(1.0 - decay * decay) * xi;
}

Eigen::MatrixXd sample_stationary_aux(const KernelSpec& spec, int i, int dim,
                                      RngStream& rng) {
  const int k = spec.mode_count(i);
  Eigen::MatrixXd z(dim, k);
  for (int l = 0; l < k; ++l)
    for (int c = 0; c < dim; ++c) z(c, l) = rng.normal();
  return z;
}

FdReport fluctuation_dissipation_check(const KernelSpec& spec, int i,
                                       const std::vector<double>& lags,
                                       int sample_count, RngStream& rng) {
  const auto& modes = spec.modes[static_cast<size_t>(i)];
  const int k = static_cast<int>(modes.size());

  std::vector<double> acc(lags.size(), 0.0);
  std::vector<double> z0(static_cast<size_t>(k));
  for (int s = 0; s < sample_count; ++s) {
    double f0 = 0.0;
    for (int l = 0; l < k; ++l) {
      z0[static_cast<size_t>(l)] = rng.normal();
      f0 += modes[static_cast<size_t>(l)].lambda * z0[static_cast<size_t>(l)];
    }
    for (size_t a = 0; a < lags.size(); ++a) {
      // E[F(tau) | z(0)] = sum_l lambda_l exp(-alpha_l tau) z_l(0)
      double cond = 0.0;
      for (int l = 0; l < k; ++l)
        cond += modes[static_cast<size_t>(l)].lambda *
                std::exp(-modes[static_cast<size_t>(l)].alpha * lags[a]) *
                z0[static_cast<size_t>(l)];
      acc[a] += f0 * cond;
    }
  }

  FdReport report;
  report.sample_count = sample_count;
  for (size_t a = 0; a < lags.size(); ++a) {
    FdRow row;
    row.lag = lags[a];
    row.empirical = acc[a] / sample_count;
    row.exact = kernel_eval(spec, i, lags[a]);
    row.rel_err = std::abs(row.empirical - row.exact) / std::abs(row.exact);
    report.max_rel_err = std::max(report.max_rel_err, row.rel_err);
    report.rows.push_back(row);
  }
  return report;
}

double fd_product_estimate(const KernelSpec& spec, int i, double lag,
                           int sample_count, RngStream& rng) {
  const auto& modes = spec.modes[static_cast<size_t>(i)];
  const int k = static_cast<int>(modes.size());
  double acc = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    double f0 = 0.0, ft = 0.0;
    for (int l = 0; l < k; ++l) {
      const double z0 = rng.normal();
      const double zt =
          ou_exact_step(z0, modes[static_cast<size_t>(l)].alpha, lag, rng.normal());
      f0 += modes[static_cast<size_t>(l)].lambda * z0;
      ft += modes[static_cast<size_t>(l)].lambda * zt;
    }
    acc += f0 * ft;
  }
  return acc / sample_count;
}

}  // namespace gle
