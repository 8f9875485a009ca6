#include "gle/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gle {

namespace {

constexpr double kZeroSeparation = 1e-300;

void check_separation(double rho) {
  if (!(rho >= kZeroSeparation))
    throw Error(ErrorKind::ZeroSeparation,
                "singular potential evaluated at zero separation");
}

// U is a polynomial in s = |x|^2: U = P(s) + shift with P(s) = sum c_j s^j.
// w(s) = 2 P'(s) gives grad U = w(s) x and hess U = w(s) I + 2 w'(s) x x^T,
// which stays smooth through x = 0.
double poly_w(const ConfiningPotential& pot, double s) {
  double w = 0.0, p = 1.0;
  for (size_t j = 0; j < pot.coeffs.size(); ++j) {
    w += 2.0 * static_cast<double>(j + 1) * pot.coeffs[j] * p;
    p *= s;
  }
  return w;
}

double poly_w_prime(const ConfiningPotential& pot, double s) {
  double w = 0.0, p = 1.0;
  for (size_t j = 1; j < pot.coeffs.size(); ++j) {
    w += 2.0 * static_cast<double>(j + 1) * static_cast<double>(j) *
         pot.coeffs[j] * p;
    p *= s;
  }
  return w;
}

}  // namespace

ConfiningPotential ConfiningPotential::quadratic(double c, double shift) {
  ConfiningPotential pot;
  pot.kind = ConfiningKind::Quadratic;
  pot.growth_exponent = 1;
  pot.coeffs = {c};
  pot.shift = shift;
  pot.a1 = std::max(1.0, c) + shift;
  pot.a2 = 2.0 * c;
  pot.a3 = 0.0;
  pot.validate();
  return pot;
}

ConfiningPotential ConfiningPotential::even_polynomial(
    std::vector<double> coeffs, double shift) {
  ConfiningPotential pot;
  pot.kind = ConfiningKind::EvenPolynomial;
  pot.coeffs = std::move(coeffs);
  pot.shift = shift;
  pot.growth_exponent = 2 * static_cast<int>(pot.coeffs.size()) - 1;
  // Loose but valid constants; verify_confining_bounds certifies them.
  double csum = 0.0;
  for (double c : pot.coeffs) csum += std::abs(c);
  const double lead = pot.coeffs.empty() ? 0.0 : pot.coeffs.back();
  pot.a1 = 2.0 * static_cast<double>(pot.coeffs.size() + 1) * (csum + shift) +
           1.0;
  pot.a2 = lead;
  pot.a3 = 2.0 * csum + 1.0;
  pot.validate();
  return pot;
}

void ConfiningPotential::validate() const {
  if (coeffs.empty())
    throw Error(ErrorKind::ValidationError, "confining potential needs at least one coefficient");
  for (double c : coeffs)
    if (c < 0.0)
      throw Error(ErrorKind::ValidationError, "confining coefficients must be nonnegative");
  if (coeffs.back() <= 0.0)
    throw Error(ErrorKind::ValidationError, "confining leading coefficient must be positive");
  if (shift < 1.0)
    throw Error(ErrorKind::ValidationError, "confining shift must keep U >= 1");
  if (growth_exponent != 2 * static_cast<int>(coeffs.size()) - 1)
    throw Error(ErrorKind::ValidationError, "growth exponent does not match polynomial degree");
  if (kind == ConfiningKind::Quadratic && growth_exponent != 1)
    throw Error(ErrorKind::ValidationError, "quadratic potential requires growth exponent 1");
}

double u_value(const ConfiningPotential& pot, const Eigen::VectorXd& x) {
  const double s = x.squaredNorm();
  double val = pot.shift, p = s;
  for (double c : pot.coeffs) {
    val += c * p;
    p *= s;
  }
  return val;
}

Eigen::VectorXd u_grad(const ConfiningPotential& pot, const Eigen::VectorXd& x) {
  return poly_w(pot, x.squaredNorm()) * x;
}

Eigen::MatrixXd u_hess(const ConfiningPotential& pot, const Eigen::VectorXd& x) {
  const double s = x.squaredNorm();
  const auto d = x.size();
  Eigen::MatrixXd h = poly_w(pot, s) * Eigen::MatrixXd::Identity(d, d);
  h += 2.0 * poly_w_prime(pot, s) * (x * x.transpose());
  return h;
}

SingularPotential SingularPotential::lennard_jones(double strength,
                                                   double shift) {
  SingularPotential pot;
  pot.kind = SingularKind::LennardJones;
  pot.strength = strength;
  pot.shift = shift;
  // |grad G| ~ 12 s rho^-13 at the origin, so the gradient bound needs
  // beta1 = 13; the residual against a4 r/|r|^14 is then exactly 12 s rho^-7.
  pot.beta1 = 13.0;
  pot.beta2 = 7.0;
  pot.a4 = 12.0 * strength;
  pot.a5 = 12.0 * strength;
  pot.a6 = 0.0;
  pot.a1 = 240.0 * strength + shift + 1.0;
  pot.validate();
  return pot;
}

SingularPotential SingularPotential::coulomb(double strength, double shift) {
  SingularPotential pot;
  pot.kind = SingularKind::Coulomb;
  pot.strength = strength;
  pot.shift = shift;
  pot.beta1 = 2.0;
  pot.beta2 = 0.0;
  pot.a4 = strength;
  pot.a5 = 0.0;
  pot.a6 = 0.0;
  pot.a1 = 2.0 * strength + std::abs(shift) + 1.0;
  pot.validate();
  return pot;
}

SingularPotential SingularPotential::riesz(double beta1, double strength,
                                           double shift) {
  if (!(beta1 > 1.0))
    throw Error(ErrorKind::ValidationError, "riesz potential requires beta1 > 1");
  SingularPotential pot;
  pot.kind = SingularKind::Riesz;
  pot.strength = strength;
  pot.shift = shift;
  pot.beta1 = beta1;
  pot.beta2 = 0.0;
  pot.a4 = strength * (beta1 - 1.0);
  pot.a5 = 0.0;
  pot.a6 = 0.0;
  pot.a1 = strength * beta1 * (beta1 + 1.0) + std::abs(shift) + 1.0;
  pot.validate();
  return pot;
}

SingularPotential SingularPotential::log_potential(double a4, double shift) {
  SingularPotential pot;
  pot.kind = SingularKind::Log;
  pot.strength = a4;
  pot.shift = shift;
  pot.beta1 = 1.0;
  pot.beta2 = 0.0;
  pot.a4 = a4;
  pot.a5 = 0.0;
  pot.a6 = 0.0;
  pot.a1 = 2.0 * a4 + std::abs(shift) + 1.0;
  pot.validate();
  return pot;
}

void SingularPotential::validate() const {
  if (strength <= 0.0)
    throw Error(ErrorKind::ValidationError, "singular potential strength must be positive");
  if (!(beta1 >= 1.0))
    throw Error(ErrorKind::ValidationError, "beta1 must be >= 1");
  if (!(beta2 >= 0.0 && beta2 < beta1))
    throw Error(ErrorKind::ValidationError, "beta2 must lie in [0, beta1)");
  if (a4 <= 0.0)
    throw Error(ErrorKind::ValidationError, "a4 must be positive");
}

bool SingularPotential::small_mass_eligible(int dim) const {
  if (dim == 1 && beta1 == 1.0) return a4 > 0.5;
  return true;
}

double g_radial(const SingularPotential& pot, double rho) {
  check_separation(rho);
  switch (pot.kind) {
    case SingularKind::LennardJones: {
      const double r6 = std::pow(rho, -6.0);
      return pot.strength * (r6 * r6 - 2.0 * r6) + pot.shift;
    }
    case SingularKind::Coulomb:
      return pot.strength / rho + pot.shift;
    case SingularKind::Riesz:
      return pot.strength * std::pow(rho, -(pot.beta1 - 1.0)) + pot.shift;
    case SingularKind::Log:
      return -pot.strength * std::log(rho) + pot.shift;
  }
  return 0.0;
}

double g_radial_d1(const SingularPotential& pot, double rho) {
  check_separation(rho);
  switch (pot.kind) {
    case SingularKind::LennardJones: {
      const double r7 = std::pow(rho, -7.0);
      const double r13 = std::pow(rho, -13.0);
      return pot.strength * (-12.0 * r13 + 12.0 * r7);
    }
    case SingularKind::Coulomb:
      return -pot.strength / (rho * rho);
    case SingularKind::Riesz:
      return -pot.strength * (pot.beta1 - 1.0) * std::pow(rho, -pot.beta1);
    case SingularKind::Log:
      return -pot.strength / rho;
  }
  return 0.0;
}

double g_radial_d2(const SingularPotential& pot, double rho) {
  check_separation(rho);
  switch (pot.kind) {
    case SingularKind::LennardJones: {
      const double r8 = std::pow(rho, -8.0);
      const double r14 = std::pow(rho, -14.0);
      return pot.strength * (156.0 * r14 - 84.0 * r8);
    }
    case SingularKind::Coulomb:
      return 2.0 * pot.strength * std::pow(rho, -3.0);
    case SingularKind::Riesz:
      return pot.strength * (pot.beta1 - 1.0) * pot.beta1 *
             std::pow(rho, -pot.beta1 - 1.0);
    case SingularKind::Log:
      return pot.strength / (rho * rho);
  }
  return 0.0;
}

double g_value(const SingularPotential& pot, const Eigen::VectorXd& r) {
  return g_radial(pot, r.norm());
}

Eigen::VectorXd g_grad(const SingularPotential& pot, const Eigen::VectorXd& r) {
  const double rho = r.norm();
  check_separation(rho);
  return (g_radial_d1(pot, rho) / rho) * r;
}

Eigen::MatrixXd g_hess(const SingularPotential& pot, const Eigen::VectorXd& r) {
  const double rho = r.norm();
  check_separation(rho);
  const auto d = r.size();
  const Eigen::VectorXd rhat = r / rho;
  const double g1 = g_radial_d1(pot, rho);
  const double g2 = g_radial_d2(pot, rho);
  Eigen::MatrixXd h = (g1 / rho) * Eigen::MatrixXd::Identity(d, d);
  h += (g2 - g1 / rho) * (rhat * rhat.transpose());
  return h;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(std::exp(llo + t * (lhi - llo)));
  }
  return out;
}

namespace {

void record(BoundReport& report, double radius, double attained, double bound,
            const char* which) {
  const double margin = bound - attained;
  if (report.n_samples == 0 || margin < report.worst_margin)
    report.worst_margin = margin;
  ++report.n_samples;
  const double tol = 1e-9 * (1.0 + std::abs(bound) + std::abs(attained));
  if (margin < -tol)
    report.violations.push_back({radius, attained, bound, which});
}

}  // namespace

BoundReport verify_structure(const SingularPotential& pot,
                             const std::vector<Eigen::VectorXd>& samples) {
  BoundReport report;
  report.label = std::string("structure:") + to_string(pot.kind);
  for (const auto& r : samples) {
    const double rho = r.norm();
    check_separation(rho);
    const Eigen::VectorXd residual_vec =
        g_grad(pot, r) + pot.a4 * r / std::pow(rho, pot.beta1 + 1.0);
    const double residual = residual_vec.norm();
    const double bound = pot.a5 * std::pow(rho, -pot.beta2) + pot.a6;
    record(report, rho, residual, bound, "residual");
  }
  return report;
}

BoundReport verify_confining_bounds(const ConfiningPotential& pot,
                                    const std::vector<double>& radii,
                                    int dim) {
  BoundReport report;
  report.label = std::string("confining:") + to_string(pot.kind);
  const double lam = static_cast<double>(pot.growth_exponent);
  for (double rho : radii) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    x[0] = rho;  // radial potential: one direction suffices
    const double u = u_value(pot, x);
    const double gnorm = u_grad(pot, x).norm();
    const double s = rho * rho;
    // analytic operator norm of the radial Hessian
    const double w = poly_w(pot, s);
    const double hnorm = std::max(std::abs(w), std::abs(w + 2.0 * poly_w_prime(pot, s) * s));
    record(report, rho, std::abs(u), pot.a1 * (1.0 + std::pow(rho, lam + 1.0)),
           "value");
    record(report, rho, gnorm, pot.a1 * (1.0 + std::pow(rho, lam)), "gradient");
    record(report, rho, hnorm, pot.a1 * (1.0 + std::pow(rho, lam - 1.0)),
           "hessian");
    // dissipativity: <grad U, x> >= a2 rho^(lambda+1) - a3
    const double inner = w * s;
    record(report, rho, pot.a2 * std::pow(rho, lam + 1.0) - pot.a3, inner,
           "dissipativity");
  }
  return report;
}

BoundReport verify_singular_bounds(const SingularPotential& pot,
                                   const std::vector<double>& radii, int dim) {
  BoundReport report;
  report.label = std::string("singular:") + to_string(pot.kind);
  (void)dim;
  for (double rho : radii) {
    const double val = std::abs(g_radial(pot, rho));
    const double g1 = std::abs(g_radial_d1(pot, rho));
    const double g2 = std::abs(g_radial_d2(pot, rho));
    const double hnorm = std::max(g2, g1 / rho);
    const double ib = std::pow(rho, -pot.beta1);
    record(report, rho, val, pot.a1 * (1.0 + rho + ib), "value");
    record(report, rho, g1, pot.a1 * (1.0 + ib), "gradient");
    record(report, rho, hnorm, pot.a1 * (1.0 + ib / rho), "hessian");
  }
  return report;
}

Eigen::VectorXd pair_force_sum(const SingularPotential& pot,
                               const Eigen::MatrixXd& positions, int i) {
  const auto n = positions.cols();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(positions.rows());
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    const Eigen::VectorXd r = positions.col(i) - positions.col(j);
    if (!(r.norm() >= kZeroSeparation))
      throw Error(ErrorKind::CoincidentParticles,
                  "coincident particles in pair force sum");
    sum += g_grad(pot, r);
  }
  return sum;
}

PairFieldResult pair_field(const SingularPotential& pot,
                           const Eigen::MatrixXd& positions) {
  const auto n = positions.cols();
  const auto d = positions.rows();
  PairFieldResult out;
  out.grad_sums = Eigen::MatrixXd::Zero(d, n);
  out.min_distance = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::VectorXd r = positions.col(i) - positions.col(j);
      const double rho = r.norm();
      out.min_distance = std::min(out.min_distance, rho);
      if (!(rho >= kZeroSeparation))
        throw Error(ErrorKind::CoincidentParticles,
                    "coincident particles in pair field");
      const Eigen::VectorXd g = (g_radial_d1(pot, rho) / rho) * r;
      out.grad_sums.col(i) += g;
      out.grad_sums.col(j) -= g;  // grad G is antisymmetric in the pair
      out.energy += g_radial(pot, rho);
    }
  }
  return out;
}

double min_pair_distance(const Eigen::MatrixXd& positions) {
  const auto n = positions.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      best = std::min(best, (positions.col(i) - positions.col(j)).norm());
  return best;
}

const char* to_string(SingularKind kind) {
  switch (kind) {
    case SingularKind::LennardJones: return "lennard-jones";
    case SingularKind::Coulomb: return "coulomb";
    case SingularKind::Riesz: return "riesz";
    case SingularKind::Log: return "log";
  }
  return "?";
}

const char* to_string(ConfiningKind kind) {
  switch (kind) {
    case ConfiningKind::Quadratic: return "quadratic";
    case ConfiningKind::EvenPolynomial: return "even-polynomial";
  }
  return "?";
}

}  // namespace gle
