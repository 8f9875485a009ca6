#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gle/errors.hpp"

namespace gle {

// ---------------------------------------------------------------------------
// Confining potential U: radial, even-polynomial, U >= 1 everywhere.
// U(x) = sum_j coeffs[j-1] * |x|^(2j) + shift, degree 2J = growth_exponent+1.
// ---------------------------------------------------------------------------

enum class ConfiningKind { Quadratic, EvenPolynomial };

struct ConfiningPotential {
  ConfiningKind kind = ConfiningKind::Quadratic;
  int growth_exponent = 1;        // lambda; polynomial degree is lambda + 1
  std::vector<double> coeffs;     // c_j on |x|^(2j), j = 1..(lambda+1)/2
  double shift = 1.0;             // additive constant keeping U >= 1
  double a1 = 1.0;                // growth bound constants
  double a2 = 1.0;
  double a3 = 0.0;

  static ConfiningPotential quadratic(double c = 0.5, double shift = 1.0);
  static ConfiningPotential even_polynomial(std::vector<double> coeffs,
                                            double shift = 1.0);
  void validate() const;
};

double u_value(const ConfiningPotential& pot, const Eigen::VectorXd& x);
Eigen::VectorXd u_grad(const ConfiningPotential& pot, const Eigen::VectorXd& x);
Eigen::MatrixXd u_hess(const ConfiningPotential& pot, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Singular repulsive pair potential G, radial and blowing up at the origin.
//   lennard-jones: strength*(|r|^-12 - 2|r|^-6) + shift
//   coulomb:       strength*|r|^-1 + shift
//   riesz(b1):     strength*|r|^-(b1-1) + shift       (b1 > 1)
//   log:           -strength*log|r| + shift           (b1 = 1)
// a4 is the leading force coefficient of the residual condition
//   |grad G(r) + a4 r/|r|^(b1+1)| <= a5 |r|^-b2 + a6.
// ---------------------------------------------------------------------------

enum class SingularKind { LennardJones, Coulomb, Riesz, Log };

struct SingularPotential {
  SingularKind kind = SingularKind::Coulomb;
  double strength = 1.0;
  double beta1 = 2.0;
  double beta2 = 0.0;
  double a1 = 2.0;
  double a4 = 1.0;
  double a5 = 0.0;
  double a6 = 0.0;
  double shift = 0.0;

  static SingularPotential lennard_jones(double strength = 1.0,
                                         double shift = 1.0);
  static SingularPotential coulomb(double strength = 1.0, double shift = 0.0);
  static SingularPotential riesz(double beta1, double strength = 1.0,
                                 double shift = 0.0);
  static SingularPotential log_potential(double a4 = 1.0, double shift = 0.0);
  void validate() const;

  // d = 1 with beta1 = 1 requires a4 > 1/2 for the small-mass suite
  bool small_mass_eligible(int dim) const;
};

double g_value(const SingularPotential& pot, const Eigen::VectorXd& r);
Eigen::VectorXd g_grad(const SingularPotential& pot, const Eigen::VectorXd& r);
Eigen::MatrixXd g_hess(const SingularPotential& pot, const Eigen::VectorXd& r);

// Radial value/derivatives g(rho), g'(rho), g''(rho); shared by the vector
// forms above and by the analytic operator-norm bounds in the validators.
double g_radial(const SingularPotential& pot, double rho);
double g_radial_d1(const SingularPotential& pot, double rho);
double g_radial_d2(const SingularPotential& pot, double rho);

// ---------------------------------------------------------------------------
// Assumption validators. Margin is bound minus attained value, so any
// negative margin (beyond float tolerance) is a violation.
// ---------------------------------------------------------------------------

struct BoundViolation {
  double radius = 0.0;
  double attained = 0.0;
  double bound = 0.0;
  std::string which;
};

struct BoundReport {
  std::string label;
  int n_samples = 0;
  double worst_margin = 0.0;
  std::vector<BoundViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Residual structure condition on grad G (the a4/a5/a6/beta2 inequality).
BoundReport verify_structure(const SingularPotential& pot,
                             const std::vector<Eigen::VectorXd>& samples);
// Growth and dissipativity bounds on U with the instance's a1, a2, a3.
BoundReport verify_confining_bounds(const ConfiningPotential& pot,
                                    const std::vector<double>& radii, int dim);
// Growth bounds on G, its gradient and Hessian with the instance's a1.
BoundReport verify_singular_bounds(const SingularPotential& pot,
                                   const std::vector<double>& radii, int dim);

// Log-spaced grid of radii, inclusive of both ends.
std::vector<double> log_grid(double lo, double hi, int n);

// ---------------------------------------------------------------------------
// Pair interactions. Positions are stored one particle per column (d x N).
// ---------------------------------------------------------------------------

// sum over j != i of grad G(x_i - x_j)
Eigen::VectorXd pair_force_sum(const SingularPotential& pot,
                               const Eigen::MatrixXd& positions, int i);

// All pair-gradient sums in one sweep using antisymmetry; also reports the
// minimum pair distance. This is the hot loop of the integrators.
struct PairFieldResult {
  Eigen::MatrixXd grad_sums;  // column i = sum_{j != i} grad G(x_i - x_j)
  double min_distance = 0.0;
  double energy = 0.0;  // sum over i < j of G(x_i - x_j)
};
PairFieldResult pair_field(const SingularPotential& pot,
                           const Eigen::MatrixXd& positions);

double min_pair_distance(const Eigen::MatrixXd& positions);

const char* to_string(SingularKind kind);
const char* to_string(ConfiningKind kind);

}  // namespace gle
