#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "gle/errors.hpp"
#include "gle/kernels.hpp"
#include "gle/potentials.hpp"

namespace gle {

// The simulated system: N particles in R^d, confining potential U, repulsive
// pair potential G, exponential-sum kernels. With a single particle the
// singular potential acts on the position itself (repulsion from the origin),
// matching the single-particle form of the dynamics.
struct System {
  int n = 2;
  int d = 1;
  ConfiningPotential confining;
  std::optional<SingularPotential> singular;
  KernelSpec kernels;

  bool singular_at_origin() const { return n == 1 && singular.has_value(); }
  void validate() const;
};

// Phase point (x, v, z_1..z_N): one particle per column, memory variables as
// d x k_i blocks.
struct PhaseState {
  Eigen::MatrixXd x;               // d x N
  Eigen::MatrixXd v;               // d x N
  std::vector<Eigen::MatrixXd> z;  // N entries, d x k_i
  double t = 0.0;

  int dim() const { return static_cast<int>(x.rows()); }
  int particles() const { return static_cast<int>(x.cols()); }
  bool finite() const;
  static PhaseState zero(const System& sys);
};

// Overdamped phase point (q, f_1..f_N).
struct OverdampedState {
  Eigen::MatrixXd q;
  std::vector<Eigen::MatrixXd> f;
  double t = 0.0;

  int dim() const { return static_cast<int>(q.rows()); }
  int particles() const { return static_cast<int>(q.cols()); }
  bool finite() const;
};

// Collision guard distance for a state: minimum pair separation, or distance
// to the origin in single-particle origin mode.
double guard_distance(const System& sys, const Eigen::MatrixXd& positions);

void check_in_domain(const System& sys, const Eigen::MatrixXd& positions);

}  // namespace gle
