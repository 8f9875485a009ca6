#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace gle {

// Stateless counter-based randomness. Every random number in the library is a
// pure function of (seed, stream words, counter), which is what makes
// trajectories reproducible under adaptive stepping and thread scheduling.
uint64_t mix64(uint64_t x);
uint64_t counter_hash(uint64_t seed, uint64_t w0, uint64_t w1, uint64_t w2,
                      uint64_t w3);
double normal_from_counter(uint64_t seed, uint64_t w0, uint64_t w1,
                           uint64_t w2, uint64_t w3);

// Sequential stream view over the counter space. Substreams derived from
// (master seed, component tag, index) never collide.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(seed) {}
  RngStream(uint64_t master, uint64_t component, uint64_t index)
      : seed_(counter_hash(master, 0x9d5c0f2au, component, index, 0)) {}

  uint64_t next_u64() { return counter_hash(seed_, 0, 0, counter_++, 0); }
  // uniform on (0, 1]
  double uniform() {
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double normal();
  Eigen::VectorXd normal_vector(int n);
  // uniform direction on the unit sphere in R^d
  Eigen::VectorXd direction(int d);

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Address of a dyadic sub-interval of one base grid cell:
//   start = cell*base_width + index*base_width/2^level, width = base_width/2^level.
struct DyadicSpan {
  std::int64_t cell = 0;
  int level = 0;
  std::int64_t index = 0;
};

// One Brownian channel W(t) in R^dim sampled through a Levy bridge over the
// dyadic tree of a uniform base grid. Increments over any dyadic span are a
// pure function of (seed, channel, span), so two integrators consuming the
// same channel see bitwise-identical increments regardless of how finely
// either one subdivides, and sibling increments sum exactly to their parent.
class WienerChannel {
 public:
  WienerChannel(uint64_t seed, uint64_t channel_tag, int dim,
                double base_width);

  Eigen::VectorXd increment(const DyadicSpan& span) const;
  double base_width() const { return base_width_; }
  int dim() const { return dim_; }

 private:
  Eigen::VectorXd node(std::int64_t cell, int level, std::int64_t index) const;
  Eigen::VectorXd gauss(std::int64_t cell, int level, std::int64_t index) const;

  uint64_t channel_seed_;
  int dim_;
  double base_width_;
};

// The full noise bundle for an N-particle run: channel j = 0 drives the
// velocity (W_{i,0}), channels j = 1..k_i drive the memory variables.
class NoiseBundle {
 public:
  NoiseBundle(uint64_t seed, int n_particles, int dim,
              const std::vector<int>& modes_per_particle, double base_width);

  const WienerChannel& channel(int particle, int j) const;
  double base_width() const { return base_width_; }

 private:
  std::vector<WienerChannel> channels_;
  std::vector<int> offsets_;
  double base_width_;
};

}  // namespace gle
