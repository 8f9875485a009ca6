#include "gle/rng.hpp"

#include <cmath>

namespace gle {

uint64_t mix64(uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t counter_hash(uint64_t seed, uint64_t w0, uint64_t w1, uint64_t w2,
                      uint64_t w3) {
  uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ull);
  h = mix64(h ^ w0);
  h = mix64(h ^ w1);
  h = mix64(h ^ w2);
  h = mix64(h ^ w3);
  return h;
}

double normal_from_counter(uint64_t seed, uint64_t w0, uint64_t w1,
                           uint64_t w2, uint64_t w3) {
  const uint64_t h1 = counter_hash(seed, w0, w1, w2, w3);
  const uint64_t h2 = counter_hash(seed ^ 0x517cc1b727220a95ull, w0, w1, w2, w3);
  const double u1 = 1.0 - static_cast<double>(h1 >> 11) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(6.283185307179586477 * u2);
  has_spare_ = true;
  return r * std::cos(6.283185307179586477 * u2);
}

Eigen::VectorXd RngStream::normal_vector(int n) {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = normal();
  return out;
}

Eigen::VectorXd RngStream::direction(int d) {
  while (true) {
    Eigen::VectorXd v = normal_vector(d);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

WienerChannel::WienerChannel(uint64_t seed, uint64_t channel_tag, int dim,
                             double base_width)
    : channel_seed_(counter_hash(seed, 0x57u, channel_tag, 0, 0)),
      dim_(dim),
      base_width_(base_width) {}

Eigen::VectorXd WienerChannel::gauss(std::int64_t cell, int level,
                                     std::int64_t index) const {
  Eigen::VectorXd out(dim_);
  for (int c = 0; c < dim_; ++c)
    out[c] = normal_from_counter(channel_seed_, static_cast<uint64_t>(cell),
                                 static_cast<uint64_t>(level),
                                 static_cast<uint64_t>(index),
                                 static_cast<uint64_t>(c));
  return out;
}

Eigen::VectorXd WienerChannel::node(std::int64_t cell, int level,
                                    std::int64_t index) const {
  if (level == 0) return std::sqrt(base_width_) * gauss(cell, 0, 0);
  // Levy bridge: left child = parent/2 + N(0, parent_width/4),
  // right child = parent - left, so siblings always sum to the parent.
  // The bridge normal is keyed by the even index of the sibling pair so both
  // children derive the same one.
  const Eigen::VectorXd parent = node(cell, level - 1, index >> 1);
  const double parent_width =
      base_width_ / static_cast<double>(1ll << (level - 1));
  const Eigen::VectorXd left =
      0.5 * parent +
      0.5 * std::sqrt(parent_width) * gauss(cell, level, index & ~1ll);
  if ((index & 1) == 0) return left;
  return parent - left;
}

Eigen::VectorXd WienerChannel::increment(const DyadicSpan& span) const {
  return node(span.cell, span.level, span.index);
}

NoiseBundle::NoiseBundle(uint64_t seed, int n_particles, int dim,
                         const std::vector<int>& modes_per_particle,
                         double base_width)
    : base_width_(base_width) {
  offsets_.resize(static_cast<size_t>(n_particles) + 1, 0);
  for (int i = 0; i < n_particles; ++i)
    offsets_[static_cast<size_t>(i) + 1] =
        offsets_[static_cast<size_t>(i)] + modes_per_particle[static_cast<size_t>(i)] + 1;
  channels_.reserve(static_cast<size_t>(offsets_.back()));
  for (int i = 0; i < n_particles; ++i) {
    const int k = modes_per_particle[static_cast<size_t>(i)];
    for (int j = 0; j <= k; ++j) {
      const uint64_t tag = (static_cast<uint64_t>(i) << 20) | static_cast<uint64_t>(j);
      channels_.emplace_back(seed, tag, dim, base_width);
    }
  }
}

const WienerChannel& NoiseBundle::channel(int particle, int j) const {
  return channels_[static_cast<size_t>(offsets_[static_cast<size_t>(particle)] + j)];
}

}  // namespace gle
