#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "nvrcg/cone_order.hpp"

namespace nvrcg {

/// Seeded generator used for every random quantity in the project.
///
/// The engine is std::mt19937_64 keyed through SplitMix64, and child streams
/// are derived with `split`, so run i of an experiment sees the same numbers
/// regardless of how runs are scheduled. Normals use Box-Muller on 53-bit
/// uniforms so the stream does not depend on library distribution internals.
class Rng {
 public:
  static constexpr std::string_view kName = "splitmix64+mt19937_64/v1";

  explicit Rng(std::uint64_t seed);

  /// Independent child stream identified by `stream`.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  ///< in [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

  Vector normal_vector(int n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniformly distributed point on S^{n-1} (normalized Gaussian).
Vector random_unit_vector(Rng& rng, int n);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(Rng& rng, int n);

}  // namespace nvrcg
