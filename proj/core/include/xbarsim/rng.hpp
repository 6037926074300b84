#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace xbarsim {

/// Mixes a master seed with a key path into a 64-bit stream seed.
///
/// Uses the splitmix64 finalizer per key, so distinct paths give unrelated
/// seeds and the result does not depend on evaluation order elsewhere.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys);

/// Seeded pseudo-random stream. Owned by one caller at a time.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Normal(0, sigma^2) draw; sigma = 0 yields exactly 0.
  double normal(double sigma = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_{0.0, 1.0};
};

}  // namespace xbarsim
