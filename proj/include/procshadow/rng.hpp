#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace procshadow {

/// Seeded random stream. Streams are addressed by a master seed plus a path of
/// integers (trial, batch, block, ...), so parallel workers can each derive a
/// disjoint, reproducible substream without sharing state.
class RngStream {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RngStream(std::uint64_t seed) : RngStream(seed, {}) {}
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : RngStream(seed, std::vector<std::uint64_t>(path)) {}
  RngStream(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&](std::uint64_t v) {
      words.push_back(static_cast<std::uint32_t>(v));
      words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  bool bit() { return (engine_() >> 63) != 0; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace procshadow
