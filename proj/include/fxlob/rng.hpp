#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fxlob {

// mt19937_64 with explicit inverse-transform draws. The standard
// distribution classes are implementation-defined, which would make
// generated files differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() noexcept { return 1.0 - uniform(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift; the bias is below 2^-64 * n, far under any
    // statistic this code computes.
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(engine_()) * n) >> 64);
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double exponential(double rate) noexcept { return -std::log(uniform_pos()) / rate; }

  // Number of failures before the first success, success probability p.
  std::int64_t geometric_failures(double p) noexcept {
    if (p >= 1.0) return 0;
    return static_cast<std::int64_t>(std::floor(std::log(uniform_pos()) / std::log1p(-p)));
  }

  std::uint64_t next() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fxlob
