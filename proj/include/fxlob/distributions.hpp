#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fxlob/rng.hpp"

namespace fxlob {

// zeta(alpha, xmin) = sum_{k >= xmin} k^-alpha, alpha > 1, xmin >= 1.
double hurwitz_zeta(double alpha, std::int64_t xmin);

// P(V = v) proportional to v^-alpha on [xmin, xmax] (xmax open when absent).
class DiscretePowerLaw {
 public:
  DiscretePowerLaw(double alpha, std::int64_t xmin = 1, std::optional<std::int64_t> xmax = {});

  double alpha() const noexcept { return alpha_; }
  std::int64_t xmin() const noexcept { return xmin_; }

  double pmf(std::int64_t v) const;
  // P(V >= v)
  double survival(std::int64_t v) const;

  std::int64_t sample(Rng& rng) const;

 private:
  double alpha_;
  std::int64_t xmin_;
  std::optional<std::int64_t> xmax_;
  double norm_;
  std::vector<double> cdf_;  // cdf_[k] = P(V <= xmin + k)
};

// Geometric law on {1, 2, ...}: P(V = v) = p (1 - p)^(v - 1).
class Geometric1 {
 public:
  explicit Geometric1(double p) : p_(p) {}
  double p() const noexcept { return p_; }
  double mean() const noexcept { return 1.0 / p_; }
  std::int64_t sample(Rng& rng) const { return 1 + rng.geometric_failures(p_); }

 private:
  double p_;
};

}  // namespace fxlob
