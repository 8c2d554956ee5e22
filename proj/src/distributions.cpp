#include "fxlob/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/zeta.hpp>

namespace fxlob {

namespace {
constexpr std::int64_t kTableSpan = 200000;
}

double hurwitz_zeta(double alpha, std::int64_t xmin) {
  if (!(alpha > 1.0)) throw std::domain_error("hurwitz_zeta: alpha must exceed 1");
  if (xmin < 1) throw std::domain_error("hurwitz_zeta: xmin must be >= 1");
  // Riemann zeta minus the head is accurate for small xmin; for large xmin
  // the Euler-Maclaurin tail avoids cancellation.
  if (xmin <= 50) {
    double head = 0.0;
    for (std::int64_t k = 1; k < xmin; ++k) head += std::pow(static_cast<double>(k), -alpha);
    return boost::math::zeta(alpha) - head;
  }
  const double n = static_cast<double>(xmin);
  const double a = alpha;
  return std::pow(n, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(n, -a) + a / 12.0 * std::pow(n, -a - 1.0) -
         a * (a + 1.0) * (a + 2.0) / 720.0 * std::pow(n, -a - 3.0);
}

DiscretePowerLaw::DiscretePowerLaw(double alpha, std::int64_t xmin, std::optional<std::int64_t> xmax)
    : alpha_(alpha), xmin_(xmin), xmax_(xmax) {
  if (!(alpha > 1.0)) throw std::invalid_argument("DiscretePowerLaw: alpha must exceed 1");
  if (xmin < 1) throw std::invalid_argument("DiscretePowerLaw: xmin must be >= 1");
  if (xmax && *xmax < xmin) throw std::invalid_argument("DiscretePowerLaw: xmax < xmin");

  if (xmax) {
    norm_ = 0.0;
    for (std::int64_t v = xmin; v <= *xmax; ++v) norm_ += std::pow(static_cast<double>(v), -alpha);
  } else {
    norm_ = hurwitz_zeta(alpha, xmin);
  }
  const std::int64_t last = xmax ? *xmax : xmin + kTableSpan;
  cdf_.reserve(static_cast<std::size_t>(last - xmin + 1));
  double acc = 0.0;
  for (std::int64_t v = xmin; v <= last; ++v) {
    acc += std::pow(static_cast<double>(v), -alpha) / norm_;
    cdf_.push_back(acc);
  }
  if (xmax) cdf_.back() = 1.0;
}

double DiscretePowerLaw::pmf(std::int64_t v) const {
  if (v < xmin_ || (xmax_ && v > *xmax_)) return 0.0;
  return std::pow(static_cast<double>(v), -alpha_) / norm_;
}

double DiscretePowerLaw::survival(std::int64_t v) const {
  if (v <= xmin_) return 1.0;
  if (xmax_) {
    if (v > *xmax_) return 0.0;
    return 1.0 - cdf_[static_cast<std::size_t>(v - 1 - xmin_)];
  }
  return hurwitz_zeta(alpha_, v) / norm_;
}

std::int64_t DiscretePowerLaw::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (u < cdf_.back()) {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return xmin_ + static_cast<std::int64_t>(it - cdf_.begin());
  }
  // Beyond the table (open support only): continuous Pareto approximation of
  // the remaining tail, which carries < 1e-7 of the mass for alpha >= 2.
  const double x0 = static_cast<double>(xmin_ + static_cast<std::int64_t>(cdf_.size())) - 0.5;
  const double w = rng.uniform_pos();
  return static_cast<std::int64_t>(std::floor(x0 * std::pow(w, -1.0 / (alpha_ - 1.0)) + 0.5));
}

}  // namespace fxlob
