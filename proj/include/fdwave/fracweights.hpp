#ifndef FDWAVE_FRACWEIGHTS_HPP
#define FDWAVE_FRACWEIGHTS_HPP

// Grunwald-Letnikov weights, the shifted (0,-1) lambda weights used by the
// time stepper, and the weighted-and-shifted Grunwald approximation of the
// Riemann-Liouville integral.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fdwave/errors.hpp"

namespace fdwave {

namespace detail {

inline void require_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("fractional order alpha must lie in (0,1), got " +
                      std::to_string(alpha));
}

inline void require_capacity(std::size_t count) {
  if (count >= std::vector<double>().max_size())
    throw CapacityError("weight count " + std::to_string(count) +
                        " exceeds container capacity");
}

} // namespace detail

/// omega_0..omega_count of (1 - z)^(-alpha), by the recurrence
/// omega_k = omega_{k-1} (k - 1 + alpha) / k.
inline std::vector<double> grunwald_weights(double alpha, std::size_t count) {
  detail::require_order(alpha);
  detail::require_capacity(count);
  std::vector<double> omega(count + 1);
  omega[0] = 1.0;
  for (std::size_t k = 1; k <= count; ++k)
    omega[k] = omega[k - 1] * ((static_cast<double>(k) - 1.0 + alpha) /
                               static_cast<double>(k));
  return omega;
}

/// Weights for a fixed order and horizon. Immutable once built.
class WeightTable {
public:
  WeightTable(double alpha, std::size_t count)
      : alpha_(alpha), omega_(grunwald_weights(alpha, count)),
        lambda_(omega_.size()) {
    const double first = 1.0 - alpha / 2.0;
    const double second = alpha / 2.0;
    lambda_[0] = first * omega_[0];
    for (std::size_t k = 1; k < omega_.size(); ++k)
      lambda_[k] = first * omega_[k] + second * omega_[k - 1];
  }

  double alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return omega_.size(); }
  std::span<const double> omega() const noexcept { return omega_; }
  std::span<const double> lambda() const noexcept { return lambda_; }
  double omega(std::size_t k) const { return omega_.at(k); }
  double lambda(std::size_t k) const { return lambda_.at(k); }

private:
  double alpha_;
  std::vector<double> omega_;
  std::vector<double> lambda_;
};

inline WeightTable scheme_weights(double alpha, std::size_t count) {
  return WeightTable(alpha, count);
}

/// Weighted and shifted Grunwald approximation of I^alpha f at t_k, using
/// samples f(t_0..t_n) with f taken as zero for t < 0. Throws
/// OutOfRangeError if the shifts need a sample beyond t_n.
inline double wsgd_integral_at(std::span<const double> samples,
                               std::size_t k, double alpha, double tau,
                               int p = 0, int q = -1) {
  if (p == q)
    throw DegenerateWeightsError("shift pair requires p != q");
  if (!(tau > 0.0))
    throw DomainError("time step must be positive");
  if (!(alpha > 0.0))
    throw DomainError("fractional order must be positive");
  const long n = static_cast<long>(samples.size()) - 1;
  const long kk = static_cast<long>(k);
  const long lookahead = std::max({0L, static_cast<long>(p), static_cast<long>(q)});
  if (kk + lookahead > n)
    throw OutOfRangeError("shifted sum at level " + std::to_string(k) +
                          " needs sample " + std::to_string(kk + lookahead) +
                          " but only " + std::to_string(n + 1) + " supplied");

  const double mu1 = (2.0 * q + alpha) / (2.0 * (q - p));
  const double mu2 = (2.0 * p + alpha) / (2.0 * (p - q));
  // Terms j with k - j + shift < 0 vanish under the zero extension.
  const long terms = kk + lookahead + 1;
  // grunwald_weights validates alpha < 1; the operator itself only needs
  // alpha > 0, so build the weights through the recurrence directly.
  std::vector<double> omega(static_cast<std::size_t>(terms));
  omega[0] = 1.0;
  for (long j = 1; j < terms; ++j)
    omega[j] = omega[j - 1] * ((static_cast<double>(j) - 1.0 + alpha) /
                               static_cast<double>(j));

  auto shifted_sum = [&](long shift) {
    double acc = 0.0;
    for (long j = 0; j <= kk + shift; ++j)
      acc += omega[j] * samples[static_cast<std::size_t>(kk - j + shift)];
    return acc;
  };
  return std::pow(tau, alpha) * (mu1 * shifted_sum(p) + mu2 * shifted_sum(q));
}

/// wsgd_integral_at for every level k = 0..n - max(p, q, 0), i.e. every
/// level whose stencil stays inside the supplied samples.
inline std::vector<double> wsgd_integral(std::span<const double> samples,
                                         double alpha, double tau, int p = 0,
                                         int q = -1) {
  if (p == q)
    throw DegenerateWeightsError("shift pair requires p != q");
  if (samples.empty())
    return {};
  const long lookahead = std::max({0, p, q});
  const long last = static_cast<long>(samples.size()) - 1 - lookahead;
  if (last < 0)
    throw OutOfRangeError("too few samples for the requested shifts");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(last + 1));
  for (long k = 0; k <= last; ++k)
    out.push_back(wsgd_integral_at(samples, static_cast<std::size_t>(k),
                                   alpha, tau, p, q));
  return out;
}

/// Brute-force Riemann-Liouville integral (1/Gamma(alpha)) int_0^t
/// (t-s)^(alpha-1) f(s) ds. The substitution s = t - w^(1/alpha) removes
/// the kernel singularity, leaving (1/alpha) int_0^{t^alpha} f(t -
/// w^(1/alpha)) dw, integrated with composite 10-point Gauss-Legendre.
inline double rl_integral_oracle(const std::function<double(double)>& f,
                                 double alpha, double t,
                                 std::size_t panels = 2000) {
  if (!(alpha > 0.0))
    throw DomainError("fractional order must be positive");
  if (!(t >= 0.0))
    throw DomainError("integration endpoint must be non-negative");
  if (panels == 0)
    throw DomainError("quadrature needs at least one panel");
  if (t == 0.0)
    return 0.0;
  const double upper = std::pow(t, alpha);
  const double width = upper / static_cast<double>(panels);
  const double inv_alpha = 1.0 / alpha;
  auto integrand = [&](double w) {
    return f(std::max(0.0, t - std::pow(w, inv_alpha)));
  };
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = width * static_cast<double>(p);
    const double b = p + 1 == panels ? upper : a + width;
    total += boost::math::quadrature::gauss<double, 10>::integrate(integrand, a, b);
  }
  const double value = total / (alpha * std::tgamma(alpha));
  if (!std::isfinite(value))
    throw NumericError("non-finite value in fractional integral quadrature");
  return value;
}

} // namespace fdwave

#endif // FDWAVE_FRACWEIGHTS_HPP
