#ifndef FDWAVE_TRISOLVE_HPP
#define FDWAVE_TRISOLVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fdwave/errors.hpp"

namespace fdwave {

/// Tridiagonal matrix factored once by Thomas elimination (no pivoting).
/// sub[0] and super[n-1] are ignored.
class TridiagOperator {
public:
  TridiagOperator(std::vector<double> sub, std::vector<double> diag,
                  std::vector<double> super)
      : sub_(std::move(sub)), diag_(std::move(diag)), super_(std::move(super)) {
    if (diag_.empty())
      throw DimensionError("tridiagonal system needs at least one unknown");
    if (sub_.size() != diag_.size() || super_.size() != diag_.size())
      throw DimensionError("tridiagonal bands must have equal length");
    factor();
  }

  std::size_t size() const noexcept { return diag_.size(); }
  const std::vector<double>& sub() const noexcept { return sub_; }
  const std::vector<double>& diag() const noexcept { return diag_; }
  const std::vector<double>& super() const noexcept { return super_; }

  /// min_i |diag_i| - |sub_i| - |super_i| over the stored bands.
  double dominance_margin() const noexcept {
    double margin = std::abs(diag_[0]) - (size() > 1 ? std::abs(super_[0]) : 0.0);
    for (std::size_t i = 1; i < size(); ++i) {
      const double off = std::abs(sub_[i]) + (i + 1 < size() ? std::abs(super_[i]) : 0.0);
      margin = std::min(margin, std::abs(diag_[i]) - off);
    }
    return margin;
  }

  /// Overwrites b with A^{-1} b.
  void solve_in_place(std::span<double> b) const {
    if (b.size() != size())
      throw DimensionError("right-hand side has length " +
                           std::to_string(b.size()) + ", expected " +
                           std::to_string(size()));
    const std::size_t n = size();
    b[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i)
      b[i] = (b[i] - sub_[i] * b[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;)
      b[i] -= upper_[i] * b[i + 1];
  }

  std::vector<double> solve(std::vector<double> b) const {
    solve_in_place(b);
    return b;
  }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != size())
      throw DimensionError("vector length does not match operator");
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag_[i] * x[i];
      if (i > 0)
        v += sub_[i] * x[i - 1];
      if (i + 1 < n)
        v += super_[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }

private:
  void factor() {
    const std::size_t n = size();
    upper_.assign(n, 0.0);
    inv_pivot_.assign(n, 0.0);
    double pivot = diag_[0];
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0)
        pivot = diag_[i] - sub_[i] * upper_[i - 1];
      if (pivot == 0.0 || !std::isfinite(pivot))
        throw NumericError("zero pivot in tridiagonal elimination at row " +
                           std::to_string(i));
      inv_pivot_[i] = 1.0 / pivot;
      if (i + 1 < n)
        upper_[i] = super_[i] * inv_pivot_[i];
    }
  }

  std::vector<double> sub_, diag_, super_;
  std::vector<double> upper_;     // c'_i = super_i / pivot_i
  std::vector<double> inv_pivot_;
};

/// (H - mu_lambda0 delta2) along one axis restricted to m interior unknowns:
/// diagonal 10/12 + 2c, off-diagonals 1/12 - c with c = mu_lambda0 / h^2.
inline TridiagOperator build_sweep_operator(int m, double h, double mu_lambda0) {
  if (m < 1)
    throw DimensionError("sweep operator needs at least one unknown");
  if (!(h > 0.0))
    throw DomainError("spatial step must be positive");
  if (!(mu_lambda0 >= 0.0))
    throw DomainError("mu*lambda0 must be non-negative");
  const double c = mu_lambda0 / (h * h);
  const auto n = static_cast<std::size_t>(m);
  TridiagOperator op(std::vector<double>(n, 1.0 / 12.0 - c),
                     std::vector<double>(n, 10.0 / 12.0 + 2.0 * c),
                     std::vector<double>(n, 1.0 / 12.0 - c));
  // Analytically >= 2/3 for every c >= 0.
  if (!(op.dominance_margin() > 0.0))
    throw NumericError("sweep operator lost diagonal dominance");
  return op;
}

/// Solves op x = b for every b in the batch, reusing the factorization.
inline std::vector<std::vector<double>>
solve_many(const TridiagOperator& op, std::vector<std::vector<double>> rhs) {
  for (auto& b : rhs)
    op.solve_in_place(b);
  return rhs;
}

} // namespace fdwave

#endif // FDWAVE_TRISOLVE_HPP
