#ifndef FDWAVE_VERIFY_HPP
#define FDWAVE_VERIFY_HPP

// Property and oracle suites run by `fdwave verify` and the acceptance
// binary. Each returns a CheckResult with the measured worst case.

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdwave/adi_solver.hpp"
#include "fdwave/fracweights.hpp"
#include "fdwave/mesh.hpp"
#include "fdwave/problems.hpp"

namespace fdwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed value of the checked quantity
  double threshold = 0.0;
  std::string detail;
};

namespace verify_detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Random field with zero boundary on a random mesh.
inline GridFn random_zero_boundary(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  GridFn u(mesh);
  for (int i = 1; i < mesh.M1; ++i)
    for (int j = 1; j < mesh.M2; ++j)
      u(i, j) = unit(rng);
  return u;
}

inline Mesh random_mesh(std::mt19937_64& rng, int max_intervals = 24) {
  std::uniform_int_distribution<int> size(3, max_intervals);
  std::uniform_real_distribution<double> extent(0.5, 4.0);
  return Mesh(extent(rng), extent(rng), size(rng), size(rng), 1.0, 1);
}

} // namespace verify_detail

/// Recurrence weights against exp(lgamma(k+a) - lgamma(a) - lgamma(k+1)),
/// evaluated in long double: at k = 1000 the log-gammas are ~6e3 and a
/// double ulp there already costs ~1e-12 relative after exponentiation.
inline CheckResult check_weight_recurrence(const std::vector<double>& alphas, int kmax = 1000) {
  CheckResult r{"grunwald-weights-vs-lgamma", true, 0.0, 1e-12, ""};
  for (double a : alphas) {
    const auto w = grunwald_weights(a, static_cast<std::size_t>(kmax));
    for (int k = 0; k <= kmax; ++k) {
      const long double ka = static_cast<long double>(k) + a;
      const long double ref = std::exp(std::lgamma(ka) - std::lgamma(static_cast<long double>(a)) -
                                       std::lgamma(static_cast<long double>(k) + 1.0L));
      r.measured = std::max(r.measured, static_cast<double>(std::abs(w[k] - ref) / ref));
    }
  }
  r.passed = r.measured <= r.threshold;
  r.detail = verify_detail::fmt("max relative deviation %.3e", r.measured);
  return r;
}

/// Quadratic form sum_n (sum_{p<=n} lambda_p v_{n+1-p}) v_{n+1} >= 0 on
/// random vectors, and min eigenvalue of the symmetrised lower-triangular
/// Toeplitz matrix of the lambda weights via a dense eigen solver.
inline CheckResult check_lambda_positivity(const std::vector<double>& alphas, int vectors,
                                           int kmax = 50, int eig_kmax = 30,
                                           std::uint64_t seed = 3) {
  CheckResult r{"lambda-quadratic-form", true, 0.0, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, kmax);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_form = std::numeric_limits<double>::infinity();
  double worst_eig = std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    const WeightTable weights(a, static_cast<std::size_t>(std::max(kmax, eig_kmax)));
    const auto lambda = weights.lambda();
    const int per_alpha = vectors / static_cast<int>(alphas.size());
    for (int s = 0; s < per_alpha; ++s) {
      const int k = length(rng);
      std::vector<double> v(static_cast<std::size_t>(k) + 1);  // v[1..k]
      double norm2 = 0.0;
      for (int i = 1; i <= k; ++i) {
        v[i] = normal(rng);
        norm2 += v[i] * v[i];
      }
      double form = 0.0;
      for (int n = 0; n < k; ++n) {
        double inner_sum = 0.0;
        for (int p = 0; p <= n; ++p)
          inner_sum += lambda[p] * v[n + 1 - p];
        form += inner_sum * v[n + 1];
      }
      worst_form = std::min(worst_form, form / norm2);
    }
    for (int k = 1; k <= eig_kmax; ++k) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j)
          T(i, j) = lambda[i - j];
      const Eigen::MatrixXd S = 0.5 * (T + T.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
      worst_eig = std::min(worst_eig, eig.eigenvalues().minCoeff());
    }
  }
  r.measured = worst_form;
  r.threshold = -1e-12;
  r.passed = worst_form >= -1e-12 && worst_eig >= -1e-10;
  r.detail = verify_detail::fmt("min form/|v|^2 = %.3e (>= -1e-12), min eigenvalue = %.3e (>= -1e-10)",
                                worst_form, worst_eig);
  return r;
}

/// Observed order of the (0,-1) shifted Grunwald integral of t^3 at t = 1
/// against Gamma(4)/Gamma(4 + alpha), plus the absolute error on the finest
/// step.
inline CheckResult check_wsgd_order(const std::vector<double>& alphas,
                                    const std::vector<int>& steps = {40, 80, 160},
                                    double order_lo = 1.9, double order_hi = 2.1,
                                    double max_abs_error = 1e-3) {
  CheckResult r{"wsgd-order", true, 0.0, 0.0, ""};
  double lo = 1e300, hi = -1e300, finest = 0.0;
  for (double a : alphas) {
    const double exact = std::tgamma(4.0) / std::tgamma(4.0 + a);
    std::vector<double> errs;
    for (int n : steps) {
      const double tau = 1.0 / n;
      std::vector<double> f(static_cast<std::size_t>(n) + 1);
      for (int k = 0; k <= n; ++k)
        f[k] = std::pow(k * tau, 3.0);
      errs.push_back(std::abs(wsgd_integral_at(f, static_cast<std::size_t>(n), a, tau) - exact));
    }
    for (std::size_t k = 1; k < errs.size(); ++k) {
      const double order = std::log2(errs[k - 1] / errs[k]);
      lo = std::min(lo, order);
      hi = std::max(hi, order);
    }
    finest = std::max(finest, errs.back());
  }
  r.measured = lo;
  r.threshold = order_lo;
  r.passed = lo >= order_lo && hi <= order_hi && finest <= max_abs_error;
  r.detail = verify_detail::fmt("orders in [%.4f, %.4f], finest abs error %.3e", lo, hi, finest);
  return r;
}

/// Summation by parts, <Hu,u> >= |u|^2/3, |d_x u|^2 <= 4/h^2 |u|^2,
/// <d2x d2y u, u> = |d_x d_y u|^2 and <Lambda u, u> <= 0 on random
/// zero-boundary fields over random meshes.
inline CheckResult check_operator_identities(int fields, double tol = 1e-12,
                                             std::uint64_t seed = 11) {
  CheckResult r{"discrete-operator-identities", true, 0.0, tol, ""};
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::string worst_name = "none";
  auto note = [&](double rel, const char* what) {
    if (rel > worst) {
      worst = rel;
      worst_name = what;
    }
  };
  for (int s = 0; s < fields; ++s) {
    const Mesh mesh = verify_detail::random_mesh(rng);
    const GridFn u = verify_detail::random_zero_boundary(mesh, rng);
    const GridFn v = verify_detail::random_zero_boundary(mesh, rng);
    const double uu = inner(u, u);
    const double h1 = mesh.h1(), h2 = mesh.h2();

    const double dxx = inner(delta2_x(u), v), flux_x = inner_dx(u, v);
    note(std::abs(dxx + flux_x) / (norm_dx(u) * norm_dx(v)), "sbp-x");
    const double dyy = inner(delta2_y(u), v), flux_y = inner_dy(u, v);
    note(std::abs(dyy + flux_y) / (norm_dy(u) * norm_dy(v)), "sbp-y");

    note(std::max(0.0, uu / 3.0 - inner(compact_H(u), u)) / uu, "H-positivity");
    note(std::max(0.0, inner_dx(u, u) - 4.0 / (h1 * h1) * uu) / (4.0 / (h1 * h1) * uu),
         "dx-bound");
    note(std::max(0.0, inner_dy(u, u) - 4.0 / (h2 * h2) * uu) / (4.0 / (h2 * h2) * uu),
         "dy-bound");

    const double mixed = inner(delta2x_delta2y(u), u), mixed_norm = inner_dxdy(u, u);
    note(std::abs(mixed - mixed_norm) / mixed_norm, "mixed-adjoint");

    // <Lambda u, u> <= 0, scaled by the magnitude of its two parts.
    const double scale = inner_dx(u, u) + inner_dy(u, u);
    note(std::max(0.0, inner(lambda_op(u), u)) / scale, "Lambda-negativity");
  }
  r.measured = worst;
  r.passed = worst <= tol;
  r.detail = verify_detail::fmt("worst relative defect %.3e", worst) + " (" + worst_name + ")";
  return r;
}

/// A problem with non-zero Dirichlet data, initial velocity and forcing on
/// an L1 x L2 box, used to exercise every boundary term of the sweeps.
inline ProblemSpec make_boundary_probe(double alpha, double L1 = 1.3, double L2 = 0.9) {
  ProblemSpec p;
  p.name = "boundary-probe";
  p.alpha = alpha;
  p.L1 = L1;
  p.L2 = L2;
  p.T = 1.0;
  p.phi = [](double x, double y) { return std::cos(x) * (1.0 + y * y); };
  p.boundary = [](double x, double y, double t) {
    return t * (1.0 + x * x + x * y) + t * t * std::cos(2.0 * y) * std::exp(x);
  };
  p.forcing = [](double x, double y, double t) {
    return std::sin(3.0 * x + 1.0) * std::exp(-y) * (1.0 + t) + t * t * x * y;
  };
  return p;
}

/// Max over levels and points of |ADI - dense unsplit| on Example 1 and
/// the boundary probe, for all listed meshes.
inline CheckResult check_adi_equivalence(const std::vector<double>& alphas,
                                         const std::vector<std::array<int, 3>>& meshes,
                                         double tol = 1e-11) {
  CheckResult r{"adi-vs-direct", true, 0.0, tol, ""};
  for (double a : alphas)
    for (const ProblemSpec& problem : {make_example1(a), make_boundary_probe(a)})
      for (const auto& m : meshes) {
        const Mesh mesh = make_mesh(problem, m[0], m[1], m[2]);
        SolverState adi(mesh, a), direct(mesh, a);
        for (int n = 0; n < mesh.N; ++n) {
          adi_step(adi, problem);
          direct_step(direct, problem);
          GridFn diff = adi.current();
          diff -= direct.current();
          for (double d : diff.values())
            r.measured = std::max(r.measured, std::abs(d));
        }
      }
  r.passed = r.measured <= tol;
  r.detail = verify_detail::fmt("max |ADI - direct| = %.3e", r.measured);
  return r;
}

struct StabilityProbe {
  ProblemSpec problem;
  GridFn initial;
};

/// Random bounded data on (0,pi)^2 with zero boundary: velocity and forcing
/// built from sine modes up to the grid frequency, optional random u^0.
inline StabilityProbe make_stability_probe(const Mesh& mesh, double alpha, std::mt19937_64& rng,
                                           bool random_initial) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> mode(1, std::max(1, std::min(mesh.M1, mesh.M2) - 1));
  struct Term { int a, b; double amp, freq, phase; };
  auto draw = [&](int count) {
    std::vector<Term> terms;
    for (int k = 0; k < count; ++k)
      terms.push_back({mode(rng), mode(rng), unit(rng), 6.0 * unit(rng), 3.0 * unit(rng)});
    return terms;
  };
  const auto phi_terms = draw(4);
  const auto f_terms = draw(4);
  StabilityProbe probe;
  probe.problem.name = "stability-probe";
  probe.problem.alpha = alpha;
  probe.problem.L1 = mesh.L1;
  probe.problem.L2 = mesh.L2;
  probe.problem.T = mesh.T;
  probe.problem.phi = [phi_terms](double x, double y) {
    double s = 0.0;
    for (const auto& t : phi_terms)
      s += t.amp * std::sin(t.a * x) * std::sin(t.b * y);
    return s;
  };
  probe.problem.forcing = [f_terms](double x, double y, double tt) {
    double s = 0.0;
    for (const auto& t : f_terms)
      s += t.amp * std::sin(t.a * x) * std::sin(t.b * y) * std::cos(t.freq * tt + t.phase);
    return s;
  };
  probe.initial = GridFn(mesh);
  if (random_initial)
    for (int i = 1; i < mesh.M1; ++i)
      for (int j = 1; j < mesh.M2; ++j)
        probe.initial(i, j) = unit(rng);
  return probe;
}

/// Energy bound for the unsplit scheme with zero boundary data:
///   |u^n|^2 <= e^{6T} (12 |u^0|^2 + 25 tau sum_{k<n} |L u^0 + H phi + g^{k+1/2}|^2)
/// where g^{k+1/2} = H (f^k + f^{k+1}) / 2. Checks that bound and the
/// tighter |u^n| <= 10 D_n with D_n^2 = 12 |u^0|^2 + 25 tau sum_{k<n} |...|^2.
inline CheckResult check_stability(int problems, int N = 64, int M = 16, double alpha = 0.5,
                                   std::uint64_t seed = 17) {
  CheckResult r{"stability-probe", true, 0.0, 10.0, ""};
  std::mt19937_64 rng(seed);
  const double pi = std::numbers::pi;
  double worst_remark = 0.0;
  for (int s = 0; s < problems; ++s) {
    const Mesh mesh(pi, pi, M, M, 1.0, N);
    const double a = problems > 1 ? 0.1 + 0.8 * s / (problems - 1) : alpha;
    const StabilityProbe probe = make_stability_probe(mesh, a, rng, s % 2 == 1);
    SolverState state(mesh, a, probe.initial);
    const double tau = mesh.tau();
    const GridFn base = lambda_op(probe.initial) +
                        compact_H(GridFn::sample(mesh, probe.problem.phi));
    auto forcing = [&](int k) {
      return GridFn::sample(mesh, [&](double x, double y) {
        return probe.problem.forcing(x, y, mesh.t(k));
      });
    };
    const double u0 = norm_L2(probe.initial);
    double data_sum = 0.0;
    GridFn f_prev = forcing(0);
    for (int n = 0; n < N; ++n) {
      GridFn f_next = forcing(n + 1);
      GridFn term = base + 0.5 * compact_H(f_prev + f_next);
      data_sum += tau * inner(term, term);
      f_prev = std::move(f_next);
      adi_step(state, probe.problem);
      const double un = norm_L2(state.current());
      const double data = std::sqrt(12.0 * u0 * u0 + 25.0 * data_sum);
      const double remark = std::exp(3.0 * mesh.T) * data;
      worst_remark = std::max(worst_remark, un / remark);
      r.measured = std::max(r.measured, un / data);
    }
  }
  r.passed = worst_remark <= 1.0 && r.measured <= 10.0;
  r.detail = verify_detail::fmt("max |u^n|/D_n = %.3e (<= 10), max |u^n|/bound = %.3e (<= 1)",
                                r.measured, worst_remark);
  return r;
}

inline CheckResult check_manufactured(const std::vector<double>& alphas, int samples = 20,
                                      double tol = 1e-6) {
  CheckResult r{"manufactured-residual", true, 0.0, tol, ""};
  for (double a : alphas)
    r.measured = std::max(r.measured, verify_manufactured(make_example1(a), samples).max_residual);
  r.passed = r.measured <= tol;
  r.detail = verify_detail::fmt("max residual %.3e", r.measured);
  return r;
}

} // namespace fdwave

#endif // FDWAVE_VERIFY_HPP
