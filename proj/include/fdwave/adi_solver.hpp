#ifndef FDWAVE_ADI_SOLVER_HPP
#define FDWAVE_ADI_SOLVER_HPP

// Compact ADI time stepping for du/dt = phi + I^alpha(Laplacian u) + f.
//
// Each step solves
//   (H_x - c d2_x)(H_y - c d2_y) u^{n+1}
//     = (H_x + c d2_x)(H_y + c d2_y) u^n
//       + mu (sum_{k=1}^{n+1} lambda_k L u^{n+1-k} + sum_{k=1}^{n} lambda_k L u^{n-k})
//       + tau H phi + (tau/2) H (f^n + f^{n+1}),
// with mu = tau^(alpha+1)/2, c = mu lambda_0 and L the compact Laplacian
// lambda_op, as an x-sweep for u* = (H_y - c d2_y) u^{n+1} followed by a
// y-sweep. The scheme is applied from n = 0 on.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdwave/errors.hpp"
#include "fdwave/fracweights.hpp"
#include "fdwave/mesh.hpp"
#include "fdwave/problems.hpp"
#include "fdwave/trisolve.hpp"

namespace fdwave {

/// Mesh covering the problem's domain and time horizon.
inline Mesh make_mesh(const ProblemSpec& problem, int M1, int M2, int N) {
  return Mesh(problem.L1, problem.L2, M1, M2, problem.T, N);
}

struct StepReport {
  int level = 0;
  std::chrono::nanoseconds wall_time{0};
  double rhs_norm = 0.0;
  double solution_inf_norm = 0.0;
  std::size_t history_terms = 0;  // compact-Laplacian levels accumulated
};

class SolverState {
public:
  /// Level 0 with u^0 = 0.
  SolverState(const Mesh& mesh, double alpha)
      : SolverState(mesh, alpha, GridFn(mesh)) {}

  SolverState(const Mesh& mesh, double alpha, GridFn initial)
      : mesh_((mesh.validate(), mesh)),
        weights_(alpha, static_cast<std::size_t>(mesh.N) + 1),
        mu_(std::pow(mesh.tau(), alpha + 1.0) / 2.0),
        sweep_x_(build_sweep_operator(mesh.M1 - 1, mesh.h1(), mu_ * weights_.lambda(0))),
        sweep_y_(build_sweep_operator(mesh.M2 - 1, mesh.h2(), mu_ * weights_.lambda(0))),
        current_(std::move(initial)) {
    if (!current_.mesh().same_space(mesh_) ||
        current_.values().size() != GridFn(mesh_).values().size())
      throw DimensionError("initial level does not match the mesh");
    history_.reserve(static_cast<std::size_t>(mesh_.N) + 1);
    history_.push_back(lambda_op(current_));
  }

  const Mesh& mesh() const noexcept { return mesh_; }
  const WeightTable& weights() const noexcept { return weights_; }
  double alpha() const noexcept { return weights_.alpha(); }
  double mu() const noexcept { return mu_; }
  double mu_lambda0() const noexcept { return mu_ * weights_.lambda(0); }
  int level() const noexcept { return level_; }
  const GridFn& current() const noexcept { return current_; }
  /// lambda_op(u^k) for every accepted level k = 0..level().
  const std::vector<GridFn>& history_lambda_u() const noexcept { return history_; }
  const TridiagOperator& sweep_x() const noexcept { return sweep_x_; }
  const TridiagOperator& sweep_y() const noexcept { return sweep_y_; }

  void accept(GridFn next) {
    if (level_ >= mesh_.N)
      throw StateError("cannot advance past the final time level");
    current_.check_same(next);
    history_.push_back(lambda_op(next));
    current_ = std::move(next);
    ++level_;
  }

private:
  Mesh mesh_;
  WeightTable weights_;
  double mu_;
  TridiagOperator sweep_x_;
  TridiagOperator sweep_y_;
  GridFn current_;
  std::vector<GridFn> history_;
  int level_ = 0;
};

namespace detail {

/// Dirichlet data at time t on the boundary, zero inside.
inline GridFn boundary_level(const Mesh& mesh, const ProblemSpec& problem, double t) {
  GridFn b(mesh);
  if (!problem.boundary)
    return b;
  for (int j = 0; j <= mesh.M2; ++j) {
    b(0, j) = problem.boundary(mesh.x(0), mesh.y(j), t);
    b(mesh.M1, j) = problem.boundary(mesh.x(mesh.M1), mesh.y(j), t);
  }
  for (int i = 1; i < mesh.M1; ++i) {
    b(i, 0) = problem.boundary(mesh.x(i), mesh.y(0), t);
    b(i, mesh.M2) = problem.boundary(mesh.x(i), mesh.y(mesh.M2), t);
  }
  return b;
}

inline GridFn forcing_level(const Mesh& mesh, const ProblemSpec& problem, double t) {
  if (!problem.forcing)
    return GridFn(mesh);
  return GridFn::sample(mesh, [&](double x, double y) { return problem.forcing(x, y, t); });
}

} // namespace detail

/// Interior right-hand side of the first sweep for the step n -> n+1.
/// Requires the state to sit at level n.
inline GridFn assemble_rhs(const SolverState& state, const ProblemSpec& problem, int n) {
  if (n != state.level() ||
      state.history_lambda_u().size() != static_cast<std::size_t>(n) + 1)
    throw StateError("right-hand side for level " + std::to_string(n) +
                     " needs history up to that level, state is at level " +
                     std::to_string(state.level()));
  const Mesh& mesh = state.mesh();
  const double c = state.mu_lambda0();
  const double tau = mesh.tau();
  const GridFn& u = state.current();

  // (H_x + c d2_x)(H_y + c d2_y) u^n
  GridFn inner = compact_Hy(u);
  inner.axpy(c, delta2_y(u));
  GridFn rhs = compact_Hx(inner);
  rhs.axpy(c, delta2_x(inner));

  // Memory: level m enters with lambda_{n+1-m} + lambda_{n-m} (m < n) and
  // lambda_1 (m = n). Accumulated in ascending m.
  const auto lambda = state.weights().lambda();
  const auto& history = state.history_lambda_u();
  GridFn memory(mesh);
  auto& acc = memory.values();
  for (int m = 0; m <= n; ++m) {
    double coeff = lambda[static_cast<std::size_t>(n + 1 - m)];
    if (m < n)
      coeff += lambda[static_cast<std::size_t>(n - m)];
    const auto& src = history[static_cast<std::size_t>(m)].values();
    for (std::size_t p = 0; p < acc.size(); ++p)
      acc[p] += coeff * src[p];
  }
  rhs.axpy(state.mu(), memory);

  // tau H phi + (tau/2) H (f^n + f^{n+1})
  GridFn source = GridFn::sample(mesh, [&](double x, double y) { return problem.phi_at(x, y); });
  GridFn f = detail::forcing_level(mesh, problem, mesh.t(n));
  f += detail::forcing_level(mesh, problem, mesh.t(n + 1));
  source.axpy(0.5, f);
  rhs.axpy(tau, compact_H(source));

  rhs.zero_boundary();
  return rhs;
}

namespace detail {

inline void require_finite(const GridFn& u, int level) {
  if (!u.all_finite())
    throw NumericError("non-finite solution values at level " + std::to_string(level), level);
}

inline void require_steppable(const SolverState& state, const ProblemSpec& problem) {
  if (state.level() >= state.mesh().N)
    throw StateError("state already at the final time level");
  if (!problem.initial_is_zero())
    throw SpecificationError("problem has a non-zero initial value; homogenize it first");
}

} // namespace detail

/// Advances the state by one level with the two tridiagonal sweeps.
inline StepReport adi_step(SolverState& state, const ProblemSpec& problem) {
  detail::require_steppable(state, problem);
  const auto start = std::chrono::steady_clock::now();
  const Mesh& mesh = state.mesh();
  const int n = state.level();
  const int M1 = mesh.M1, M2 = mesh.M2;
  const double c = state.mu_lambda0();
  const double cx = c / (mesh.h1() * mesh.h1());
  const double cy = c / (mesh.h2() * mesh.h2());
  const double off_x = 1.0 / 12.0 - cx;
  const double off_y = 1.0 / 12.0 - cy;

  const GridFn rhs = assemble_rhs(state, problem, n);
  const GridFn next_boundary = detail::boundary_level(mesh, problem, mesh.t(n + 1));

  // u* on the x-boundary: (H_y - c d2_y) applied to the boundary traces.
  auto ystar = [&](int i, int j) {
    const double a = next_boundary(i, j - 1), b = next_boundary(i, j),
                 d = next_boundary(i, j + 1);
    return (a + 10.0 * b + d) / 12.0 - cy * (a - 2.0 * b + d);
  };

  // x-sweep, one system per interior column j.
  std::vector<std::vector<double>> columns(static_cast<std::size_t>(M2 - 1),
                                           std::vector<double>(static_cast<std::size_t>(M1 - 1)));
  for (int j = 1; j < M2; ++j) {
    auto& b = columns[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i < M1; ++i)
      b[static_cast<std::size_t>(i - 1)] = rhs(i, j);
    b.front() -= off_x * ystar(0, j);
    b.back() -= off_x * ystar(M1, j);
  }
  columns = solve_many(state.sweep_x(), std::move(columns));

  // y-sweep, one system per interior row i.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(M1 - 1),
                                        std::vector<double>(static_cast<std::size_t>(M2 - 1)));
  for (int i = 1; i < M1; ++i) {
    auto& b = rows[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j < M2; ++j)
      b[static_cast<std::size_t>(j - 1)] =
          columns[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)];
    b.front() -= off_y * next_boundary(i, 0);
    b.back() -= off_y * next_boundary(i, M2);
  }
  rows = solve_many(state.sweep_y(), std::move(rows));

  GridFn next = next_boundary;
  for (int i = 1; i < M1; ++i)
    for (int j = 1; j < M2; ++j)
      next(i, j) = rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  detail::require_finite(next, n + 1);

  StepReport report;
  report.level = n + 1;
  report.rhs_norm = norm_inf_interior(rhs);
  report.solution_inf_norm = norm_inf_interior(next);
  report.history_terms = static_cast<std::size_t>(n) + 1;
  state.accept(std::move(next));
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

/// (H - c Lambda + c^2 d2_x d2_y) u on the interior, zero on the boundary.
inline GridFn unsplit_operator(const GridFn& u, double c) {
  GridFn out = compact_H(u);
  out.axpy(-c, lambda_op(u));
  out.axpy(c * c, delta2x_delta2y(u));
  out.zero_boundary();
  return out;
}

struct DirectOptions {
  int max_intervals = 32;  // per axis
};

/// Oracle step: solves the unsplit perturbed scheme with a dense LU on all
/// (M1-1)(M2-1) interior unknowns. Small meshes only.
inline StepReport direct_step(SolverState& state, const ProblemSpec& problem,
                              DirectOptions options = {}) {
  detail::require_steppable(state, problem);
  const Mesh& mesh = state.mesh();
  if (mesh.M1 > options.max_intervals || mesh.M2 > options.max_intervals)
    throw CapacityError("dense direct step limited to " +
                        std::to_string(options.max_intervals) + " intervals per axis");
  const auto start = std::chrono::steady_clock::now();
  const int n = state.level();
  const int nx = mesh.M1 - 1, ny = mesh.M2 - 1;
  const Eigen::Index unknowns = static_cast<Eigen::Index>(nx) * ny;
  auto index = [ny](int i, int j) { return static_cast<Eigen::Index>(i - 1) * ny + (j - 1); };
  const double c = state.mu_lambda0();

  Eigen::MatrixXd A(unknowns, unknowns);
  GridFn unit(mesh);
  for (int i = 1; i < mesh.M1; ++i)
    for (int j = 1; j < mesh.M2; ++j) {
      unit(i, j) = 1.0;
      const GridFn col = unsplit_operator(unit, c);
      unit(i, j) = 0.0;
      for (int p = 1; p < mesh.M1; ++p)
        for (int q = 1; q < mesh.M2; ++q)
          A(index(p, q), index(i, j)) = col(p, q);
    }

  const GridFn rhs = assemble_rhs(state, problem, n);
  const GridFn next_boundary = detail::boundary_level(mesh, problem, mesh.t(n + 1));
  const GridFn lifted = unsplit_operator(next_boundary, c);
  Eigen::VectorXd b(unknowns);
  for (int i = 1; i < mesh.M1; ++i)
    for (int j = 1; j < mesh.M2; ++j)
      b(index(i, j)) = rhs(i, j) - lifted(i, j);

  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  GridFn next = next_boundary;
  for (int i = 1; i < mesh.M1; ++i)
    for (int j = 1; j < mesh.M2; ++j)
      next(i, j) = x(index(i, j));
  detail::require_finite(next, n + 1);

  StepReport report;
  report.level = n + 1;
  report.rhs_norm = norm_inf_interior(rhs);
  report.solution_inf_norm = norm_inf_interior(next);
  report.history_terms = static_cast<std::size_t>(n) + 1;
  state.accept(std::move(next));
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

struct SolveOptions {
  bool store_snapshots = false;  // keep every level 0..N
};

struct SolveResult {
  GridFn final_level;
  std::vector<GridFn> snapshots;
  std::vector<StepReport> reports;
  std::optional<double> e_inf;     // max over levels 1..N and interior points
  std::vector<double> level_errors;  // interior max error per level 1..N
};

/// max over interior points of |exact(x_i, y_j, t) - u_ij|.
inline double interior_error(const GridFn& u, const SpaceTimeFn& exact, double t) {
  const Mesh& m = u.mesh();
  double worst = 0.0;
  for (int i = 1; i < m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      worst = std::max(worst, std::abs(exact(m.x(i), m.y(j), t) - u(i, j)));
  return worst;
}

inline SolveResult solve(const ProblemSpec& problem, const Mesh& mesh,
                         const SolveOptions& options = {}) {
  if (!problem.initial_is_zero())
    throw SpecificationError("problem has a non-zero initial value; homogenize it first");
  SolverState state(mesh, problem.alpha);
  SolveResult result;
  if (options.store_snapshots)
    result.snapshots.push_back(state.current());
  result.reports.reserve(static_cast<std::size_t>(mesh.N));
  double worst = 0.0;
  for (int n = 0; n < mesh.N; ++n) {
    result.reports.push_back(adi_step(state, problem));
    if (options.store_snapshots)
      result.snapshots.push_back(state.current());
    if (problem.has_exact()) {
      const double e = interior_error(state.current(), problem.exact, mesh.t(n + 1));
      result.level_errors.push_back(e);
      worst = std::max(worst, e);
    }
  }
  if (problem.has_exact())
    result.e_inf = worst;
  result.final_level = state.current();
  return result;
}

inline void write_step_reports(const std::vector<StepReport>& reports, std::ostream& os) {
  os << "level,wall_time_ns,inf_norm\n";
  for (const auto& r : reports) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%lld,%.10e\n", r.level,
                  static_cast<long long>(r.wall_time.count()), r.solution_inf_norm);
    os << buf;
  }
}

} // namespace fdwave

#endif // FDWAVE_ADI_SOLVER_HPP
