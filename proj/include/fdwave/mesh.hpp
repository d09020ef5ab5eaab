#ifndef FDWAVE_MESH_HPP
#define FDWAVE_MESH_HPP

// Uniform tensor meshes, grid functions and the second-difference and
// compact stencils on them, plus the discrete inner products and norms.
//
// Conventions:
//  * u(i, j) with i in [0, M1] along x and j in [0, M2] along y.
//  * delta2_x and compact_Hx act along x only: delta2_x is zero on the
//    x-boundary rows i in {0, M1}, compact_Hx is the identity there, and
//    both are evaluated on every column j, including j in {0, M2}. This
//    makes tensor compositions such as H_x delta2_y exact next to
//    non-homogeneous Dirichlet data.
//  * Composite operators (lambda_op, delta2x_delta2y) are zero on the
//    whole boundary.
//  * Inner products and norms only involve interior points (or the flux
//    points i = 1..M1 for the difference norms) and are summed in
//    row-major order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdwave/errors.hpp"

namespace fdwave {

struct Mesh {
  double L1 = 1.0;
  double L2 = 1.0;
  int M1 = 2;
  int M2 = 2;
  double T = 1.0;
  int N = 1;

  Mesh() = default;
  Mesh(double l1, double l2, int m1, int m2, double t_final, int steps)
      : L1(l1), L2(l2), M1(m1), M2(m2), T(t_final), N(steps) {
    validate();
  }

  void validate() const {
    if (!(L1 > 0.0 && L2 > 0.0 && T > 0.0))
      throw DomainError("mesh extents and final time must be positive");
    if (M1 < 2 || M2 < 2)
      throw DomainError("mesh needs at least two intervals per axis");
    if (N < 1)
      throw DomainError("mesh needs at least one time step");
  }

  double h1() const noexcept { return L1 / M1; }
  double h2() const noexcept { return L2 / M2; }
  double tau() const noexcept { return T / N; }
  double x(int i) const noexcept { return i * h1(); }
  double y(int j) const noexcept { return j * h2(); }
  double t(int k) const noexcept { return k * tau(); }

  bool same_space(const Mesh& other) const noexcept {
    return M1 == other.M1 && M2 == other.M2 && L1 == other.L1 &&
           L2 == other.L2;
  }
};

/// One time level of a scalar field on all (M1+1) x (M2+1) mesh points.
class GridFn {
public:
  GridFn() = default;
  explicit GridFn(const Mesh& mesh, double fill = 0.0)
      : mesh_(mesh), values_(static_cast<std::size_t>(mesh.M1 + 1) *
                                 static_cast<std::size_t>(mesh.M2 + 1),
                             fill) {}

  /// Samples f(x_i, y_j) at every mesh point.
  static GridFn sample(const Mesh& mesh,
                       const std::function<double(double, double)>& f) {
    GridFn u(mesh);
    for (int i = 0; i <= mesh.M1; ++i)
      for (int j = 0; j <= mesh.M2; ++j)
        u(i, j) = f(mesh.x(i), mesh.y(j));
    return u;
  }

  const Mesh& mesh() const noexcept { return mesh_; }
  int rows() const noexcept { return mesh_.M1 + 1; }
  int cols() const noexcept { return mesh_.M2 + 1; }

  double& operator()(int i, int j) noexcept {
    return values_[static_cast<std::size_t>(i) * cols() + j];
  }
  double operator()(int i, int j) const noexcept {
    return values_[static_cast<std::size_t>(i) * cols() + j];
  }

  std::vector<double>& values() & noexcept { return values_; }
  const std::vector<double>& values() const& noexcept { return values_; }
  // Temporaries hand over their storage so `for (v : f(u).values())` is safe.
  std::vector<double> values() && noexcept { return std::move(values_); }

  bool is_interior(int i, int j) const noexcept {
    return i > 0 && i < mesh_.M1 && j > 0 && j < mesh_.M2;
  }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  void zero_boundary() noexcept {
    for (int j = 0; j < cols(); ++j) {
      (*this)(0, j) = 0.0;
      (*this)(mesh_.M1, j) = 0.0;
    }
    for (int i = 0; i < rows(); ++i) {
      (*this)(i, 0) = 0.0;
      (*this)(i, mesh_.M2) = 0.0;
    }
  }

  GridFn& operator+=(const GridFn& o) {
    check_same(o);
    for (std::size_t k = 0; k < values_.size(); ++k)
      values_[k] += o.values_[k];
    return *this;
  }
  GridFn& operator-=(const GridFn& o) {
    check_same(o);
    for (std::size_t k = 0; k < values_.size(); ++k)
      values_[k] -= o.values_[k];
    return *this;
  }
  GridFn& operator*=(double s) noexcept {
    for (double& v : values_)
      v *= s;
    return *this;
  }
  /// this += s * o
  GridFn& axpy(double s, const GridFn& o) {
    check_same(o);
    for (std::size_t k = 0; k < values_.size(); ++k)
      values_[k] += s * o.values_[k];
    return *this;
  }

  friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
  friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
  friend GridFn operator*(double s, GridFn a) { return a *= s; }

  void check_same(const GridFn& o) const {
    if (!mesh_.same_space(o.mesh_) || values_.size() != o.values_.size())
      throw DimensionError("grid functions live on different meshes");
  }

private:
  Mesh mesh_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Stencil operators

inline GridFn delta2_x(const GridFn& u) {
  const Mesh& m = u.mesh();
  const double inv = 1.0 / (m.h1() * m.h1());
  GridFn out(m);
  for (int i = 1; i < m.M1; ++i)
    for (int j = 0; j <= m.M2; ++j)
      out(i, j) = (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) * inv;
  return out;
}

inline GridFn delta2_y(const GridFn& u) {
  const Mesh& m = u.mesh();
  const double inv = 1.0 / (m.h2() * m.h2());
  GridFn out(m);
  for (int i = 0; i <= m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      out(i, j) = (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) * inv;
  return out;
}

inline GridFn compact_Hx(const GridFn& u) {
  const Mesh& m = u.mesh();
  GridFn out(u);
  for (int i = 1; i < m.M1; ++i)
    for (int j = 0; j <= m.M2; ++j)
      out(i, j) = (u(i - 1, j) + 10.0 * u(i, j) + u(i + 1, j)) / 12.0;
  return out;
}

inline GridFn compact_Hy(const GridFn& u) {
  const Mesh& m = u.mesh();
  GridFn out(u);
  for (int i = 0; i <= m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      out(i, j) = (u(i, j - 1) + 10.0 * u(i, j) + u(i, j + 1)) / 12.0;
  return out;
}

inline GridFn compact_H(const GridFn& u) { return compact_Hx(compact_Hy(u)); }

/// (H_y delta2_x + H_x delta2_y) u on the interior, zero on the boundary.
inline GridFn lambda_op(const GridFn& u) {
  GridFn out = compact_Hy(delta2_x(u));
  out += compact_Hx(delta2_y(u));
  out.zero_boundary();
  return out;
}

inline GridFn delta2x_delta2y(const GridFn& u) {
  GridFn out = delta2_x(delta2_y(u));
  out.zero_boundary();
  return out;
}

// ---------------------------------------------------------------------------
// Inner products and norms

inline double inner(const GridFn& u, const GridFn& v) {
  u.check_same(v);
  const Mesh& m = u.mesh();
  double acc = 0.0;
  for (int i = 1; i < m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      acc += u(i, j) * v(i, j);
  return m.h1() * m.h2() * acc;
}

inline double norm_L2(const GridFn& u) { return std::sqrt(inner(u, u)); }

inline double norm_inf_interior(const GridFn& u) {
  const Mesh& m = u.mesh();
  double best = 0.0;
  for (int i = 1; i < m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      best = std::max(best, std::abs(u(i, j)));
  return best;
}

/// <delta_x u, delta_x v> over flux points i = 1..M1 (i - 1/2), j = 1..M2-1.
inline double inner_dx(const GridFn& u, const GridFn& v) {
  u.check_same(v);
  const Mesh& m = u.mesh();
  const double h1 = m.h1();
  double acc = 0.0;
  for (int i = 1; i <= m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      acc += (u(i, j) - u(i - 1, j)) / h1 * ((v(i, j) - v(i - 1, j)) / h1);
  return m.h1() * m.h2() * acc;
}

inline double inner_dy(const GridFn& u, const GridFn& v) {
  u.check_same(v);
  const Mesh& m = u.mesh();
  const double h2 = m.h2();
  double acc = 0.0;
  for (int i = 1; i < m.M1; ++i)
    for (int j = 1; j <= m.M2; ++j)
      acc += (u(i, j) - u(i, j - 1)) / h2 * ((v(i, j) - v(i, j - 1)) / h2);
  return m.h1() * m.h2() * acc;
}

/// <delta_x delta_y u, delta_x delta_y v> over i = 1..M1, j = 1..M2.
inline double inner_dxdy(const GridFn& u, const GridFn& v) {
  u.check_same(v);
  const Mesh& m = u.mesh();
  const double s = 1.0 / (m.h1() * m.h2());
  auto mixed = [s](const GridFn& w, int i, int j) {
    return (w(i, j) - w(i - 1, j) - w(i, j - 1) + w(i - 1, j - 1)) * s;
  };
  double acc = 0.0;
  for (int i = 1; i <= m.M1; ++i)
    for (int j = 1; j <= m.M2; ++j)
      acc += mixed(u, i, j) * mixed(v, i, j);
  return m.h1() * m.h2() * acc;
}

inline double norm_dx(const GridFn& u) { return std::sqrt(inner_dx(u, u)); }
inline double norm_dy(const GridFn& u) { return std::sqrt(inner_dy(u, u)); }
inline double norm_dxdy(const GridFn& u) { return std::sqrt(inner_dxdy(u, u)); }

// ---------------------------------------------------------------------------
// CSV: one line per i, comma-separated values over j.

inline void write_csv(const GridFn& u, std::ostream& os) {
  std::ostringstream line;
  for (int i = 0; i < u.rows(); ++i) {
    line.str("");
    line << std::setprecision(17);
    for (int j = 0; j < u.cols(); ++j) {
      if (j)
        line << ',';
      line << u(i, j);
    }
    os << line.str() << '\n';
  }
}

inline void write_csv(const GridFn& u, const std::string& path) {
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write_csv(u, os);
  if (!os)
    throw IoError("failed writing '" + path + "'");
}

/// Reads values written by write_csv onto a mesh of matching shape.
inline GridFn read_csv(const Mesh& mesh, std::istream& is) {
  GridFn u(mesh);
  std::string line;
  int i = 0;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    if (i >= u.rows())
      throw DimensionError("CSV has more rows than the mesh");
    std::istringstream row(line);
    std::string cell;
    int j = 0;
    while (std::getline(row, cell, ',')) {
      if (j >= u.cols())
        throw DimensionError("CSV row " + std::to_string(i) +
                             " has too many columns");
      try {
        u(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "' in CSV");
      }
      ++j;
    }
    if (j != u.cols())
      throw DimensionError("CSV row " + std::to_string(i) +
                           " has too few columns");
    ++i;
  }
  if (i != u.rows())
    throw DimensionError("CSV has fewer rows than the mesh");
  return u;
}

} // namespace fdwave

#endif // FDWAVE_MESH_HPP
