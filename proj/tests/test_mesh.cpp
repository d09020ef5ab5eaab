#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fdwave/mesh.hpp"

using namespace fdwave;

namespace {

constexpr double kPi = std::numbers::pi;

GridFn random_field(const Mesh& mesh, std::mt19937_64& rng, bool zero_boundary) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  GridFn u(mesh);
  for (int i = 0; i <= mesh.M1; ++i)
    for (int j = 0; j <= mesh.M2; ++j)
      u(i, j) = (zero_boundary && !u.is_interior(i, j)) ? 0.0 : unit(rng);
  return u;
}

Mesh random_mesh(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(3, 20);
  std::uniform_real_distribution<double> extent(0.3, 5.0);
  return Mesh(extent(rng), extent(rng), size(rng), size(rng), 1.0, 1);
}

double max_interior_diff(const GridFn& a, const GridFn& b) {
  GridFn d = a;
  d -= b;
  return norm_inf_interior(d);
}

} // namespace

TEST(Mesh, DerivedSteps) {
  const Mesh m(kPi, 2.0, 16, 10, 1.0, 40);
  EXPECT_NEAR(m.h1() * m.M1, m.L1, 1e-15);
  EXPECT_NEAR(m.h2() * m.M2, m.L2, 1e-15);
  EXPECT_DOUBLE_EQ(m.tau(), 0.025);
  EXPECT_DOUBLE_EQ(m.x(16), kPi);
  EXPECT_DOUBLE_EQ(m.t(40), 1.0);
}

TEST(Mesh, RejectsDegenerateMeshes) {
  EXPECT_THROW(Mesh(1, 1, 1, 4, 1, 1), DomainError);
  EXPECT_THROW(Mesh(1, 1, 4, 4, 1, 0), DomainError);
  EXPECT_THROW(Mesh(-1, 1, 4, 4, 1, 1), DomainError);
  EXPECT_THROW(Mesh(1, 1, 4, 4, 0, 1), DomainError);
}

TEST(Delta2, ConstantsAndQuadratics) {
  const Mesh m(1.0, 1.0, 4, 4, 1.0, 1);
  const GridFn c(m, 3.5);
  EXPECT_EQ(norm_inf_interior(delta2_x(c)), 0.0);
  EXPECT_EQ(norm_inf_interior(delta2_y(c)), 0.0);

  const GridFn q = GridFn::sample(m, [](double x, double) { return x * x; });
  const GridFn d = delta2_x(q);
  for (int i = 1; i < m.M1; ++i)
    for (int j = 0; j <= m.M2; ++j)
      EXPECT_NEAR(d(i, j), 2.0, 1e-12);
  for (int j = 0; j <= m.M2; ++j) {
    EXPECT_EQ(d(0, j), 0.0);
    EXPECT_EQ(d(m.M1, j), 0.0);
  }
}

TEST(Delta2, SineIsSecondOrder) {
  const Mesh m(kPi, kPi, 16, 4, 1.0, 1);
  const GridFn s = GridFn::sample(m, [](double x, double) { return std::sin(x); });
  const GridFn d = delta2_x(s);
  const double h = m.h1();
  for (int i = 1; i < m.M1; ++i)
    EXPECT_LE(std::abs(d(i, 2) + std::sin(m.x(i))), h * h);
}

TEST(CompactH, StencilReadoff) {
  const Mesh m(1.0, 1.0, 6, 6, 1.0, 1);
  const GridFn ones(m, 1.0);
  const GridFn hx_ones = compact_Hx(ones);
  const GridFn h_ones = compact_H(ones);
  for (double v : hx_ones.values())
    EXPECT_DOUBLE_EQ(v, 1.0);
  for (double v : h_ones.values())
    EXPECT_DOUBLE_EQ(v, 1.0);

  GridFn e(m);
  e(3, 2) = 1.0;
  const GridFn h = compact_Hx(e);
  EXPECT_DOUBLE_EQ(h(2, 2), 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(h(3, 2), 10.0 / 12.0);
  EXPECT_DOUBLE_EQ(h(4, 2), 1.0 / 12.0);
  double total = 0.0;
  for (double v : h.values())
    total += v;
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(CompactH, IdentityOnOwnBoundary) {
  std::mt19937_64 rng(1);
  const Mesh m(2.0, 3.0, 7, 5, 1.0, 1);
  const GridFn u = random_field(m, rng, false);
  const GridFn hx = compact_Hx(u), hy = compact_Hy(u);
  for (int j = 0; j <= m.M2; ++j) {
    EXPECT_EQ(hx(0, j), u(0, j));
    EXPECT_EQ(hx(m.M1, j), u(m.M1, j));
  }
  for (int i = 0; i <= m.M1; ++i) {
    EXPECT_EQ(hy(i, 0), u(i, 0));
    EXPECT_EQ(hy(i, m.M2), u(i, m.M2));
  }
}

TEST(CompactH, FourthOrderCompactIdentity) {
  // |H_x f'' - delta2_x f| for f = sin(x) shrinks like h^4.
  std::vector<double> errs;
  for (int M : {8, 16, 32}) {
    const Mesh m(kPi, 1.0, M, 2, 1.0, 1);
    const GridFn f = GridFn::sample(m, [](double x, double) { return std::sin(x); });
    const GridFn f2 = GridFn::sample(m, [](double x, double) { return -std::sin(x); });
    errs.push_back(max_interior_diff(compact_Hx(f2), delta2_x(f)));
  }
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double order = std::log2(errs[k - 1] / errs[k]);
    EXPECT_GE(order, 3.8);
    EXPECT_LE(order, 4.2);
  }
}

TEST(CompactH, DirectionsCommute) {
  std::mt19937_64 rng(2);
  for (int s = 0; s < 20; ++s) {
    const Mesh m = random_mesh(rng);
    const GridFn u = random_field(m, rng, false);
    const GridFn a = compact_Hx(compact_Hy(u)), b = compact_Hy(compact_Hx(u));
    for (std::size_t k = 0; k < a.values().size(); ++k)
      EXPECT_NEAR(a.values()[k], b.values()[k], 1e-15);
  }
}

TEST(CompactH, PositiveDefiniteWithThirdBound) {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 100; ++s) {
    const Mesh m = random_mesh(rng);
    const GridFn u = random_field(m, rng, true);
    EXPECT_GE(inner(compact_H(u), u), inner(u, u) / 3.0 - 1e-12 * inner(u, u));
  }
}

TEST(LambdaOp, ConstantsVanishAndSineProduct) {
  const Mesh m(kPi, kPi, 16, 16, 1.0, 1);
  EXPECT_EQ(norm_inf_interior(lambda_op(GridFn(m, 2.0))), 0.0);

  const GridFn u =
      GridFn::sample(m, [](double x, double y) { return std::sin(x) * std::sin(y); });
  GridFn defect = lambda_op(u);
  defect.axpy(2.0, compact_H(u));
  const double h = m.h1();
  EXPECT_LE(norm_inf_interior(defect) / norm_inf_interior(u), 5.0 * std::pow(h, 4));
}

TEST(LambdaOp, MatchesNinePointTensorStencilWithBoundaryData) {
  // Lambda written out as the 3x3 stencil
  //   (1/12)[1 10 1]_y (x) [1 -2 1]_x / h1^2 + (1/12)[1 10 1]_x (x) [1 -2 1]_y / h2^2.
  std::mt19937_64 rng(4);
  for (int s = 0; s < 20; ++s) {
    const Mesh m = random_mesh(rng);
    const GridFn u = random_field(m, rng, false);
    const GridFn L = lambda_op(u);
    const double mass[3] = {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};
    const double diff[3] = {1.0, -2.0, 1.0};
    const double ix = 1.0 / (m.h1() * m.h1()), iy = 1.0 / (m.h2() * m.h2());
    for (int i = 1; i < m.M1; ++i)
      for (int j = 1; j < m.M2; ++j) {
        double ref = 0.0;
        for (int a = -1; a <= 1; ++a)
          for (int b = -1; b <= 1; ++b)
            ref += (mass[b + 1] * diff[a + 1] * ix + mass[a + 1] * diff[b + 1] * iy) *
                   u(i + a, j + b);
        EXPECT_NEAR(L(i, j), ref, 1e-11 * (ix + iy));
      }
  }
}

TEST(Delta2xDelta2y, ExactCases) {
  const Mesh m(1.0, 1.0, 5, 5, 1.0, 1);
  EXPECT_EQ(norm_inf_interior(delta2x_delta2y(GridFn(m, -1.0))), 0.0);
  const GridFn q = GridFn::sample(m, [](double x, double y) { return x * x * y * y; });
  const GridFn d = delta2x_delta2y(q);
  for (int i = 1; i < m.M1; ++i)
    for (int j = 1; j < m.M2; ++j)
      EXPECT_NEAR(d(i, j), 4.0, 1e-9);
}

TEST(InnerProducts, BasicProperties) {
  std::mt19937_64 rng(5);
  const Mesh m(1.0, 2.0, 6, 8, 1.0, 1);
  GridFn u = random_field(m, rng, false);
  EXPECT_GT(inner(u, u), 0.0);
  EXPECT_NEAR(norm_L2(u), std::sqrt(inner(u, u)), 1e-15);

  // Only the interior counts.
  GridFn b(m);
  for (int j = 0; j <= m.M2; ++j)
    b(0, j) = b(m.M1, j) = 5.0;
  EXPECT_EQ(inner(b, b), 0.0);
  EXPECT_EQ(norm_inf_interior(b), 0.0);

  GridFn single(m);
  single(2, 3) = -4.0;
  EXPECT_DOUBLE_EQ(norm_inf_interior(single), 4.0);
  EXPECT_DOUBLE_EQ(inner(single, single), 16.0 * m.h1() * m.h2());

  const Mesh other(1.0, 2.0, 6, 9, 1.0, 1);
  EXPECT_THROW(inner(u, GridFn(other)), DimensionError);
}

TEST(InnerProducts, SummationByPartsAndBounds) {
  std::mt19937_64 rng(6);
  for (int s = 0; s < 100; ++s) {
    const Mesh m = random_mesh(rng);
    const GridFn u = random_field(m, rng, true), v = random_field(m, rng, true);
    const double sx = norm_dx(u) * norm_dx(v), sy = norm_dy(u) * norm_dy(v);
    EXPECT_NEAR(inner(delta2_x(u), v), -inner_dx(u, v), 1e-13 * sx);
    EXPECT_NEAR(inner(delta2_y(u), v), -inner_dy(u, v), 1e-13 * sy);
    const double uu = inner(u, u);
    EXPECT_LE(inner_dx(u, u), 4.0 / (m.h1() * m.h1()) * uu * (1 + 1e-12));
    EXPECT_LE(inner_dy(u, u), 4.0 / (m.h2() * m.h2()) * uu * (1 + 1e-12));
    const double mixed = inner_dxdy(u, u);
    EXPECT_NEAR(inner(delta2x_delta2y(u), u), mixed, 1e-12 * mixed);
    EXPECT_GE(mixed, 0.0);
    EXPECT_LE(inner(lambda_op(u), u), 1e-12 * (inner_dx(u, u) + inner_dy(u, u)));
  }
}

TEST(Operators, Linearity) {
  std::mt19937_64 rng(7);
  using Op = GridFn (*)(const GridFn&);
  const Op ops[] = {delta2_x, delta2_y, compact_Hx, compact_Hy, compact_H, lambda_op,
                    delta2x_delta2y};
  for (int s = 0; s < 10; ++s) {
    const Mesh m = random_mesh(rng);
    const GridFn u = random_field(m, rng, false), v = random_field(m, rng, false);
    const double a = 0.7, b = -1.3;
    for (Op op : ops) {
      const GridFn lhs = op(a * u + b * v);
      const GridFn rhs = a * op(u) + b * op(v);
      double scale = 1.0;
      for (double x : op(u).values())
        scale = std::max(scale, std::abs(x));
      for (std::size_t k = 0; k < lhs.values().size(); ++k)
        EXPECT_NEAR(lhs.values()[k], rhs.values()[k], 1e-14 * scale);
    }
  }
}

TEST(GridCsv, RoundTripsExactly) {
  std::mt19937_64 rng(8);
  const Mesh m(1.0, 1.0, 5, 7, 1.0, 1);
  const GridFn u = random_field(m, rng, false);
  std::stringstream ss;
  write_csv(u, ss);
  const GridFn back = read_csv(m, ss);
  EXPECT_EQ(back.values(), u.values());

  std::string first;
  std::stringstream again;
  write_csv(u, again);
  std::getline(again, first);
  EXPECT_EQ(std::count(first.begin(), first.end(), ','), m.M2);
}

TEST(GridCsv, RejectsMismatchedShapes) {
  const Mesh m(1.0, 1.0, 2, 2, 1.0, 1);
  std::stringstream short_rows("1,2,3\n4,5,6\n");
  EXPECT_THROW(read_csv(m, short_rows), DimensionError);
  std::stringstream wide("1,2,3,4\n1,2,3,4\n1,2,3,4\n");
  EXPECT_THROW(read_csv(m, wide), DimensionError);
  std::stringstream bad("1,2,x\n4,5,6\n7,8,9\n");
  EXPECT_THROW(read_csv(m, bad), ParseError);
  EXPECT_THROW(write_csv(GridFn(m), "/nonexistent-dir/u.csv"), IoError);
}
