#ifndef FDWAVE_STUDY_HPP
#define FDWAVE_STUDY_HPP

// Refinement studies: one solve per ladder entry, observed rates, and the
// table / CSV / SVG emitters used by the command-line driver.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdwave/adi_solver.hpp"
#include "fdwave/errors.hpp"
#include "fdwave/expr.hpp"
#include "fdwave/mesh.hpp"
#include "fdwave/problems.hpp"

namespace fdwave {

enum class RefinementAxis { Temporal, Spatial };

inline const char* to_string(RefinementAxis axis) {
  return axis == RefinementAxis::Temporal ? "temporal" : "spatial";
}

inline RefinementAxis parse_axis(const std::string& text) {
  if (text == "temporal" || text == "time" || text == "t")
    return RefinementAxis::Temporal;
  if (text == "spatial" || text == "space" || text == "x")
    return RefinementAxis::Spatial;
  throw ConfigError("unknown refinement axis '" + text + "'");
}

struct StudyConfig {
  std::string problem = "example1";
  std::vector<double> alphas{0.5};
  RefinementAxis axis = RefinementAxis::Temporal;
  /// Held resolution of the other axis: intervals per space axis for a
  /// temporal study, time steps for a spatial study.
  int fixed = 16;
  /// Time steps (temporal) or intervals per space axis (spatial).
  std::vector<int> ladder{5, 10, 20, 40};

  void validate() const {
    if (alphas.empty())
      throw ConfigError("study needs at least one alpha");
    for (double a : alphas)
      if (!(a > 0.0 && a < 1.0))
        throw ConfigError("alpha " + std::to_string(a) + " outside (0,1)");
    if (ladder.size() < 2)
      throw ConfigError("refinement ladder needs at least two entries");
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      if (ladder[k] < 2)
        throw ConfigError("ladder resolutions must be at least 2");
      if (k > 0 && ladder[k] <= ladder[k - 1])
        throw ConfigError("ladder must be strictly increasing");
    }
    if (fixed < 2)
      throw ConfigError("fixed resolution must be at least 2");
  }
};

/// Parses the held resolution "N=100", "M=16", "tau=1e-4" or "h=pi/16"
/// (values may be constant expressions). The extent converts step sizes
/// to counts: T for tau, the first space extent for h.
inline int parse_fixed(const std::string& text, RefinementAxis axis, double extent) {
  const auto eq = text.find('=');
  std::string key = eq == std::string::npos ? "" : text.substr(0, eq);
  const std::string value = eq == std::string::npos ? text : text.substr(eq + 1);
  if (key.empty())
    key = axis == RefinementAxis::Temporal ? "M" : "N";
  const Expression e = Expression::parse(value);
  if (!e.is_constant())
    throw ConfigError("fixed resolution '" + text + "' is not constant");
  const double v = e(0, 0, 0);
  const bool wants_space = axis == RefinementAxis::Temporal;
  int count = 0;
  if (key == "M" || key == "N") {
    count = static_cast<int>(std::llround(v));
  } else if (key == "h" || key == "tau") {
    if (!(v > 0.0))
      throw ConfigError("step size must be positive");
    const double ratio = extent / v;
    count = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - count) > 1e-8 * ratio)
      throw ConfigError("step " + value + " does not divide the extent evenly");
  } else {
    throw ConfigError("unknown fixed resolution key '" + key + "'");
  }
  const bool is_space = key == "M" || key == "h";
  if (is_space != wants_space)
    throw ConfigError(std::string("a ") + to_string(axis) + " study holds the " +
                      (wants_space ? "spatial" : "temporal") + " resolution fixed");
  return count;
}

struct ConvergenceRow {
  double alpha = 0.0;
  int M = 0;  // intervals per space axis
  int N = 0;  // time steps
  double h = 0.0;
  double tau = 0.0;
  double e_inf = 0.0;           // as emitted, 5 significant digits
  std::optional<double> rate;   // as emitted, 4 decimals
  bool failed = false;
};

/// Rounds to the printed precision so rates derive from emitted values.
inline double round_sci5(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return std::stod(buf);
}

inline double round_fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return std::stod(buf);
}

inline std::vector<ConvergenceRow> run_study(const StudyConfig& config,
                                             const ProblemFactory& factory) {
  config.validate();
  std::vector<ConvergenceRow> rows;
  for (double alpha : config.alphas) {
    const ProblemSpec problem = homogenize_initial(factory(alpha));
    if (!problem.has_exact())
      throw UnsupportedStudyError("problem '" + problem.name +
                                  "' has no exact solution to measure errors against");
    std::optional<double> previous;
    for (int rung : config.ladder) {
      const bool temporal = config.axis == RefinementAxis::Temporal;
      const int M = temporal ? config.fixed : rung;
      const int N = temporal ? rung : config.fixed;
      const Mesh mesh = make_mesh(problem, M, M, N);
      ConvergenceRow row;
      row.alpha = alpha;
      row.M = M;
      row.N = N;
      row.h = mesh.h1();
      row.tau = mesh.tau();
      try {
        row.e_inf = round_sci5(*solve(problem, mesh).e_inf);
        if (!std::isfinite(row.e_inf))
          throw NumericError("non-finite error norm");
      } catch (const NumericError&) {
        row.failed = true;
        row.e_inf = std::nan("");
      }
      if (!row.failed && previous && row.e_inf > 0.0)
        row.rate = round_fixed4(std::log2(*previous / row.e_inf));
      previous = row.failed ? std::nullopt : std::optional<double>(row.e_inf);
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::vector<ConvergenceRow> run_study(const StudyConfig& config) {
  return run_study(config, resolve_problem(config.problem));
}

// ---------------------------------------------------------------------------
// Emitters

inline std::string emit_table(const std::vector<ConvergenceRow>& rows) {
  if (rows.empty())
    throw ConfigError("no rows to tabulate");
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %5s %7s %12s %12s %12s %8s\n", "alpha", "M", "N", "h",
                "tau", "E_inf", "Rate");
  os << buf;
  for (const auto& r : rows) {
    std::string err = r.failed ? "failed" : "";
    if (!r.failed) {
      std::snprintf(buf, sizeof buf, "%.4e", r.e_inf);
      err = buf;
    }
    std::string rate = "*";
    if (r.rate) {
      std::snprintf(buf, sizeof buf, "%.4f", *r.rate);
      rate = buf;
    }
    std::snprintf(buf, sizeof buf, "%-6g %5d %7d %12.4e %12.4e %12s %8s\n", r.alpha, r.M, r.N,
                  r.h, r.tau, err.c_str(), rate.c_str());
    os << buf;
  }
  return os.str();
}

inline void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  if (rows.empty())
    throw ConfigError("no rows to write");
  os << "alpha,h,tau,e_inf,rate\n";
  char buf[200];
  for (const auto& r : rows) {
    std::string rate;
    if (r.rate) {
      std::snprintf(buf, sizeof buf, "%.4f", *r.rate);
      rate = buf;
    }
    if (r.failed)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,nan,%s\n", r.alpha, r.h, r.tau,
                    rate.c_str());
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.4e,%s\n", r.alpha, r.h, r.tau,
                    r.e_inf, rate.c_str());
    os << buf;
  }
}

inline void emit_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  emit_csv(rows, os);
  if (!os)
    throw IoError("failed writing '" + path + "'");
}

/// Reads rows written by emit_csv. Mesh counts are not stored and stay 0.
inline std::vector<ConvergenceRow> read_rows_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "alpha,h,tau,e_inf,rate")
    throw ParseError("missing convergence CSV header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
      cells.emplace_back();
    if (cells.size() != 5)
      throw ParseError("convergence CSV row needs 5 cells: '" + line + "'");
    ConvergenceRow r;
    try {
      r.alpha = std::stod(cells[0]);
      r.h = std::stod(cells[1]);
      r.tau = std::stod(cells[2]);
      r.failed = cells[3] == "nan";
      r.e_inf = r.failed ? std::nan("") : std::stod(cells[3]);
      if (!cells[4].empty())
        r.rate = std::stod(cells[4]);
    } catch (const std::logic_error&) {
      throw ParseError("bad number in convergence CSV row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

namespace detail {

// Viridis sampled at 0, 0.25, 0.5, 0.75, 1.
inline std::array<int, 3> colormap(double s) {
  static constexpr std::array<std::array<double, 3>, 5> anchors{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(s));
  const double w = s - k;
  std::array<int, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(anchors[k][c] * (1.0 - w) + anchors[k + 1][c] * w));
  return rgb;
}

} // namespace detail

/// SVG heatmap of a grid function: one cell per mesh point, x to the
/// right, y upwards, linear color scale over [min, max] with a legend.
inline std::string heatmap_svg(const GridFn& u, const std::string& title = "") {
  if (!u.all_finite())
    throw NumericError("cannot draw a heatmap of non-finite values");
  const Mesh& m = u.mesh();
  const auto [lo_it, hi_it] = std::minmax_element(u.values().begin(), u.values().end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi - lo;

  const int cell = std::max(4, 480 / std::max(u.rows(), u.cols()));
  const int plot_w = cell * u.rows(), plot_h = cell * u.cols();
  const int left = 60, top = 40, legend_w = 20;
  const int width = left + plot_w + 40 + legend_w + 90, height = top + plot_h + 50;

  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\" font-size=\"12\">\n",
                width, height, width, height);
  os << buf;
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) {
      const double s = span > 0.0 ? (u(i, j) - lo) / span : 0.0;
      const auto rgb = detail::colormap(s);
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n",
                    left + i * cell, top + (u.cols() - 1 - j) * cell, cell, cell, rgb[0], rgb[1],
                    rgb[2]);
      os << buf;
    }
  // Axes.
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, plot_w, plot_h);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">x</text>\n"
                "<text x=\"%d\" y=\"%d\">0</text>\n"
                "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%.4g</text>\n",
                left + plot_w / 2, top + plot_h + 36, left, top + plot_h + 16, left + plot_w,
                top + plot_h + 16, m.L1);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">y</text>\n"
                "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">0</text>\n"
                "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%.4g</text>\n",
                left - 36, top + plot_h / 2, left - 6, top + plot_h, left - 6, top + 12, m.L2);
  os << buf;
  // Legend.
  const int lx = left + plot_w + 40;
  os << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (int k = 0; k <= 4; ++k) {
    const auto rgb = detail::colormap(span > 0.0 ? k / 4.0 : 0.0);
    std::snprintf(buf, sizeof buf, "<stop offset=\"%g\" stop-color=\"rgb(%d,%d,%d)\"/>\n",
                  k / 4.0, rgb[0], rgb[1], rgb[2]);
    os << buf;
  }
  os << "</linearGradient></defs>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"url(#scale)\" "
                "stroke=\"black\"/>\n"
                "<text x=\"%d\" y=\"%d\">%.4e</text>\n"
                "<text x=\"%d\" y=\"%d\">%.4e</text>\n",
                lx, top, legend_w, plot_h, lx + legend_w + 4, top + 10, hi, lx + legend_w + 4,
                top + plot_h, lo);
  os << buf;
  os << "</svg>\n";
  return os.str();
}

inline void emit_heatmap(const GridFn& u, const std::string& path, const std::string& title = "") {
  const std::string svg = heatmap_svg(u, title);
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  os << svg;
  if (!os)
    throw IoError("failed writing '" + path + "'");
}

} // namespace fdwave

#endif // FDWAVE_STUDY_HPP
