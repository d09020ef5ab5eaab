#ifndef FDWAVE_PROBLEMS_HPP
#define FDWAVE_PROBLEMS_HPP

// Problems posed in integrated form
//
//   du/dt = phi(x, y) + I^alpha (Laplacian u) + f(x, y, t),   0 < alpha < 1,
//
// on (0, L1) x (0, L2) with u(x, y, 0) = psi, Dirichlet data on the
// boundary and f = I^alpha g for the source g of the diffusion-wave form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdwave/errors.hpp"
#include "fdwave/expr.hpp"
#include "fdwave/fracweights.hpp"

namespace fdwave {

using SpaceFn = std::function<double(double, double)>;
using SpaceTimeFn = std::function<double(double, double, double)>;

struct ProblemSpec {
  std::string name = "problem";
  double alpha = 0.5;
  double L1 = 1.0;
  double L2 = 1.0;
  double T = 1.0;
  SpaceFn phi;            // initial velocity; empty means zero
  SpaceFn psi;            // initial value; empty means zero
  SpaceFn psi_laplacian;  // required whenever psi is set
  SpaceTimeFn boundary;   // Dirichlet data; empty means zero
  SpaceTimeFn forcing;    // f = I^alpha g; empty means zero
  SpaceTimeFn exact;      // optional
  SpaceTimeFn exact_dt;         // optional, d(exact)/dt
  SpaceTimeFn exact_laplacian;  // optional, Laplacian of exact

  bool has_exact() const noexcept { return static_cast<bool>(exact); }
  bool initial_is_zero() const noexcept { return !psi; }

  double phi_at(double x, double y) const { return phi ? phi(x, y) : 0.0; }
  double psi_at(double x, double y) const { return psi ? psi(x, y) : 0.0; }
  double boundary_at(double x, double y, double t) const {
    return boundary ? boundary(x, y, t) : 0.0;
  }
  double forcing_at(double x, double y, double t) const {
    return forcing ? forcing(x, y, t) : 0.0;
  }

  /// Range checks plus boundary(x, y, 0) == psi on sampled boundary points.
  void validate(int boundary_samples = 64) const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
    if (!(L1 > 0.0 && L2 > 0.0 && T > 0.0))
      throw DomainError("domain extents and final time must be positive");
    if (psi && !psi_laplacian)
      throw SpecificationError("non-zero initial value requires its Laplacian");
    for (int s = 0; s <= boundary_samples; ++s) {
      const double a = L1 * s / boundary_samples;
      const double b = L2 * s / boundary_samples;
      const double pts[4][2] = {{a, 0.0}, {a, L2}, {0.0, b}, {L1, b}};
      for (const auto& p : pts) {
        const double gap = boundary_at(p[0], p[1], 0.0) - psi_at(p[0], p[1]);
        if (!(std::abs(gap) <= 1e-12))
          throw SpecificationError(
              "boundary data incompatible with initial value at (" +
              std::to_string(p[0]) + ", " + std::to_string(p[1]) + ")");
      }
    }
  }
};

/// Problem for v = u - psi, which starts from zero. The forcing gains
/// I^alpha(Laplacian psi) = Laplacian psi * t^alpha / Gamma(1 + alpha).
inline ProblemSpec homogenize_initial(const ProblemSpec& spec) {
  if (spec.initial_is_zero())
    return spec;
  if (!spec.psi_laplacian)
    throw SpecificationError("cannot homogenize: Laplacian of psi missing");

  ProblemSpec out = spec;
  const SpaceFn psi = spec.psi;
  const SpaceFn lap = spec.psi_laplacian;
  const double alpha = spec.alpha;
  const double scale = 1.0 / std::tgamma(1.0 + alpha);

  out.psi = nullptr;
  out.psi_laplacian = nullptr;
  out.boundary = [b = spec.boundary, psi](double x, double y, double t) {
    return (b ? b(x, y, t) : 0.0) - psi(x, y);
  };
  out.forcing = [f = spec.forcing, lap, alpha, scale](double x, double y, double t) {
    const double base = f ? f(x, y, t) : 0.0;
    return base + lap(x, y) * std::pow(t, alpha) * scale;
  };
  if (spec.exact)
    out.exact = [u = spec.exact, psi](double x, double y, double t) {
      return u(x, y, t) - psi(x, y);
    };
  if (spec.exact_laplacian)
    out.exact_laplacian = [l = spec.exact_laplacian, lap](double x, double y, double t) {
      return l(x, y, t) - lap(x, y);
    };
  return out;
}

/// Zero data, forcing chosen so that u = sin(x) sin(y) t^(alpha+3) on
/// (0, pi)^2 with T = 1.
inline ProblemSpec make_example1(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
  ProblemSpec p;
  p.name = "example1";
  p.alpha = alpha;
  p.L1 = std::numbers::pi;
  p.L2 = std::numbers::pi;
  p.T = 1.0;
  const double memory_coeff =
      2.0 * std::tgamma(alpha + 4.0) / std::tgamma(2.0 * alpha + 4.0);
  p.forcing = [alpha, memory_coeff](double x, double y, double t) {
    return std::sin(x) * std::sin(y) *
           ((alpha + 3.0) * std::pow(t, alpha + 2.0) +
            memory_coeff * std::pow(t, 2.0 * alpha + 3.0));
  };
  p.exact = [alpha](double x, double y, double t) {
    return std::sin(x) * std::sin(y) * std::pow(t, alpha + 3.0);
  };
  p.exact_dt = [alpha](double x, double y, double t) {
    return (alpha + 3.0) * std::sin(x) * std::sin(y) * std::pow(t, alpha + 2.0);
  };
  p.exact_laplacian = [alpha](double x, double y, double t) {
    return -2.0 * std::sin(x) * std::sin(y) * std::pow(t, alpha + 3.0);
  };
  return p;
}

/// Builds a problem from the source g of the diffusion-wave form. With an
/// analytic I^alpha g it is used directly; otherwise f(t_k) is computed
/// per point by the shifted Grunwald sum on the grid t_k = k * tau, which
/// is second order when g(x, y, 0) = 0. Off-grid times are rejected.
inline ProblemSpec with_source(ProblemSpec spec, SpaceTimeFn g,
                               SpaceTimeFn integrated_g = nullptr,
                               std::optional<double> tau = std::nullopt) {
  if (integrated_g) {
    spec.forcing = std::move(integrated_g);
    return spec;
  }
  if (!tau || !(*tau > 0.0))
    throw SpecificationError(
        "source without analytic integral needs the time step for the Grunwald route");
  const double alpha = spec.alpha;
  const double step = *tau;
  spec.forcing = [g = std::move(g), alpha, step](double x, double y, double t) {
    const double level = t / step;
    const auto k = static_cast<long>(std::llround(level));
    if (std::abs(level - static_cast<double>(k)) > 1e-9 * std::max(1.0, level))
      throw DomainError("Grunwald forcing evaluated off the time grid");
    std::vector<double> samples(static_cast<std::size_t>(k) + 1);
    for (long m = 0; m <= k; ++m)
      samples[static_cast<std::size_t>(m)] = g(x, y, static_cast<double>(m) * step);
    return wsgd_integral_at(samples, static_cast<std::size_t>(k), alpha, step);
  };
  return spec;
}

struct ManufacturedReport {
  double max_residual = 0.0;
  double worst_x = 0.0, worst_y = 0.0, worst_t = 0.0;
  int samples = 0;
};

/// Residual du/dt - phi - I^alpha(Laplacian u) - f of the stored exact
/// solution at random interior points. I^alpha is evaluated with the
/// quadrature oracle; missing analytic derivatives fall back to
/// fourth-order central differences.
inline ManufacturedReport verify_manufactured(const ProblemSpec& spec, int samples,
                                              std::uint64_t seed = 20140601,
                                              std::size_t panels = 2000) {
  if (!spec.exact)
    throw UnsupportedStudyError("manufactured check needs an exact solution");
  const SpaceTimeFn& u = spec.exact;

  auto du_dt = [&](double x, double y, double t) {
    if (spec.exact_dt)
      return spec.exact_dt(x, y, t);
    const double h = 1e-3 * std::max(spec.T, 1.0);
    return (-u(x, y, t + 2 * h) + 8 * u(x, y, t + h) - 8 * u(x, y, t - h) +
            u(x, y, t - 2 * h)) / (12 * h);
  };
  auto laplacian = [&](double x, double y, double t) {
    if (spec.exact_laplacian)
      return spec.exact_laplacian(x, y, t);
    const double h = 1e-3 * std::max(spec.L1, spec.L2);
    auto d2 = [&](auto&& g) {
      return (-g(2 * h) + 16 * g(h) - 30 * g(0.0) + 16 * g(-h) - g(-2 * h)) /
             (12 * h * h);
    };
    return d2([&](double s) { return u(x + s, y, t); }) +
           d2([&](double s) { return u(x, y + s, t); });
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ManufacturedReport report;
  for (int s = 0; s < samples; ++s) {
    const double x = spec.L1 * (0.02 + 0.96 * unit(rng));
    const double y = spec.L2 * (0.02 + 0.96 * unit(rng));
    // Keep t away from 0 so the difference stencils stay in t > 0.
    const double t = spec.T * (0.05 + 0.95 * unit(rng));
    const double memory = rl_integral_oracle(
        [&](double s_) { return laplacian(x, y, s_); }, spec.alpha, t, panels);
    const double r = du_dt(x, y, t) - spec.phi_at(x, y) - memory - spec.forcing_at(x, y, t);
    if (!(std::abs(r) <= report.max_residual)) {
      report.max_residual = std::abs(r);
      report.worst_x = x;
      report.worst_y = y;
      report.worst_t = t;
    }
    ++report.samples;
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON problem files
//
// {
//   "name": "my-problem",
//   "alpha": 0.5,                       optional default, overridable
//   "domain": [ "pi", "pi" ],           numbers or constant expressions
//   "T": 1,
//   "phi": "0", "psi": "0", "psi_laplacian": "0",
//   "boundary": "0",
//   "forcing": "sin(x)*sin(y)*t^2",
//   "exact": "...", "exact_dt": "...", "exact_laplacian": "..."
// }
//
// All function entries are optional strings in the expression grammar of
// expr.hpp; alpha is available as a parameter.

namespace detail {

inline double json_constant(const nlohmann::json& v, const Expression::Params& params,
                            const char* what) {
  if (v.is_number())
    return v.get<double>();
  if (v.is_string()) {
    Expression e = Expression::parse(v.get<std::string>(), params);
    if (!e.is_constant())
      throw SpecificationError(std::string(what) + " must be a constant expression");
    return e(0.0, 0.0, 0.0);
  }
  throw SpecificationError(std::string(what) + " must be a number or expression string");
}

} // namespace detail

inline ProblemSpec problem_from_json(const nlohmann::json& doc,
                                     std::optional<double> alpha_override = std::nullopt) {
  if (!doc.is_object())
    throw SpecificationError("problem file must hold a JSON object");
  static const char* known[] = {"name", "alpha", "domain", "T", "phi", "psi",
                                "psi_laplacian", "boundary", "forcing", "exact",
                                "exact_dt", "exact_laplacian"};
  for (const auto& item : doc.items())
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return item.key() == k; }) == std::end(known))
      throw SpecificationError("unknown problem key '" + item.key() + "'");

  ProblemSpec p;
  p.name = doc.value("name", std::string("user"));
  if (alpha_override)
    p.alpha = *alpha_override;
  else if (doc.contains("alpha"))
    p.alpha = detail::json_constant(doc["alpha"], {}, "alpha");
  else
    throw SpecificationError("problem file has no alpha and none was given");

  const Expression::Params params{{"alpha", p.alpha}};
  if (doc.contains("domain")) {
    const auto& d = doc["domain"];
    if (!d.is_array() || d.size() != 2)
      throw SpecificationError("domain must be a two-element array");
    p.L1 = detail::json_constant(d[0], params, "domain[0]");
    p.L2 = detail::json_constant(d[1], params, "domain[1]");
  }
  if (doc.contains("T"))
    p.T = detail::json_constant(doc["T"], params, "T");

  auto expr = [&](const char* key) -> std::optional<Expression> {
    if (!doc.contains(key))
      return std::nullopt;
    if (!doc[key].is_string() && !doc[key].is_number())
      throw SpecificationError(std::string(key) + " must be an expression string");
    const std::string text =
        doc[key].is_string() ? doc[key].get<std::string>() : doc[key].dump();
    return Expression::parse(text, params);
  };
  auto space = [](const Expression& e) -> SpaceFn {
    return [e](double x, double y) { return e(x, y, 0.0); };
  };
  auto spacetime = [](const Expression& e) -> SpaceTimeFn {
    return [e](double x, double y, double t) { return e(x, y, t); };
  };

  if (auto e = expr("phi"))
    p.phi = space(*e);
  if (auto e = expr("psi"); e && !(e->is_constant() && (*e)(0, 0, 0) == 0.0))
    p.psi = space(*e);
  if (p.psi) {
    auto lap = expr("psi_laplacian");
    if (!lap)
      throw SpecificationError("psi given without psi_laplacian");
    p.psi_laplacian = space(*lap);
  }
  if (auto e = expr("boundary"))
    p.boundary = spacetime(*e);
  if (auto e = expr("forcing"))
    p.forcing = spacetime(*e);
  if (auto e = expr("exact"))
    p.exact = spacetime(*e);
  if (auto e = expr("exact_dt"))
    p.exact_dt = spacetime(*e);
  if (auto e = expr("exact_laplacian"))
    p.exact_laplacian = spacetime(*e);
  p.validate();
  return p;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

/// Problem constructor parametrised by alpha, for refinement studies.
using ProblemFactory = std::function<ProblemSpec(double alpha)>;

/// "example1" or the path of a JSON problem file.
inline ProblemFactory resolve_problem(const std::string& id) {
  if (id == "example1")
    return make_example1;
  nlohmann::json doc = read_json_file(id);
  return [doc](double alpha) { return problem_from_json(doc, alpha); };
}

} // namespace fdwave

#endif // FDWAVE_PROBLEMS_HPP
