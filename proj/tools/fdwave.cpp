// fdwave: single solves, refinement studies and verification suites for the
// compact ADI diffusion-wave solver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fdwave/fdwave.hpp"

namespace fs = std::filesystem;
using namespace fdwave;

namespace {

struct Options {
  std::string config;
  std::string problem = "example1";
  std::vector<double> alphas;
  std::string axis = "temporal";
  std::vector<int> ladder;
  std::string fixed;
  std::string out = ".";
  std::vector<std::string> emit;
  int M = 16;
  int N = 10;
  bool snapshots = false;
  std::string suite = "all";
  int samples = 100;
  int size = 12;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      items.push_back(item);
  return items;
}

std::set<std::string> emit_set(const std::vector<std::string>& raw) {
  std::set<std::string> out;
  for (const auto& r : raw)
    for (const auto& item : split_list(r)) {
      if (item != "table" && item != "csv" && item != "svg")
        throw ConfigError("unknown --emit target '" + item + "'");
      out.insert(item);
    }
  return out;
}

/// Values from a JSON config file replace the corresponding flags.
void apply_config(Options& o) {
  if (o.config.empty())
    return;
  const nlohmann::json doc = read_json_file(o.config);
  if (!doc.is_object())
    throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "problem") o.problem = value.get<std::string>();
      else if (key == "alpha")
        o.alphas = value.is_array() ? value.get<std::vector<double>>()
                                    : std::vector<double>{value.get<double>()};
      else if (key == "axis") o.axis = value.get<std::string>();
      else if (key == "ladder") o.ladder = value.get<std::vector<int>>();
      else if (key == "fixed")
        o.fixed = value.is_string() ? value.get<std::string>() : value.dump();
      else if (key == "out") o.out = value.get<std::string>();
      else if (key == "emit")
        o.emit = value.is_array() ? value.get<std::vector<std::string>>()
                                  : std::vector<std::string>{value.get<std::string>()};
      else if (key == "M") o.M = value.get<int>();
      else if (key == "N") o.N = value.get<int>();
      else if (key == "snapshots") o.snapshots = value.get<bool>();
      else if (key == "suite") o.suite = value.get<std::string>();
      else if (key == "samples") o.samples = value.get<int>();
      else if (key == "size") o.size = value.get<int>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

/// Alpha for a single solve: the flag, else the problem file's default.
double single_alpha(const Options& o) {
  if (o.alphas.size() > 1)
    throw ConfigError("solve takes a single alpha");
  if (!o.alphas.empty())
    return o.alphas.front();
  if (o.problem != "example1") {
    const auto doc = read_json_file(o.problem);
    if (doc.contains("alpha"))
      return problem_from_json(doc).alpha;
  }
  throw ConfigError("no alpha given");
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + o.out + "': " + ec.message());
  return dir;
}

int run_solve(Options o) {
  apply_config(o);
  const auto emit = emit_set(o.emit.empty() ? std::vector<std::string>{"table"} : o.emit);
  const double alpha = single_alpha(o);
  const ProblemSpec original = resolve_problem(o.problem)(alpha);
  const ProblemSpec problem = homogenize_initial(original);
  const Mesh mesh = make_mesh(problem, o.M, o.M, o.N);
  SolveOptions options;
  options.store_snapshots = o.snapshots;
  const SolveResult result = solve(problem, mesh, options);

  // Report the original unknown u = v + psi.
  GridFn final_u = result.final_level;
  if (original.psi)
    final_u += GridFn::sample(mesh, original.psi);

  std::printf("problem %s  alpha %g  M %d  N %d  h %.6g  tau %.6g\n", problem.name.c_str(), alpha,
              mesh.M1, mesh.N, mesh.h1(), mesh.tau());
  std::printf("max |u(T)| (interior) %.6e\n", norm_inf_interior(final_u));
  if (result.e_inf)
    std::printf("E_inf %.4e\n", *result.e_inf);

  if (emit.count("csv") || emit.count("svg")) {
    const fs::path dir = output_dir(o);
    if (emit.count("csv")) {
      write_csv(final_u, (dir / "final.csv").string());
      std::ofstream steps(dir / "steps.csv");
      if (!steps)
        throw IoError("cannot write steps.csv");
      write_step_reports(result.reports, steps);
      for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        GridFn level = result.snapshots[k];
        if (original.psi)
          level += GridFn::sample(mesh, original.psi);
        char name[32];
        std::snprintf(name, sizeof name, "level_%05zu.csv", k);
        write_csv(level, (dir / name).string());
      }
    }
    if (emit.count("svg")) {
      emit_heatmap(final_u, (dir / "numerical.svg").string(), "numerical solution at T");
      if (original.exact) {
        const GridFn exact = GridFn::sample(
            mesh, [&](double x, double y) { return original.exact(x, y, mesh.T); });
        emit_heatmap(exact, (dir / "exact.svg").string(), "exact solution at T");
        GridFn err = exact;
        err -= final_u;
        emit_heatmap(err, (dir / "error.svg").string(), "exact - numerical at T");
      }
    }
  }
  return 0;
}

int run_study_cmd(Options o) {
  apply_config(o);
  const auto emit = emit_set(o.emit.empty() ? std::vector<std::string>{"table"} : o.emit);
  if (emit.count("svg"))
    throw ConfigError("study emits table and csv only; use solve for heatmaps");
  StudyConfig config;
  config.problem = o.problem;
  config.axis = parse_axis(o.axis);
  const ProblemFactory factory = resolve_problem(o.problem);
  if (!o.alphas.empty())
    config.alphas = o.alphas;
  else
    config.alphas = {single_alpha(o)};
  const ProblemSpec probe = factory(config.alphas.front());
  const bool temporal = config.axis == RefinementAxis::Temporal;
  if (!o.fixed.empty())
    config.fixed = parse_fixed(o.fixed, config.axis, temporal ? probe.L1 : probe.T);
  else
    config.fixed = temporal ? 16 : 1000;
  if (!o.ladder.empty())
    config.ladder = o.ladder;
  else if (!temporal)
    config.ladder = {4, 8, 16};

  const auto rows = run_study(config, factory);
  if (emit.count("table"))
    std::cout << emit_table(rows);
  if (emit.count("csv")) {
    const fs::path dir = output_dir(o);
    emit_csv(rows, (dir / "study.csv").string());
  }
  return 0;
}

int run_verify(Options o) {
  apply_config(o);
  const std::vector<double> five{0.1, 0.25, 0.5, 0.75, 0.9};
  const std::vector<double> three{0.1, 0.5, 0.9};
  const int n = std::max(2, o.size);
  const std::vector<std::array<int, 3>> meshes{{3, 3, 4}, {n / 2 + 1, n, 4}, {n, n, 8}};
  std::vector<CheckResult> results;
  auto want = [&](const char* name) { return o.suite == "all" || o.suite == name; };
  bool matched = false;
  if (want("weights")) { matched = true; results.push_back(check_weight_recurrence(five)); }
  if (want("lambda")) { matched = true; results.push_back(check_lambda_positivity(five, o.samples * 100)); }
  if (want("wsgd")) { matched = true; results.push_back(check_wsgd_order({0.25, 0.5, 0.75})); }
  if (want("operators")) { matched = true; results.push_back(check_operator_identities(o.samples)); }
  if (want("adi")) { matched = true; results.push_back(check_adi_equivalence(three, meshes)); }
  if (want("stability")) { matched = true; results.push_back(check_stability(20)); }
  if (want("manufactured")) { matched = true; results.push_back(check_manufactured(five)); }
  if (!matched)
    throw ConfigError("unknown suite '" + o.suite + "'");
  bool ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %-30s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

std::string json_escape(const std::string& s) { return nlohmann::json(s).dump(); }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact ADI solver for the 2D time-fractional diffusion-wave equation"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file; its values override flags");
    sub->add_option("--problem", o.problem, "example1 or a JSON problem file");
    sub->add_option("--alpha", o.alphas, "fractional order(s) alpha = gamma - 1 in (0,1)")
        ->delimiter(',');
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--emit", o.emit, "outputs: table,csv,svg")->delimiter(',');
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "run a single solve");
  common(solve_cmd);
  solve_cmd->add_option("--M", o.M, "intervals per space axis")->check(CLI::Range(2, 1 << 20));
  solve_cmd->add_option("--N", o.N, "time steps")->check(CLI::Range(1, 1 << 28));
  solve_cmd->add_flag("--snapshots", o.snapshots, "write every time level as CSV");

  CLI::App* study_cmd = app.add_subcommand("study", "refinement study with observed rates");
  common(study_cmd);
  study_cmd->add_option("--axis", o.axis, "temporal or spatial");
  study_cmd->add_option("--ladder", o.ladder, "N values (temporal) or M values (spatial)")
      ->delimiter(',');
  study_cmd->add_option("--fixed", o.fixed, "held resolution: M=16, h=pi/16, N=10000, tau=1e-4");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run property and oracle suites");
  verify_cmd->add_option("--config", o.config, "JSON config file");
  verify_cmd->add_option("--suite", o.suite,
                         "all|weights|lambda|wsgd|operators|adi|stability|manufactured");
  verify_cmd->add_option("--samples", o.samples, "random fields per operator suite");
  verify_cmd->add_option("--size", o.size, "largest mesh for the ADI/direct comparison")
      ->check(CLI::Range(3, 32));

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return run_solve(o);
    if (study_cmd->parsed())
      return run_study_cmd(o);
    return run_verify(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error kind=%s message=%s\n", e.kind().c_str(),
                 json_escape(e.what()).c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error kind=internal message=%s\n", json_escape(e.what()).c_str());
    return 3;
  }
}
