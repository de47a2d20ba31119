// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elastica/elastica.h"
#include "svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using elastica_cli::Series;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_solver = 2;
constexpr int exit_contraction = 3;
constexpr double quarter_pi_sq = 3.14159265358979323846 * 3.14159265358979323846 / 4.0;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldDeleter {
  void operator()(elastica_field* f) const { elastica_field_destroy(f); }
};
struct ProblemDeleter {
  void operator()(elastica_problem* p) const { elastica_problem_destroy(p); }
};
struct ResultDeleter {
  void operator()(elastica_result* r) const { elastica_result_destroy(r); }
};
using Field = std::unique_ptr<elastica_field, FieldDeleter>;
using Problem = std::unique_ptr<elastica_problem, ProblemDeleter>;
using Result = std::unique_ptr<elastica_result, ResultDeleter>;

std::string describe(elastica_status st, const std::string& what) {
  return what + ": " + elastica_status_name(st) + ": " + elastica_last_error();
}

void check(elastica_status st, const std::string& what) {
  if (st != ELASTICA_OK) throw SolverError(describe(st, what));
}

std::vector<double> values_of(const elastica_field* f) {
  std::vector<double> v(elastica_field_size(f));
  check(elastica_field_values(f, v.data(), v.size()), "field values");
  return v;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// (1/2) int (a - b)^2 by the trapezoid rule on the uniform grid.
double half_misfit(const std::vector<double>& a, const std::vector<double>& b) {
  const double ds = 1.0 / static_cast<double>(a.size() - 1);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double w = (j == 0 || j + 1 == a.size()) ? 0.5 * ds : ds;
    s += w * (a[j] - b[j]) * (a[j] - b[j]);
  }
  return 0.5 * s;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---------------------------------------------------------------- config

class Schema {
 public:
  Schema(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : doc_.items()) {
      if (!allowed.count(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

  bool has(const char* key) const { return doc_.contains(key); }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!doc_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(where_ + ": missing required key '" + key + "'");
    }
    const json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(where_ + ": '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where_ + ": '" + key + "' must be finite");
    return x;
  }

  double positive(const char* key, std::optional<double> fallback = std::nullopt) const {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(where_ + ": '" + key + "' must be > 0");
    return x;
  }

  int integer(const char* key, int fallback, int min_value) const {
    if (!doc_.contains(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where_ + ": '" + key + "' must be an integer");
    const long long x = v.get<long long>();
    if (x < min_value || x > 100000000) {
      throw ConfigError(where_ + ": '" + key + "' must be an integer >= " + std::to_string(min_value));
    }
    return static_cast<int>(x);
  }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!doc_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(where_ + ": missing required key '" + key + "'");
    }
    if (!doc_.at(key).is_string()) throw ConfigError(where_ + ": '" + key + "' must be a string");
    return doc_.at(key).get<std::string>();
  }

  const json& at(const char* key) const {
    if (!doc_.contains(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
    return doc_.at(key);
  }

  const std::string& where() const { return where_; }

 private:
  const json& doc_;
  std::string where_;
};

struct Context {
  std::string command;
  json config;
  fs::path config_dir;
  fs::path out;
  int grid = 400;
  bool quiet = false;
  int threads = 1;
  std::vector<std::string> outputs;
  json details = json::object();

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return out / name;
  }
  void log(const std::string& msg) const {
    if (!quiet) std::cerr << "[elastica " << command << "] " << msg << '\n';
  }
};

/// A field given as a preset name, {"preset": name, "a": value} or {"csv": path}.
Field load_field(const json& spec, const Context& ctx, const std::string& where) {
  std::string preset;
  double a = 0.0;
  elastica_field* raw = nullptr;
  if (spec.is_string()) {
    preset = spec.get<std::string>();
  } else if (spec.is_object()) {
    Schema s(spec, where);
    s.allow({"preset", "a", "csv"});
    if (s.has("csv") == s.has("preset")) throw ConfigError(where + ": give exactly one of 'preset' or 'csv'");
    if (s.has("csv")) {
      fs::path p = s.string("csv");
      if (p.is_relative()) p = ctx.config_dir / p;
      const elastica_status st = elastica_field_read_csv(p.string().c_str(), &raw);
      if (st != ELASTICA_OK) throw ConfigError(describe(st, where + " (" + p.string() + ")"));
      Field f(raw);
      if (elastica_field_cells(f.get()) != ctx.grid) {
        throw ConfigError(where + ": CSV has " + std::to_string(elastica_field_cells(f.get())) +
                          " cells but the run uses " + std::to_string(ctx.grid));
      }
      return f;
    }
    preset = s.string("preset");
    if (preset == "parabolic") {
      a = s.number("a");
    } else if (s.has("a")) {
      throw ConfigError(where + ": 'a' only applies to the parabolic preset");
    }
  } else {
    throw ConfigError(where + ": expected a preset name or an object");
  }
  if (preset == "parabolic" && spec.is_string()) throw ConfigError(where + ": parabolic preset needs {\"a\": ...}");
  if (preset != "zero" && preset != "parabolic" && preset != "quarter-turn") {
    throw ConfigError(where + ": unknown preset '" + preset + "' (zero, parabolic, quarter-turn)");
  }
  const elastica_status st = elastica_field_preset(ctx.grid, preset.c_str(), a, &raw);
  if (st != ELASTICA_OK) throw ConfigError(describe(st, where));
  return Field(raw);
}

void require_clamped(const elastica_field* f, const std::string& where) {
  if (std::abs(values_of(f).front()) > 1e-12) throw ConfigError(where + ": value at s = 0 must be 0");
}

std::pair<double, double> load_vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + ": expected [x, y]");
  }
  const double x = v[0].get<double>();
  const double y = v[1].get<double>();
  if (!std::isfinite(x) || !std::isfinite(y)) throw ConfigError(where + ": must be finite");
  return {x, y};
}

elastica_problem_params load_params(const Schema& s, bool need_weights) {
  elastica_problem_params p;
  elastica_problem_params_default(&p);
  if (need_weights) {
    p.epsilon = s.positive("epsilon");
    p.gamma = s.positive("gamma");
  }
  p.cap = s.positive("cap", p.cap);
  if (p.cap >= quarter_pi_sq) throw ConfigError(s.where() + ": 'cap' must be < pi^2/4");
  p.inner_tol = s.positive("inner_tol", p.inner_tol);
  p.outer_tol = s.positive("outer_tol", p.outer_tol);
  p.inner_max = s.integer("inner_max", p.inner_max, 1);
  p.outer_max = s.integer("outer_max", p.outer_max, 1);
  return p;
}

// ---------------------------------------------------------------- outputs

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
    o << text;
    if (!o) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(Context& ctx, const std::string& name, const json& doc) {
  write_text_atomic(ctx.file(name), doc.dump(2) + "\n");
}

void write_field(Context& ctx, const std::string& name, const elastica_field* f) {
  check(elastica_field_write_csv(f, ctx.file(name).string().c_str()), "write " + name);
}

void write_curve(Context& ctx, const std::string& name, const elastica_field* theta, double ell = 1.0) {
  check(elastica_write_curve_csv(theta, ell, ctx.file(name).string().c_str()), "write " + name);
}

void plot(Context& ctx, const std::string& name, const std::string& title, const std::vector<Series>& series,
          bool equal_aspect) {
  elastica_cli::write_svg(ctx.file(name), title, series, equal_aspect);
}

Series curve_series(const Context& ctx, const std::string& csv, const std::string& label) {
  return elastica_cli::read_columns(ctx.out / csv, "x", "y", label);
}

// ---------------------------------------------------------------- commands

struct Outcome {
  int code = exit_ok;
  std::string status = "ok";
  std::string message;
};

using Runner = std::function<Outcome(Context&)>;

/// Validates the config, then returns the closure that performs the run.
Runner prepare_solve_state(Context& ctx) {
  Schema s(ctx.config, "solve-state config");
  s.allow({"grid", "h", "alpha", "initial", "ell"});
  const auto [hx, hy] = load_vec2(s.at("h"), "solve-state config: 'h'");
  auto alpha = std::make_shared<Field>(load_field(s.has("alpha") ? s.at("alpha") : json("zero"), ctx, "alpha"));
  require_clamped(alpha->get(), "alpha");
  auto initial = std::make_shared<Field>();
  if (s.has("initial")) {
    *initial = load_field(s.at("initial"), ctx, "initial");
    require_clamped(initial->get(), "initial");
  }
  const double ell = s.positive("ell", 1.0);

  return [=](Context& c) {
    elastica_field* raw = nullptr;
    check(elastica_solve_state(hx, hy, alpha->get(), initial->get(), &raw), "solve_state");
    Field theta(raw);
    double residual = 0.0;
    double energy = 0.0;
    check(elastica_state_residual(theta.get(), alpha->get(), hx, hy, &residual), "state_residual");
    check(elastica_energy(theta.get(), alpha->get(), hx, hy, &energy), "energy");
    write_field(c, "theta.csv", theta.get());
    write_curve(c, "curve.csv", theta.get(), ell);
    plot(c, "curve.svg", "deformed centerline", {curve_series(c, "curve.csv", "r(s)")}, true);
    const std::vector<double> v = values_of(theta.get());
    c.details = {{"h", {hx, hy}},
                 {"h_magnitude", std::hypot(hx, hy)},
                 {"state_residual", residual},
                 {"energy", energy},
                 {"theta_sup_norm", sup_abs(v)},
                 {"theta_tip", v.back()}};
    c.log("theta(1) = " + std::to_string(v.back()) + ", residual " + std::to_string(residual));
    return Outcome{};
  };
}

json trace_json(const elastica_result* r) {
  json inner = json::array();
  const std::size_t loops = elastica_result_inner_loop_count(r);
  for (std::size_t k = 0; k < loops; ++k) {
    std::size_t n = 0;
    check(elastica_result_inner_ratios(r, k, nullptr, 0, &n), "inner ratios");
    std::vector<double> ratios(n);
    check(elastica_result_inner_ratios(r, k, ratios.data(), n, &n), "inner ratios");
    json row = json::array();
    for (double x : ratios) row.push_back(number_or_null(x));
    inner.push_back(row);
  }
  std::size_t n = 0;
  check(elastica_result_outer_ratios(r, nullptr, 0, &n), "outer ratios");
  std::vector<double> ratios(n);
  check(elastica_result_outer_ratios(r, ratios.data(), n, &n), "outer ratios");
  json outer = json::array();
  for (double x : ratios) outer.push_back(number_or_null(x));
  return {{"inner_ratios", inner}, {"outer_ratios", outer}};
}

json bound_json(const elastica_bound& b) { return {{"pass", b.pass != 0}, {"lhs", b.lhs}, {"rhs", b.rhs}}; }

Runner prepare_program(Context& ctx) {
  Schema s(ctx.config, "program config");
  s.allow({"grid", "targets", "epsilon", "gamma", "cap", "inner_tol", "outer_tol", "inner_max", "outer_max", "solver",
           "gradient_tol", "max_iterations"});
  const elastica_problem_params params = load_params(s, true);
  const std::string solver = s.string("solver", std::string("nested"));
  if (solver != "nested" && solver != "direct") throw ConfigError("program config: 'solver' must be nested or direct");
  const double gradient_tol = s.positive("gradient_tol", 1e-6);
  const int max_iterations = s.integer("max_iterations", 20000, 1);
  const json& tj = s.at("targets");
  if (!tj.is_array() || tj.empty()) throw ConfigError("program config: 'targets' must be a non-empty array");

  elastica_problem* raw = nullptr;
  elastica_status st = elastica_problem_create(&params, &raw);
  if (st != ELASTICA_OK) throw ConfigError(describe(st, "program config"));
  auto problem = std::make_shared<Problem>(raw);
  auto targets = std::make_shared<std::vector<Field>>();
  for (std::size_t i = 0; i < tj.size(); ++i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    targets->push_back(load_field(tj[i], ctx, where));
    require_clamped(targets->back().get(), where);
    st = elastica_problem_add_target(problem->get(), targets->back().get());
    if (st != ELASTICA_OK) throw ConfigError(describe(st, where));
  }

  return [=](Context& c) {
    elastica_result* rr = nullptr;
    if (solver == "nested") {
      check(elastica_program(problem->get(), &rr), "program");
    } else {
      check(elastica_direct_minimize(problem->get(), gradient_tol, max_iterations, &rr), "direct_minimize");
    }
    Result result(rr);
    elastica_report rep;
    check(elastica_result_report(result.get(), &rep), "report");

    elastica_field* fa = nullptr;
    check(elastica_result_alpha(result.get(), &fa), "alpha");
    Field alpha(fa);
    write_field(c, "alpha.csv", alpha.get());

    const std::size_t n = elastica_result_target_count(result.get());
    std::ostringstream controls;
    controls << "target,hx,hy\n" << std::setprecision(17);
    json hs = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      double hx = 0.0;
      double hy = 0.0;
      check(elastica_result_control(result.get(), i, &hx, &hy), "control");
      controls << i + 1 << ',' << hx << ',' << hy << '\n';
      hs.push_back({hx, hy});
    }
    write_text_atomic(c.file("controls.csv"), controls.str());

    json attainment = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      const std::string k = std::to_string(i + 1);
      elastica_field* ft = nullptr;
      check(elastica_result_theta(result.get(), i, &ft), "theta");
      Field theta(ft);
      write_field(c, "theta_" + k + ".csv", theta.get());
      write_field(c, "target_" + k + ".csv", (*targets)[i].get());
      write_curve(c, "curve_" + k + ".csv", theta.get());
      write_curve(c, "target_curve_" + k + ".csv", (*targets)[i].get());
      plot(c, "overlay_" + k + ".svg", "target " + k + ": attained vs prescribed",
           {curve_series(c, "curve_" + k + ".csv", "attained"),
            curve_series(c, "target_curve_" + k + ".csv", "target")},
           true);
      attainment.push_back(half_misfit(values_of(theta.get()), values_of((*targets)[i].get())));
    }

    const json report = {
        {"solver", solver},
        {"status", elastica_solve_status_name(rep.status)},
        {"message", elastica_result_message(result.get())},
        {"inner_iterations", rep.inner_iterations},
        {"outer_iterations", rep.outer_iterations},
        {"contraction",
         {{"inner", number_or_null(rep.inner_contraction)},
          {"outer", number_or_null(rep.outer_contraction)},
          {"lost", rep.contraction_lost != 0},
          {"per_iteration", trace_json(result.get())}}},
        {"cap_exceeded", rep.cap_exceeded != 0},
        {"residuals",
         {{"state", rep.residual_state},
          {"adjoint", rep.residual_adjoint},
          {"design", rep.residual_design},
          {"control", rep.residual_control}}},
        {"cost", number_or_null(rep.cost)},
        {"gradient_norm", rep.gradient_norm},
        {"controls", hs},
        {"attainment_error", attainment},
        {"audit",
         {{"minimizer_bound", bound_json(rep.minimizer_bound)},
          {"state_bound", bound_json(rep.state_bound)},
          {"cap_membership", bound_json(rep.cap_membership)}}},
        {"epsilon", params.epsilon},
        {"gamma", params.gamma}};
    write_json(c, "report.json", report);
    c.details = {{"status", report["status"]}, {"audit", report["audit"]}, {"contraction", report["contraction"]}};

    Outcome out;
    out.status = elastica_solve_status_name(rep.status);
    out.message = elastica_result_message(result.get());
    if (rep.status == ELASTICA_SOLVE_RESONANT) {
      out.code = exit_solver;
    } else if (rep.status != ELASTICA_SOLVE_CONVERGED) {
      out.code = exit_contraction;
    }
    c.log(out.status + ", cost " + std::to_string(rep.cost));
    return out;
  };
}

Runner prepare_attain(Context& ctx) {
  Schema s(ctx.config, "attain config");
  s.allow({"grid", "target", "H", "H_factor"});
  auto target = std::make_shared<Field>(load_field(s.at("target"), ctx, "target"));
  if (s.has("H") == s.has("H_factor")) throw ConfigError("attain config: give exactly one of 'H' or 'H_factor'");
  const std::optional<double> H = s.has("H") ? std::optional(s.number("H")) : std::nullopt;
  const double factor = s.has("H_factor") ? s.positive("H_factor") : 0.0;

  return [=](Context& c) {
    double curvature = 0.0;
    check(elastica_max_target_curvature(target->get(), &curvature), "max_target_curvature");
    const double h_mag = H ? *H : factor * curvature;
    double hx = 0.0;
    double hy = 0.0;
    elastica_field* fa = nullptr;
    check(elastica_attainable_design(target->get(), h_mag, &hx, &hy, &fa), "attainable_design");
    Field alpha(fa);
    elastica_field* ft = nullptr;
    check(elastica_solve_state(hx, hy, alpha.get(), nullptr, &ft), "solve_state");
    Field theta(ft);
    double residual = 0.0;
    check(elastica_state_residual(target->get(), alpha.get(), hx, hy, &residual), "state_residual");
    const double err = half_misfit(values_of(theta.get()), values_of(target->get()));

    write_field(c, "alpha.csv", alpha.get());
    write_field(c, "theta.csv", theta.get());
    write_field(c, "target.csv", target->get());
    write_curve(c, "curve.csv", theta.get());
    write_curve(c, "target_curve.csv", target->get());
    plot(c, "overlay.svg", "attainable design round trip",
         {curve_series(c, "curve.csv", "attained"), curve_series(c, "target_curve.csv", "target")}, true);
    const json doc = {{"H", h_mag},
                      {"max_target_curvature", curvature},
                      {"h", {hx, hy}},
                      {"psi", std::atan2(hy, hx)},
                      {"target_state_residual", residual},
                      {"attainment_error", err}};
    write_json(c, "attain.json", doc);
    c.details = doc;
    c.log("attainment error " + std::to_string(err));
    return Outcome{};
  };
}

Runner prepare_bifurcate(Context& ctx) {
  Schema s(ctx.config, "bifurcate config");
  s.allow({"grid", "H_min", "H_max", "H_step", "profile_H"});
  const double hmin = s.positive("H_min");
  const double hmax = s.positive("H_max");
  const double step = s.positive("H_step");
  if (hmax < hmin) throw ConfigError("bifurcate config: H_max must be >= H_min");
  if ((hmax - hmin) / step > 1e6) throw ConfigError("bifurcate config: too many H values");
  const std::optional<double> profile_h = s.has("profile_H") ? std::optional(s.positive("profile_H")) : std::nullopt;

  return [=](Context& c) {
    std::ostringstream csv;
    csv << "H,theta1\n" << std::setprecision(17);
    const long count = static_cast<long>(std::floor((hmax - hmin) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) {
      const double H = hmin + static_cast<double>(k) * step;
      double theta1 = 0.0;
      const elastica_status st = elastica_bifurcation_tip(H, &theta1);
      if (st == ELASTICA_NO_NONTRIVIAL_BRANCH) {
        theta1 = 0.0;
      } else {
        check(st, "bifurcation_tip");
      }
      csv << H << ',' << theta1 << '\n';
    }
    write_text_atomic(c.file("branch.csv"), csv.str());
    plot(c, "branch.svg", "tip rotation on the buckled branch",
         {elastica_cli::read_columns(c.out / "branch.csv", "H", "theta1", "theta1(H)")}, false);
    c.details = {{"H_values", count}};
    if (profile_h) {
      double theta1 = 0.0;
      elastica_field* fp = nullptr;
      check(elastica_bifurcation_profile(*profile_h, c.grid, &theta1, &fp), "bifurcation_profile");
      Field profile(fp);
      elastica_field* fz = nullptr;
      check(elastica_field_preset(c.grid, "zero", 0.0, &fz), "zero design");
      Field zero(fz);
      double residual = 0.0;
      check(elastica_state_residual(profile.get(), zero.get(), -*profile_h, 0.0, &residual), "state_residual");
      write_field(c, "profile.csv", profile.get());
      write_curve(c, "profile_curve.csv", profile.get());
      plot(c, "profile.svg", "buckled centerline", {curve_series(c, "profile_curve.csv", "r(s)")}, true);
      c.details["profile"] = {{"H", *profile_h}, {"theta1", theta1}, {"state_residual", residual}};
    }
    return Outcome{};
  };
}

Field read_dir_field(const fs::path& dir, const std::string& name) {
  elastica_field* raw = nullptr;
  const fs::path p = dir / name;
  const elastica_status st = elastica_field_read_csv(p.string().c_str(), &raw);
  if (st != ELASTICA_OK) throw ConfigError(describe(st, p.string()));
  return Field(raw);
}

Runner prepare_check(Context& ctx) {
  Schema s(ctx.config, "check config");
  s.allow({"program_dir", "k"});
  fs::path dir = s.string("program_dir");
  if (dir.is_relative()) dir = ctx.config_dir / dir;
  const int k = s.integer("k", 4, 1);
  if (k > ELASTICA_MAX_EIGENVALUES) throw ConfigError("check config: 'k' must be <= 16");

  auto alpha = std::make_shared<Field>(read_dir_field(dir, "alpha.csv"));
  ctx.grid = elastica_field_cells(alpha->get());
  std::ifstream in(dir / "controls.csv");
  if (!in) throw ConfigError("check: cannot open " + (dir / "controls.csv").string());
  std::string line;
  std::getline(in, line);
  if (line != "target,hx,hy") throw ConfigError("check: controls.csv must start with 'target,hx,hy'");
  auto controls = std::make_shared<std::vector<std::pair<double, double>>>();
  auto thetas = std::make_shared<std::vector<Field>>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string idx, x, y;
    std::getline(ss, idx, ',');
    std::getline(ss, x, ',');
    std::getline(ss, y, ',');
    try {
      controls->emplace_back(std::stod(x), std::stod(y));
    } catch (const std::exception&) {
      throw ConfigError("check: malformed controls.csv row '" + line + "'");
    }
    thetas->push_back(read_dir_field(dir, "theta_" + std::to_string(controls->size()) + ".csv"));
  }
  if (controls->empty()) throw ConfigError("check: controls.csv lists no targets");

  return [=](Context& c) {
    json rows = json::array();
    bool all_regular = true;
    for (std::size_t i = 0; i < controls->size(); ++i) {
      elastica_regularity reg;
      const auto [hx, hy] = (*controls)[i];
      check(elastica_regularity_check(hx, hy, alpha->get(), (*thetas)[i].get(), k, &reg), "regularity_check");
      json eig = json::array();
      for (int e = 0; e < reg.count; ++e) eig.push_back(reg.eigenvalues[e]);
      rows.push_back({{"target", i + 1},
                      {"verdict", reg.resonant ? "resonant" : "regular"},
                      {"eigenvalues", eig},
                      {"dist_to_one", reg.dist_to_one},
                      {"tolerance", reg.tolerance},
                      {"h_magnitude", std::hypot(hx, hy)},
                      {"below_uniqueness_threshold", reg.sufficient_condition != 0}});
      all_regular = all_regular && !reg.resonant;
    }
    write_json(c, "regularity.json", {{"targets", rows}, {"all_regular", all_regular}});
    c.details = {{"all_regular", all_regular}};
    c.log(all_regular ? "all targets regular" : "resonance detected");
    return Outcome{};
  };
}

Runner prepare_sweep(Context& ctx) {
  Schema s(ctx.config, "sweep config");
  s.allow({"grid", "target", "epsilons", "cap", "inner_tol", "outer_tol", "inner_max", "outer_max"});
  auto target = std::make_shared<Field>(load_field(s.at("target"), ctx, "target"));
  require_clamped(target->get(), "target");
  const json& ej = s.at("epsilons");
  if (!ej.is_array() || ej.empty()) throw ConfigError("sweep config: 'epsilons' must be a non-empty array");
  std::vector<double> eps;
  for (const json& e : ej) {
    if (!e.is_number() || !(e.get<double>() > 0.0)) throw ConfigError("sweep config: epsilons must be > 0");
    eps.push_back(e.get<double>());
  }
  const elastica_problem_params params = load_params(s, false);

  return [=](Context& c) {
    std::vector<elastica_sweep_row> rows(eps.size());
    check(elastica_epsilon_sweep(target->get(), eps.data(), eps.size(), &params, rows.data()), "epsilon_sweep");
    std::ostringstream csv;
    csv << "epsilon,cost,attainment_error,status\n" << std::setprecision(17);
    json flagged = json::array();
    for (const elastica_sweep_row& r : rows) {
      csv << r.epsilon << ',' << r.cost << ',' << r.attainment_error << ','
          << elastica_solve_status_name(r.status);
      if (r.contraction_lost) {
        csv << "+contraction_lost";
        flagged.push_back(r.epsilon);
      }
      csv << '\n';
    }
    write_text_atomic(c.file("sweep.csv"), csv.str());
    Series series = elastica_cli::read_columns(c.out / "sweep.csv", "epsilon", "attainment_error", "attainment error");
    series.label = "attainment error vs log10(epsilon)";
    for (double& x : series.x) x = std::log10(x);
    plot(c, "sweep.svg", "epsilon sweep", {series}, false);
    c.details = {{"contraction_lost_at", flagged}};
    return Outcome{};
  };
}

// ---------------------------------------------------------------- driver

int parse_threads() {
  const char* env = std::getenv("ELASTICA_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const int n = std::stoi(env, &used);
    if (used != std::string(env).size() || n < 1) throw std::invalid_argument("range");
    return n;
  } catch (const std::exception&) {
    throw ConfigError(std::string("ELASTICA_THREADS must be a positive integer, got '") + env + "'");
  }
}

int run(Context& ctx, const std::string& config_path, std::optional<int> grid_flag) {
  const auto t0 = std::chrono::steady_clock::now();
  Runner runner;
  try {
    ctx.threads = parse_threads();
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config " + config_path);
    try {
      ctx.config = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed JSON in ") + config_path + ": " + e.what());
    }
    ctx.config_dir = fs::absolute(config_path).parent_path();
    if (ctx.config.is_object() && ctx.config.contains("grid")) {
      ctx.grid = Schema(ctx.config, ctx.command + " config").integer("grid", 400, 3);
    }
    if (grid_flag) {
      if (*grid_flag < 3) throw ConfigError("--grid must be >= 3");
      ctx.grid = *grid_flag;
    }
    if (ctx.command == "solve-state") runner = prepare_solve_state(ctx);
    if (ctx.command == "program") runner = prepare_program(ctx);
    if (ctx.command == "attain") runner = prepare_attain(ctx);
    if (ctx.command == "bifurcate") runner = prepare_bifurcate(ctx);
    if (ctx.command == "check") runner = prepare_check(ctx);
    if (ctx.command == "sweep") runner = prepare_sweep(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "elastica " << ctx.command << ": config error: " << e.what() << '\n';
    return exit_config;
  }

  elastica_set_max_threads(ctx.threads);
  Outcome outcome;
  try {
    fs::create_directories(ctx.out);
    outcome = runner(ctx);
  } catch (const SolverError& e) {
    outcome = {exit_solver, "solver_error", e.what()};
  } catch (const std::exception& e) {
    outcome = {exit_solver, "error", e.what()};
  }
  if (outcome.code != exit_ok) std::cerr << "elastica " << ctx.command << ": " << outcome.status << ": " << outcome.message << '\n';

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = {{"tool", "elastica"},
                   {"version", elastica_version()},
                   {"command", ctx.command},
                   {"config", ctx.config},
                   {"grid", ctx.grid},
                   {"threads", ctx.threads},
                   {"status", outcome.status},
                   {"exit_code", outcome.code},
                   {"message", outcome.message},
                   {"timings", {{"total_seconds", seconds}}},
                   {"results", ctx.details}};
  std::vector<std::string> files = ctx.outputs;
  files.push_back("manifest.json");
  manifest["outputs"] = files;
  try {
    fs::create_directories(ctx.out);
    write_text_atomic(ctx.out / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "elastica: failed to write manifest: " << e.what() << '\n';
    return exit_solver;
  }
  return outcome.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape programming of hard-magnetic elastica"};
  app.set_version_flag("--version", std::string(elastica_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<int> grid;
  bool quiet = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-state", "solve the state equation for a given field and design"},
      {"program", "optimize design and controls for a set of target shapes"},
      {"attain", "build the design that attains a single target exactly"},
      {"bifurcate", "tabulate the buckled branch under an axial field"},
      {"check", "Sturm-Liouville regularity audit of a program output directory"},
      {"sweep", "run the nested scheme over a list of epsilon = gamma"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--grid", grid, "number of grid cells (overrides the config)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--quiet", quiet, "suppress progress messages");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  Context ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.out = out_dir;
  ctx.quiet = quiet;
  return run(ctx, config_path, grid);
}
