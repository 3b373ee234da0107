// ordloc: estimators for the larger of two location parameters, with
// calibration, Monte Carlo risk/GPN sweeps and invariant check suites.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 failed checks.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ordloc/calibrate.hpp"
#include "ordloc/checks.hpp"
#include "ordloc/dataset.hpp"
#include "ordloc/estimate.hpp"
#include "ordloc/risklab.hpp"

namespace {

using namespace ordloc;

struct CommonOptions {
  std::string family = "exponential";
  double sigma = 1.0;
  std::string loss = "squared";
  double linex_a = 1.0;
  double quad_tol = 1e-10;
  double root_tol = 1e-12;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--family", opt.family, "Location family")
      ->check(CLI::IsMember({"normal", "exponential"}));
  cmd->add_option("--sigma", opt.sigma, "Known scale of the family")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--loss", opt.loss, "Loss function")
      ->check(CLI::IsMember({"squared", "linex", "absolute"}));
  cmd->add_option("--linex-a", opt.linex_a, "Linex shape (used when --loss=linex)");
  cmd->add_option("--quad-tol", opt.quad_tol, "Quadrature tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--root-tol", opt.root_tol, "Root-finding tolerance")
      ->check(CLI::PositiveNumber);
}

LocationFamily build_family(const CommonOptions& opt) {
  return opt.family == "normal" ? normal_family(opt.sigma)
                                : exponential_family(opt.sigma);
}

LossSpec build_loss(const CommonOptions& opt) {
  const LossSpec::Kind kind = loss_kind_from_name(opt.loss);
  if (kind == LossSpec::Kind::linex) return make_loss(kind, opt.linex_a);
  return make_loss(kind);
}

CalibrationOptions build_cal_options(const CommonOptions& opt) {
  CalibrationOptions cal;
  cal.quad.abs_tol = cal.quad.rel_tol = opt.quad_tol;
  cal.root.tol = opt.root_tol;
  return cal;
}

// "0:5:0.25" (start:end:step) or a comma list "0,0.5,1".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double start = 0, end = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &end, &step) != 3 ||
        step <= 0 || end < start) {
      throw CLI::ValidationError("--theta", "expected start:end:step");
    }
    for (double t = start; t <= end + 1e-12; t += step) grid.push_back(t);
    return grid;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    grid.push_back(std::stod(item));
  }
  if (grid.empty()) throw CLI::ValidationError("--theta", "empty grid");
  return grid;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << content;
}

int cmd_calibrate(const CommonOptions& common, const std::string& u_list,
                  const std::string& out_path) {
  Calibration cal(build_family(common), build_loss(common),
                  build_cal_options(common));
  nlohmann::json j;
  j["family"] = common.family;
  j["sigma"] = common.sigma;
  j["loss"] = common.loss;
  if (common.loss == "linex") j["linex_a"] = common.linex_a;
  j["c0"] = cal.c0();
  j["b0"] = cal.b0();
  j["m0"] = cal.m0();
  j["provenance"] = cal.curve_provenance() == Provenance::closed_form
                        ? "closed_form"
                        : "numeric";
  j["curves"] = nlohmann::json::array();
  if (!u_list.empty()) {
    for (double u : parse_grid(u_list)) {
      j["curves"].push_back({{"u", u},
                             {"c0u", cal.c_zero_u(u)},
                             {"phi_bz", cal.phi_bz(u)},
                             {"m0u", cal.m_zero_u(u)}});
    }
  }
  write_output(out_path, j.dump(2) + "\n");
  return 0;
}

std::vector<LossSpec> parse_losses(const std::string& list, double linex_a) {
  std::vector<LossSpec> losses;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const LossSpec::Kind kind = loss_kind_from_name(item);
    losses.push_back(kind == LossSpec::Kind::linex ? make_loss(kind, linex_a)
                                                   : make_loss(kind));
  }
  return losses;
}

int cmd_estimate_pair(const CommonOptions& common, double x1, double x2,
                      bool all, const std::string& format,
                      const std::string& out_path) {
  Calibration cal(build_family(common), build_loss(common),
                  build_cal_options(common));
  ObservationPair obs{x1, x2};
  std::vector<Estimate> estimates;
  if (all) {
    for (EstimatorKind kind :
         {EstimatorKind::natural, EstimatorKind::stein, EstimatorKind::b0,
          EstimatorKind::brewster_zidek, EstimatorKind::pitman_nearest,
          EstimatorKind::pitman_improved_m0, EstimatorKind::pitman_improved_c0}) {
      estimates.push_back(evaluate(kind, obs, cal));
    }
  } else {
    estimates = {natural(obs, cal), stein(obs, cal), b0_estimator(obs, cal),
                 brewster_zidek(obs, cal)};
  }
  if (format == "json") {
    nlohmann::json j;
    j["x1"] = x1;
    j["x2"] = x2;
    j["u"] = obs.u();
    for (const Estimate& e : estimates) {
      j["estimates"][estimator_name(e.kind)] = {{"value", e.value},
                                                {"shrink", e.shrink}};
    }
    write_output(out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s %14s %14s\n", "estimator", "value",
                  "shrink");
    out << buf;
    for (const Estimate& e : estimates) {
      std::snprintf(buf, sizeof(buf), "%-10s %14.6f %14.6f\n",
                    estimator_name(e.kind), e.value, e.shrink);
      out << buf;
    }
    write_output(out_path, out.str());
  }
  return 0;
}

int cmd_estimate_data(const CommonOptions& common, const std::string& data,
                      const std::string& data2, const std::string& format_in,
                      double sigma_hat, const std::string& reduction,
                      const std::string& losses_list,
                      const std::string& out_path) {
  const ReductionMode mode = reduction == "raw_pair"
                                 ? ReductionMode::raw_pair
                                 : ReductionMode::sample_minimum;
  DataSet ds = format_in == "two_files"
                   ? ingest_two_files(data, data2, mode)
                   : ingest_csv(data, mode);
  for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";

  LocationFamily raw_family = common.family == "normal"
                                  ? normal_family(sigma_hat)
                                  : exponential_family(sigma_hat);
  Reduced red = reduce(ds, raw_family);
  LocationFamily family = common.family == "normal"
                              ? normal_family(red.sigma_eff)
                              : exponential_family(red.sigma_eff);
  EstimateTable table =
      run_estimate_table(red.pair, family, parse_losses(losses_list, common.linex_a));
  std::cout << table.to_text();
  if (!out_path.empty()) write_output(out_path, table.to_json() + "\n");
  return 0;
}

int cmd_ingest(const std::string& data, const std::string& data2,
               const std::string& format_in, const std::string& reduction) {
  const ReductionMode mode = reduction == "raw_pair"
                                 ? ReductionMode::raw_pair
                                 : ReductionMode::sample_minimum;
  DataSet ds = format_in == "two_files" ? ingest_two_files(data, data2, mode)
                                        : ingest_csv(data, mode);
  for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";
  for (int g = 0; g < 2; ++g) {
    const auto& values = ds.groups[g];
    const double min_v = *std::min_element(values.begin(), values.end());
    std::cout << "group '" << ds.labels[g] << "': " << values.size()
              << " values, min " << min_v << "\n";
  }
  return 0;
}

int cmd_risk_sweep(const CommonOptions& common, const std::string& theta,
                   int reps, std::uint64_t seed, const std::string& estimators,
                   const std::string& out_path) {
  SweepConfig cfg;
  cfg.family = build_family(common);
  cfg.loss = build_loss(common);
  cfg.cal_opts = build_cal_options(common);
  cfg.theta_grid = parse_grid(theta);
  cfg.reps = reps;
  cfg.seed = seed;
  std::stringstream ss(estimators);
  std::string item;
  while (std::getline(ss, item, ',')) {
    cfg.estimators.push_back(estimator_kind_from_name(item));
  }
  RiskCurve curve = risk_sweep(cfg);
  write_output(out_path, curve.to_csv());
  return 0;
}

int cmd_gpn_sweep(const CommonOptions& common, const std::string& theta,
                  int reps, std::uint64_t seed, const std::string& est1,
                  const std::string& est2, const std::string& out_path) {
  SweepConfig cfg;
  cfg.family = build_family(common);
  cfg.loss = build_loss(common);
  cfg.cal_opts = build_cal_options(common);
  cfg.theta_grid = parse_grid(theta);
  cfg.reps = reps;
  cfg.seed = seed;
  GPNCurve curve = gpn_sweep(cfg, estimator_kind_from_name(est1),
                             estimator_kind_from_name(est2));
  write_output(out_path, curve.to_csv());
  return 0;
}

int cmd_check(const std::string& suite, const std::string& budget,
              std::uint64_t seed) {
  checks::CheckReport report = checks::run_check(
      checks::suite_from_name(suite), checks::budget_from_name(budget), seed);
  std::cout << report.to_text();
  if (!report.all_pass()) {
    std::cout << "check suite FAILED\n";
    return 3;
  }
  std::cout << "check suite passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Improved estimators of the larger of two location parameters"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string out_path;
  std::string format = "text";

  // calibrate
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Shrink constants and curves as JSON");
  add_common(calibrate_cmd, common);
  std::string u_list;
  calibrate_cmd->add_option("--u", u_list, "Spacing grid (comma list or a:b:step)");
  calibrate_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // estimate
  auto* estimate_cmd =
      app.add_subcommand("estimate", "Evaluate the estimators on data");
  add_common(estimate_cmd, common);
  std::optional<double> x1, x2;
  bool all_estimators = false;
  std::string data, data2, format_in = "two_column_csv";
  double sigma_hat = 322.0;
  std::string reduction = "sample_minimum";
  std::string losses_list = "squared,linex,absolute";
  estimate_cmd->add_option("--x1", x1, "First observation");
  estimate_cmd->add_option("--x2", x2, "Second observation");
  estimate_cmd->add_flag("--all", all_estimators, "Include the Pitman estimators");
  estimate_cmd->add_option("--data", data, "Dataset (group,value CSV)");
  estimate_cmd->add_option("--data2", data2, "Second file for two_files input");
  estimate_cmd->add_option("--format-in", format_in, "Input layout")
      ->check(CLI::IsMember({"two_column_csv", "two_files"}));
  estimate_cmd->add_option("--sigma-hat", sigma_hat,
                           "Assumed common scale of the raw data")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--reduce", reduction, "Reduction mode")
      ->check(CLI::IsMember({"raw_pair", "sample_minimum"}));
  estimate_cmd->add_option("--losses", losses_list,
                           "Comma list of losses for the data table");
  estimate_cmd->add_option("--format", format, "Pair-mode output format")
      ->check(CLI::IsMember({"text", "json"}));
  estimate_cmd->add_option("--out", out_path, "Output file (JSON sidecar)");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate and summarize a dataset");
  std::string ingest_data, ingest_data2, ingest_format = "two_column_csv";
  std::string ingest_reduction = "sample_minimum";
  ingest_cmd->add_option("--data", ingest_data, "Dataset path")->required();
  ingest_cmd->add_option("--data2", ingest_data2, "Second file for two_files input");
  ingest_cmd->add_option("--format-in", ingest_format, "Input layout")
      ->check(CLI::IsMember({"two_column_csv", "two_files"}));
  ingest_cmd->add_option("--reduce", ingest_reduction, "Reduction mode")
      ->check(CLI::IsMember({"raw_pair", "sample_minimum"}));

  // risk-sweep
  auto* risk_cmd = app.add_subcommand("risk-sweep", "Monte Carlo risk curves (CSV)");
  add_common(risk_cmd, common);
  std::string theta = "0:5:0.25";
  int reps = 50000;
  std::uint64_t seed = 42;
  std::string estimators = "natural,stein,b0,bz";
  risk_cmd->add_option("--theta", theta, "Gap grid start:end:step or comma list");
  risk_cmd->add_option("--reps", reps, "Replications per grid point")
      ->check(CLI::PositiveNumber);
  risk_cmd->add_option("--seed", seed, "Stream seed");
  risk_cmd->add_option("--estimators", estimators, "Comma list of estimators");
  risk_cmd->add_option("--out", out_path, "Output CSV (default stdout)");

  // gpn-sweep
  auto* gpn_cmd = app.add_subcommand("gpn-sweep", "Pitman-nearness curves (CSV)");
  add_common(gpn_cmd, common);
  std::string est1 = "pn_m0", est2 = "pn";
  gpn_cmd->add_option("--theta", theta, "Gap grid start:end:step or comma list");
  gpn_cmd->add_option("--reps", reps, "Replications per grid point")
      ->check(CLI::PositiveNumber);
  gpn_cmd->add_option("--seed", seed, "Stream seed");
  gpn_cmd->add_option("--est1", est1, "First estimator");
  gpn_cmd->add_option("--est2", est2, "Second estimator");
  gpn_cmd->add_option("--out", out_path, "Output CSV (default stdout)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Run the invariant suites");
  std::string suite = "all", budget = "quick";
  check_cmd->add_option("--suite", suite, "Which suite")
      ->check(CLI::IsMember({"calibration", "dominance", "gpn", "all"}));
  check_cmd->add_option("--budget", budget, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  check_cmd->add_option("--seed", seed, "Stream seed");

  try {
    app.parse(argc, argv);

    if (calibrate_cmd->parsed()) return cmd_calibrate(common, u_list, out_path);
    if (estimate_cmd->parsed()) {
      if (!data.empty()) {
        return cmd_estimate_data(common, data, data2, format_in, sigma_hat,
                                 reduction, losses_list, out_path);
      }
      if (!x1.has_value() || !x2.has_value()) {
        std::cerr << "estimate needs either --x1/--x2 or --data\n";
        return 1;
      }
      return cmd_estimate_pair(common, *x1, *x2, all_estimators, format,
                               out_path);
    }
    if (ingest_cmd->parsed()) {
      return cmd_ingest(ingest_data, ingest_data2, ingest_format,
                        ingest_reduction);
    }
    if (risk_cmd->parsed()) {
      return cmd_risk_sweep(common, theta, reps, seed, estimators, out_path);
    }
    if (gpn_cmd->parsed()) {
      return cmd_gpn_sweep(common, theta, reps, seed, est1, est2, out_path);
    }
    if (check_cmd->parsed()) return cmd_check(suite, budget, seed);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ordloc::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what()
              << " (best estimate " << e.best_estimate << ", error bound "
              << e.error_bound << ")\n";
    return 2;
  } catch (const ordloc::RootError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const ordloc::IngestError& e) {
    std::cerr << "ingest error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
