#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ordloc/calibrate.hpp"
#include "ordloc/estimate.hpp"
#include "ordloc/family.hpp"
#include "ordloc/loss.hpp"

namespace ordloc {

struct SweepConfig {
  std::vector<double> theta_grid;  // gap theta_(2) - theta_(1), >= 0
  int reps = 50000;
  std::uint64_t seed = 42;
  std::vector<EstimatorKind> estimators;
  LossSpec loss;
  LocationFamily family;
  double theta1 = 0.0;  // base location; risks must not depend on it
  CalibrationOptions cal_opts{};
  int threads = 0;  // worker threads over grid points; 0 picks the hardware count
};

// Named per-draw evaluator: gets the observed pair and the true theta_(2)
// (only diagnostic evaluators may look at the latter).
struct NamedEvaluator {
  std::string name;
  std::function<double(const ObservationPair&, double theta2)> value;
};

struct RiskCurve {
  std::vector<double> theta;
  std::vector<std::string> estimator_names;
  // indexed [estimator][theta point]
  std::vector<std::vector<double>> risk;
  std::vector<std::vector<double>> se;
  // paired loss differences L_i - L_j, indexed [i][j][theta point]
  std::vector<std::vector<std::vector<double>>> diff_mean;
  std::vector<std::vector<std::vector<double>>> diff_se;
  int reps = 0;
  std::uint64_t seed = 0;

  int index_of(const std::string& name) const;
  std::string to_csv() const;  // theta,estimator,risk,se,reps,seed
};

RiskCurve risk_sweep(const SweepConfig& cfg);
// Same engine with arbitrary evaluators (used by tests and the GPN sweep).
RiskCurve risk_sweep_custom(const SweepConfig& cfg,
                            const std::vector<NamedEvaluator>& evaluators);

struct GPNCurve {
  std::vector<double> theta;
  std::vector<double> gpn;           // P[L1 < L2] + P[L1 = L2]/2
  std::vector<double> tie_fraction;
  std::vector<double> se;
  int reps = 0;
  std::uint64_t seed = 0;

  std::string to_csv() const;  // theta,gpn,tie_fraction,se,reps,seed
};

GPNCurve gpn_sweep(const SweepConfig& cfg, EstimatorKind est1,
                   EstimatorKind est2);

enum class Verdict { dominates, within_noise, violated };
const char* verdict_name(Verdict v);

// Paired two-standard-error comparison of challenger against baseline at
// every grid point, from losses evaluated on common draws.
struct DominanceReport {
  std::string baseline, challenger;
  std::vector<double> theta;
  std::vector<double> diff;     // risk(challenger) - risk(baseline)
  std::vector<double> se_pair;  // se of the per-draw loss difference
  std::vector<Verdict> verdict;
  Verdict overall = Verdict::within_noise;
  int strict_points = 0;  // points with diff <= -2 se_pair

  std::string to_text() const;
};

DominanceReport dominance_report(const RiskCurve& curve,
                                 const std::string& baseline,
                                 const std::string& challenger);
DominanceReport dominance_report(const RiskCurve& curve, EstimatorKind baseline,
                                 EstimatorKind challenger);

}  // namespace ordloc
