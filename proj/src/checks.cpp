#include "ordloc/checks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ordloc/calibrate.hpp"
#include "ordloc/estimate.hpp"
#include "ordloc/risklab.hpp"

namespace ordloc::checks {

namespace {

struct Combo {
  const char* tag;
  LocationFamily family;
  LossSpec loss;
};

// The exponential/linex pairing keeps a * sigma < 1, which that calibration
// requires.
std::vector<Combo> standard_combos() {
  std::vector<Combo> combos;
  combos.push_back({"normal(1)/squared", normal_family(1.0),
                    make_loss(LossSpec::Kind::squared)});
  combos.push_back({"normal(1)/linex(1)", normal_family(1.0),
                    make_loss(LossSpec::Kind::linex, 1.0)});
  combos.push_back({"normal(1)/absolute", normal_family(1.0),
                    make_loss(LossSpec::Kind::absolute)});
  combos.push_back({"exponential(1)/squared", exponential_family(1.0),
                    make_loss(LossSpec::Kind::squared)});
  combos.push_back({"exponential(0.5)/linex(1)", exponential_family(0.5),
                    make_loss(LossSpec::Kind::linex, 1.0)});
  combos.push_back({"exponential(1)/absolute", exponential_family(1.0),
                    make_loss(LossSpec::Kind::absolute)});
  return combos;
}

std::string describe(double got, double want, double tol) {
  std::ostringstream out;
  out << "got " << got << ", want " << want << " within " << tol;
  return out.str();
}

CheckResult check_close(const std::string& name, double got, double want,
                        double tol) {
  CheckResult r{name, std::fabs(got - want) <= tol, ""};
  if (!r.pass) r.detail = describe(got, want, tol);
  return r;
}

std::vector<double> theta_grid(Budget budget) {
  std::vector<double> grid;
  const double step = budget == Budget::full ? 0.25 : 1.0;
  for (double t = 0.0; t <= 5.0 + 1e-9; t += step) grid.push_back(t);
  return grid;
}

int sweep_reps(Budget budget) { return budget == Budget::full ? 50000 : 5000; }

}  // namespace

Suite suite_from_name(const std::string& name) {
  if (name == "calibration") return Suite::calibration;
  if (name == "dominance") return Suite::dominance;
  if (name == "gpn") return Suite::gpn;
  if (name == "all") return Suite::all;
  throw std::invalid_argument("unknown check suite: " + name);
}

Budget budget_from_name(const std::string& name) {
  if (name == "quick") return Budget::quick;
  if (name == "full") return Budget::full;
  throw std::invalid_argument("unknown budget: " + name);
}

bool CheckReport::all_pass() const {
  for (const CheckResult& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  for (const CheckResult& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass && !r.detail.empty()) out << ": " << r.detail;
    out << '\n';
  }
  return out.str();
}

void CheckReport::append(CheckReport other) {
  for (auto& r : other.results) results.push_back(std::move(r));
}

CheckReport calibration_suite(Budget budget) {
  CheckReport report;
  const std::vector<double> thetas = {0.0, 0.5, 1.0, 2.0, 5.0};
  const std::vector<double> us_full = {0.1, 0.5, 1.0, 2.0, 5.0};
  const std::vector<double> us =
      budget == Budget::full ? us_full : std::vector<double>{0.5, 2.0};

  for (Combo& combo : standard_combos()) {
    const std::string tag = combo.tag;
    Calibration cal(combo.family, combo.loss);
    const double sigma = combo.family.scale_hint();

    // closed forms against the generic quadrature+root route
    report.results.push_back(check_close(tag + " c0 closed-vs-numeric",
                                         cal.c0_numeric(), cal.c0(), 1e-6));
    report.results.push_back(check_close(tag + " b0 closed-vs-numeric",
                                         cal.b0_numeric(), cal.b0(), 1e-6));
    for (double u : us) {
      report.results.push_back(check_close(
          tag + " c(0,u) closed-vs-numeric u=" + std::to_string(u),
          cal.c_zero_u_numeric(u), cal.c_zero_u(u), 1e-6));
      report.results.push_back(
          check_close(tag + " phi_bz closed-vs-numeric t=" + std::to_string(u),
                      cal.phi_bz_numeric(u), cal.phi_bz(u), 1e-6));
      report.results.push_back(check_close(
          tag + " m(0,u) closed-vs-numeric u=" + std::to_string(u),
          cal.m_zero_u_numeric(u), cal.m_zero_u(u), 1e-6));
    }

    // conditional-optimum shrinkage never exceeds its gap-0 value
    {
      bool ok = true;
      std::ostringstream detail;
      for (double th : thetas) {
        for (double u : us) {
          const double at_theta = cal.c_theta_u(th, u);
          const double at_zero = cal.c_zero_u(u);
          if (at_theta > at_zero + 1e-8) {
            ok = false;
            detail << " (theta=" << th << ",u=" << u << ": " << at_theta
                   << " > " << at_zero << ")";
          }
        }
      }
      report.results.push_back(
          {tag + " c(theta,u) <= c(0,u)", ok, detail.str()});
    }

    // admissible band and the two boundary identities
    {
      bool ok = true;
      std::ostringstream detail;
      for (double th : thetas) {
        const double b = cal.b_theta(th);
        if (b < cal.c0() - 1e-8 || b > cal.b0() + 1e-8) {
          ok = false;
          detail << " (theta=" << th << ": b=" << b << " outside ["
                 << cal.c0() << "," << cal.b0() << "])";
        }
      }
      report.results.push_back({tag + " c0 <= b_theta <= b0", ok, detail.str()});
      report.results.push_back(check_close(tag + " b_theta(0) = b0",
                                           cal.b_theta(0.0), cal.b0(), 1e-8));
      report.results.push_back(check_close(tag + " b_theta(50 sigma) = c0",
                                           cal.b_theta(50.0 * sigma), cal.c0(),
                                           1e-4));
    }

    // boundary-curve limit and monotonicity
    report.results.push_back(check_close(tag + " phi_bz(50 sigma) = b0",
                                         cal.phi_bz(50.0 * sigma), cal.b0(),
                                         1e-4));
    {
      bool ok = true;
      std::ostringstream detail;
      double prev = -std::numeric_limits<double>::infinity();
      std::vector<double> ts;
      for (int i = 1; i <= 50; ++i) ts.push_back(0.2 * sigma * double(i));
      for (double t : ts) {
        const double v = cal.phi_bz(t);
        if (v < prev - 1e-10) {
          ok = false;
          detail << " (decrease at t=" << t << ")";
        }
        prev = v;
      }
      report.results.push_back({tag + " phi_bz nondecreasing", ok, detail.str()});

      IerdReport ierd = ierd_check([&cal](double t) { return cal.phi_bz(t); },
                                   cal, ts);
      std::ostringstream ierd_detail;
      ierd_detail << "monotone=" << ierd.monotone
                  << " limit=" << ierd.limit_matches_b0
                  << " cond3=" << ierd.condition3
                  << " worst=" << ierd.worst_condition3;
      report.results.push_back(
          {tag + " ierd_check(phi_bz) passes", ierd.pass(), ierd_detail.str()});
    }
  }

  // median shrinkage ordering is loss-free, once per family
  for (const auto* fam_name : {"normal", "exponential"}) {
    LocationFamily fam = std::string(fam_name) == "normal"
                             ? normal_family(1.0)
                             : exponential_family(1.0);
    Calibration cal(fam, make_loss(LossSpec::Kind::squared));
    bool ok = true;
    std::ostringstream detail;
    for (double th : thetas) {
      for (double u : us) {
        const double at_theta = cal.m_theta_u(th, u);
        const double at_zero = cal.m_zero_u(u);
        if (at_theta > at_zero + 1e-8) {
          ok = false;
          detail << " (theta=" << th << ",u=" << u << ": " << at_theta << " > "
                 << at_zero << ")";
        }
      }
    }
    report.results.push_back(
        {std::string(fam_name) + " m(theta,u) <= m(0,u)", ok, detail.str()});
  }
  return report;
}

CheckReport dominance_suite(Budget budget, std::uint64_t seed) {
  CheckReport report;
  for (Combo& combo : standard_combos()) {
    SweepConfig cfg;
    cfg.family = combo.family;
    cfg.loss = combo.loss;
    cfg.theta_grid = theta_grid(budget);
    cfg.reps = sweep_reps(budget);
    cfg.seed = seed;
    cfg.estimators = {EstimatorKind::natural, EstimatorKind::stein,
                      EstimatorKind::b0, EstimatorKind::brewster_zidek};
    RiskCurve curve = risk_sweep(cfg);

    const std::string tag = combo.tag;
    const bool stein_strict = combo.family.name == "exponential" ||
                              combo.loss.kind == LossSpec::Kind::linex;
    {
      DominanceReport d =
          dominance_report(curve, EstimatorKind::natural, EstimatorKind::stein);
      const bool ok = d.overall != Verdict::violated &&
                      (!stein_strict || d.strict_points > 0);
      std::ostringstream detail;
      detail << verdict_name(d.overall) << ", " << d.strict_points
             << " strict points";
      report.results.push_back({tag + " stein dominates natural", ok,
                                detail.str()});
    }
    {
      DominanceReport d = dominance_report(curve, EstimatorKind::b0,
                                           EstimatorKind::brewster_zidek);
      std::ostringstream detail;
      detail << verdict_name(d.overall) << ", " << d.strict_points
             << " strict points";
      report.results.push_back({tag + " bz never worse than b0",
                                d.overall != Verdict::violated, detail.str()});
    }
  }
  return report;
}

CheckReport gpn_suite(Budget budget, std::uint64_t seed) {
  CheckReport report;
  std::vector<Combo> combos;
  combos.push_back({"exponential(1)/squared", exponential_family(1.0),
                    make_loss(LossSpec::Kind::squared)});
  combos.push_back({"exponential(0.5)/linex(1)", exponential_family(0.5),
                    make_loss(LossSpec::Kind::linex, 1.0)});
  combos.push_back({"exponential(1)/absolute", exponential_family(1.0),
                    make_loss(LossSpec::Kind::absolute)});

  for (Combo& combo : combos) {
    SweepConfig cfg;
    cfg.family = combo.family;
    cfg.loss = combo.loss;
    cfg.theta_grid = theta_grid(budget);
    cfg.reps = sweep_reps(budget);
    cfg.seed = seed;
    GPNCurve curve = gpn_sweep(cfg, EstimatorKind::pitman_improved_m0,
                               EstimatorKind::pitman_nearest);
    bool never_worse = true;
    bool strictly_better = false;
    std::ostringstream detail;
    for (std::size_t t = 0; t < curve.theta.size(); ++t) {
      if (curve.gpn[t] < 0.5 - 2.0 * curve.se[t]) {
        never_worse = false;
        detail << " (gpn=" << curve.gpn[t] << " at theta=" << curve.theta[t]
               << ")";
      }
      if (curve.gpn[t] > 0.5 + 2.0 * curve.se[t]) strictly_better = true;
    }
    report.results.push_back(
        {std::string(combo.tag) + " improved pitman estimator is nearer",
         never_worse && strictly_better, detail.str()});
  }

  // an estimator against itself ties on every draw
  {
    SweepConfig cfg;
    cfg.family = exponential_family(1.0);
    cfg.loss = make_loss(LossSpec::Kind::squared);
    cfg.theta_grid = {0.0, 1.0};
    cfg.reps = budget == Budget::full ? 20000 : 2000;
    cfg.seed = seed;
    GPNCurve curve = gpn_sweep(cfg, EstimatorKind::pitman_nearest,
                               EstimatorKind::pitman_nearest);
    bool ok = true;
    for (std::size_t t = 0; t < curve.theta.size(); ++t) {
      if (curve.gpn[t] != 0.5 || curve.tie_fraction[t] != 1.0) ok = false;
    }
    report.results.push_back({"gpn(delta, delta) = 1/2 exactly", ok, ""});
  }
  return report;
}

CheckReport run_check(Suite suite, Budget budget, std::uint64_t seed) {
  CheckReport report;
  if (suite == Suite::calibration || suite == Suite::all) {
    report.append(calibration_suite(budget));
  }
  if (suite == Suite::dominance || suite == Suite::all) {
    report.append(dominance_suite(budget, seed));
  }
  if (suite == Suite::gpn || suite == Suite::all) {
    report.append(gpn_suite(budget, seed));
  }
  return report;
}

}  // namespace ordloc::checks
