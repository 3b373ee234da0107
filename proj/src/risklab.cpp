#include "ordloc/risklab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ordloc/rng.hpp"

namespace ordloc {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

struct Welford {
  long long n = 0;
  double mean = 0.0, m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double se() const { return n > 0 ? std::sqrt(variance() / double(n)) : 0.0; }
};

void validate(const SweepConfig& cfg) {
  if (cfg.theta_grid.empty()) {
    throw std::invalid_argument("sweep needs a nonempty theta grid");
  }
  for (double t : cfg.theta_grid) {
    if (t < 0.0) throw std::invalid_argument("theta grid must be nonnegative");
  }
  if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
}

}  // namespace

int RiskCurve::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < estimator_names.size(); ++i) {
    if (estimator_names[i] == name) return int(i);
  }
  return -1;
}

std::string RiskCurve::to_csv() const {
  std::ostringstream out;
  out << "theta,estimator,risk,se,reps,seed\n";
  for (std::size_t e = 0; e < estimator_names.size(); ++e) {
    for (std::size_t t = 0; t < theta.size(); ++t) {
      out << format_double(theta[t]) << ',' << estimator_names[e] << ','
          << format_double(risk[e][t]) << ',' << format_double(se[e][t]) << ','
          << reps << ',' << seed << '\n';
    }
  }
  return out.str();
}

std::string GPNCurve::to_csv() const {
  std::ostringstream out;
  out << "theta,gpn,tie_fraction,se,reps,seed\n";
  for (std::size_t t = 0; t < theta.size(); ++t) {
    out << format_double(theta[t]) << ',' << format_double(gpn[t]) << ','
        << format_double(tie_fraction[t]) << ',' << format_double(se[t]) << ','
        << reps << ',' << seed << '\n';
  }
  return out.str();
}

RiskCurve risk_sweep_custom(const SweepConfig& cfg,
                            const std::vector<NamedEvaluator>& evaluators) {
  validate(cfg);
  if (evaluators.empty()) {
    throw std::invalid_argument("sweep needs at least one estimator");
  }
  const std::size_t ne = evaluators.size();
  const std::size_t nt = cfg.theta_grid.size();

  RiskCurve curve;
  curve.theta = cfg.theta_grid;
  for (const auto& ev : evaluators) curve.estimator_names.push_back(ev.name);
  curve.reps = cfg.reps;
  curve.seed = cfg.seed;
  curve.risk.assign(ne, std::vector<double>(nt, 0.0));
  curve.se.assign(ne, std::vector<double>(nt, 0.0));
  curve.diff_mean.assign(ne, std::vector<std::vector<double>>(
                                 ne, std::vector<double>(nt, 0.0)));
  curve.diff_se.assign(ne, std::vector<std::vector<double>>(
                               ne, std::vector<double>(nt, 0.0)));

  // One grid point, evaluated serially in replication order. Draw r of grid
  // point ti always reads stream positions 2r and 2r+1, so every estimator
  // sees identical observations (common random numbers) and reruns are
  // reproducible bit for bit regardless of how points are scheduled.
  auto run_point = [&](std::size_t ti) {
    const double theta = cfg.theta_grid[ti];
    const double theta2 = cfg.theta1 + theta;
    std::vector<Welford> acc(ne);
    std::vector<Welford> diff(ne * ne);
    std::vector<double> losses(ne);
    for (int r = 0; r < cfg.reps; ++r) {
      const double p1 = CounterRng::uniform_at(cfg.seed, ti, 2 * std::uint64_t(r));
      const double p2 =
          CounterRng::uniform_at(cfg.seed, ti, 2 * std::uint64_t(r) + 1);
      ObservationPair obs{cfg.theta1 + cfg.family.quantile(p1),
                          theta2 + cfg.family.quantile(p2)};
      for (std::size_t e = 0; e < ne; ++e) {
        losses[e] = cfg.loss.w(evaluators[e].value(obs, theta2) - theta2);
        acc[e].add(losses[e]);
      }
      for (std::size_t i = 0; i < ne; ++i) {
        for (std::size_t j = i + 1; j < ne; ++j) {
          diff[i * ne + j].add(losses[i] - losses[j]);
        }
      }
    }
    for (std::size_t e = 0; e < ne; ++e) {
      curve.risk[e][ti] = acc[e].mean;
      curve.se[e][ti] = acc[e].se();
    }
    for (std::size_t i = 0; i < ne; ++i) {
      for (std::size_t j = 0; j < ne; ++j) {
        if (i == j) continue;
        const Welford& w = diff[std::min(i, j) * ne + std::max(i, j)];
        const double sign = i < j ? 1.0 : -1.0;
        curve.diff_mean[i][j][ti] = sign * w.mean;
        curve.diff_se[i][j][ti] = w.se();
      }
    }
  };

  // Grid points are independent; results land in index-addressed slots, so
  // the merge is deterministic no matter the execution order.
  const unsigned hw = cfg.threads > 0
                          ? unsigned(cfg.threads)
                          : std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<std::size_t>(hw, nt);
  if (workers <= 1) {
    for (std::size_t ti = 0; ti < nt; ++ti) run_point(ti);
  } else {
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t ti = w; ti < nt; ti += workers) run_point(ti);
      }));
    }
    for (auto& f : futures) f.get();
  }
  return curve;
}

RiskCurve risk_sweep(const SweepConfig& cfg) {
  if (cfg.estimators.empty()) {
    throw std::invalid_argument("sweep needs at least one estimator");
  }
  Calibration cal(cfg.family, cfg.loss, cfg.cal_opts);
  std::vector<NamedEvaluator> evaluators;
  for (EstimatorKind kind : cfg.estimators) {
    auto shrink = shrink_function(kind, cal);
    evaluators.push_back(
        {estimator_name(kind), [shrink](const ObservationPair& obs, double) {
           return obs.x_max() - shrink(obs.u());
         }});
  }
  return risk_sweep_custom(cfg, evaluators);
}

GPNCurve gpn_sweep(const SweepConfig& cfg, EstimatorKind est1,
                   EstimatorKind est2) {
  validate(cfg);
  Calibration cal(cfg.family, cfg.loss, cfg.cal_opts);
  auto shrink1 = shrink_function(est1, cal);
  auto shrink2 = shrink_function(est2, cal);

  GPNCurve curve;
  curve.theta = cfg.theta_grid;
  curve.reps = cfg.reps;
  curve.seed = cfg.seed;

  for (std::size_t ti = 0; ti < cfg.theta_grid.size(); ++ti) {
    const double theta = cfg.theta_grid[ti];
    const double theta2 = cfg.theta1 + theta;
    Welford score;
    long long ties = 0;
    for (int r = 0; r < cfg.reps; ++r) {
      const double p1 = CounterRng::uniform_at(cfg.seed, ti, 2 * std::uint64_t(r));
      const double p2 =
          CounterRng::uniform_at(cfg.seed, ti, 2 * std::uint64_t(r) + 1);
      ObservationPair obs{cfg.theta1 + cfg.family.quantile(p1),
                          theta2 + cfg.family.quantile(p2)};
      const double l1 = cfg.loss.w(obs.x_max() - shrink1(obs.u()) - theta2);
      const double l2 = cfg.loss.w(obs.x_max() - shrink2(obs.u()) - theta2);
      if (std::fabs(l1 - l2) <= 1e-12) {
        ++ties;
        score.add(0.5);
      } else {
        score.add(l1 < l2 ? 1.0 : 0.0);
      }
    }
    curve.gpn.push_back(score.mean);
    curve.tie_fraction.push_back(double(ties) / double(cfg.reps));
    curve.se.push_back(score.se());
  }
  return curve;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::dominates: return "dominates";
    case Verdict::within_noise: return "within-noise";
    case Verdict::violated: return "violated";
  }
  return "?";
}

DominanceReport dominance_report(const RiskCurve& curve,
                                 const std::string& baseline,
                                 const std::string& challenger) {
  const int ib = curve.index_of(baseline);
  const int ic = curve.index_of(challenger);
  if (ib < 0 || ic < 0) {
    throw std::invalid_argument("dominance_report: estimator not in curve");
  }
  DominanceReport rep;
  rep.baseline = baseline;
  rep.challenger = challenger;
  rep.theta = curve.theta;
  bool any_violated = false;
  for (std::size_t t = 0; t < curve.theta.size(); ++t) {
    const double d = curve.diff_mean[ic][ib][t];
    const double s = curve.diff_se[ic][ib][t];
    rep.diff.push_back(d);
    rep.se_pair.push_back(s);
    Verdict v;
    if (d <= -2.0 * s && s > 0.0) {
      v = Verdict::dominates;
      ++rep.strict_points;
    } else if (d <= 2.0 * s) {
      v = Verdict::within_noise;
    } else {
      v = Verdict::violated;
      any_violated = true;
    }
    rep.verdict.push_back(v);
  }
  rep.overall = any_violated
                    ? Verdict::violated
                    : (rep.strict_points > 0 ? Verdict::dominates
                                             : Verdict::within_noise);
  return rep;
}

DominanceReport dominance_report(const RiskCurve& curve, EstimatorKind baseline,
                                 EstimatorKind challenger) {
  return dominance_report(curve, estimator_name(baseline),
                          estimator_name(challenger));
}

std::string DominanceReport::to_text() const {
  std::ostringstream out;
  out << challenger << " vs " << baseline << ": " << verdict_name(overall)
      << " (" << strict_points << " strict points)\n";
  for (std::size_t t = 0; t < theta.size(); ++t) {
    out << "  theta=" << theta[t] << " diff=" << diff[t]
        << " se_pair=" << se_pair[t] << " " << verdict_name(verdict[t]) << "\n";
  }
  return out.str();
}

}  // namespace ordloc
