#include "ordloc/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ordloc {

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::natural: return "natural";
    case EstimatorKind::stein: return "stein";
    case EstimatorKind::b0: return "b0";
    case EstimatorKind::brewster_zidek: return "bz";
    case EstimatorKind::pitman_nearest: return "pn";
    case EstimatorKind::pitman_improved_m0: return "pn_m0";
    case EstimatorKind::pitman_improved_c0: return "pn_c0";
    case EstimatorKind::custom_phi: return "custom";
  }
  return "?";
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
  if (name == "natural") return EstimatorKind::natural;
  if (name == "stein") return EstimatorKind::stein;
  if (name == "b0") return EstimatorKind::b0;
  if (name == "bz" || name == "brewster_zidek") return EstimatorKind::brewster_zidek;
  if (name == "pn" || name == "pitman_nearest") return EstimatorKind::pitman_nearest;
  if (name == "pn_m0" || name == "pitman_improved_m0") return EstimatorKind::pitman_improved_m0;
  if (name == "pn_c0" || name == "pitman_improved_c0") return EstimatorKind::pitman_improved_c0;
  throw std::invalid_argument("unknown estimator: " + name);
}

namespace {
Estimate from_shrink(EstimatorKind kind, const ObservationPair& obs,
                     double shrink) {
  return Estimate{kind, obs.x_max() - shrink, shrink};
}

// Tied observations give u = 0, where the curve evaluations are instead taken
// just inside the boundary; all the shrink curves extend continuously there.
double clamped_u(double u) { return u > 1e-9 ? u : 1e-9; }
}  // namespace

Estimate natural(const ObservationPair& obs, const Calibration& cal) {
  return from_shrink(EstimatorKind::natural, obs, cal.c0());
}

Estimate stein(const ObservationPair& obs, const Calibration& cal) {
  const double shrink = std::min(cal.c0(), cal.c_zero_u(clamped_u(obs.u())));
  return from_shrink(EstimatorKind::stein, obs, shrink);
}

Estimate b0_estimator(const ObservationPair& obs, const Calibration& cal) {
  return from_shrink(EstimatorKind::b0, obs, cal.b0());
}

Estimate brewster_zidek(const ObservationPair& obs, const Calibration& cal) {
  return from_shrink(EstimatorKind::brewster_zidek, obs,
                     cal.phi_bz(clamped_u(obs.u())));
}

Estimate pitman_nearest(const ObservationPair& obs, const Calibration& cal) {
  return from_shrink(EstimatorKind::pitman_nearest, obs, cal.m0());
}

Estimate pitman_improved(const ObservationPair& obs, const Calibration& cal,
                         PitmanAnchor anchor) {
  const double anchor_value = anchor == PitmanAnchor::m0 ? cal.m0() : cal.c0();
  const double shrink = std::min(anchor_value, cal.m_zero_u(clamped_u(obs.u())));
  return from_shrink(anchor == PitmanAnchor::m0
                         ? EstimatorKind::pitman_improved_m0
                         : EstimatorKind::pitman_improved_c0,
                     obs, shrink);
}

Estimate custom_equivariant(const ObservationPair& obs,
                            const std::function<double(double)>& phi) {
  return from_shrink(EstimatorKind::custom_phi, obs, phi(obs.u()));
}

Estimate evaluate(EstimatorKind kind, const ObservationPair& obs,
                  const Calibration& cal) {
  switch (kind) {
    case EstimatorKind::natural: return natural(obs, cal);
    case EstimatorKind::stein: return stein(obs, cal);
    case EstimatorKind::b0: return b0_estimator(obs, cal);
    case EstimatorKind::brewster_zidek: return brewster_zidek(obs, cal);
    case EstimatorKind::pitman_nearest: return pitman_nearest(obs, cal);
    case EstimatorKind::pitman_improved_m0:
      return pitman_improved(obs, cal, PitmanAnchor::m0);
    case EstimatorKind::pitman_improved_c0:
      return pitman_improved(obs, cal, PitmanAnchor::c0);
    case EstimatorKind::custom_phi:
      throw std::invalid_argument("custom_phi needs custom_equivariant");
  }
  throw std::invalid_argument("bad estimator kind");
}

std::function<double(double)> shrink_function(EstimatorKind kind,
                                              const Calibration& cal) {
  switch (kind) {
    case EstimatorKind::natural:
      return [c = cal.c0()](double) { return c; };
    case EstimatorKind::stein:
      return [&cal, c = cal.c0()](double u) {
        return std::min(c, cal.c_zero_u(clamped_u(u)));
      };
    case EstimatorKind::b0:
      return [b = cal.b0()](double) { return b; };
    case EstimatorKind::brewster_zidek:
      return [&cal](double u) { return cal.phi_bz(clamped_u(u)); };
    case EstimatorKind::pitman_nearest:
      return [m = cal.m0()](double) { return m; };
    case EstimatorKind::pitman_improved_m0:
      return [&cal, m = cal.m0()](double u) {
        return std::min(m, cal.m_zero_u(clamped_u(u)));
      };
    case EstimatorKind::pitman_improved_c0:
      return [&cal, c = cal.c0()](double u) {
        return std::min(c, cal.m_zero_u(clamped_u(u)));
      };
    case EstimatorKind::custom_phi:
      throw std::invalid_argument("custom_phi has no bound shrink function");
  }
  throw std::invalid_argument("bad estimator kind");
}

IerdReport ierd_check(const std::function<double(double)>& phi,
                      const Calibration& cal,
                      const std::vector<double>& t_grid) {
  if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()) ||
      t_grid.front() <= 0.0) {
    throw std::invalid_argument("ierd_check needs a sorted positive t grid");
  }
  const LocationFamily& fam = cal.family();
  const LossSpec& loss = cal.loss();
  const QuadSpec& quad = cal.options().quad;

  IerdReport rep;
  rep.b0 = cal.b0();
  rep.t_max = 50.0 * fam.scale_hint();
  rep.phi_at_t_max = phi(rep.t_max);
  rep.limit_matches_b0 = std::fabs(rep.phi_at_t_max - rep.b0) <= 1e-3;

  rep.monotone = true;
  rep.t_grid = t_grid;
  for (double t : t_grid) rep.phi_values.push_back(phi(t));
  for (std::size_t i = 0; i + 1 < rep.phi_values.size(); ++i) {
    if (rep.phi_values[i + 1] < rep.phi_values[i] - 1e-12) rep.monotone = false;
  }

  // Condition (iii): the loss-derivative integral against the spacing-band
  // weight [F(z)-F(z-t)] f(z) must not be positive. For the absolute loss
  // w' is the sign function, which the same integral handles directly.
  rep.condition3 = true;
  rep.worst_condition3 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double c = rep.phi_values[i];
    QuadSpec q = quad;
    for (double p : {1e-9, 0.5, 1.0 - 1e-9}) q.split_points.push_back(fam.quantile(p));
    if (std::isfinite(fam.support_lo)) q.split_points.push_back(fam.support_lo + t);
    q.split_points.push_back(c);  // w' may jump there (absolute loss)
    const double k1 = integrate(
        [&](double z) {
          const double g = (fam.cdf(z) - fam.cdf(z - t)) * fam.pdf(z);
          if (!(g > 0.0)) return 0.0;
          const double v = loss.w_prime(z - c) * g;
          return std::isfinite(v) ? v : 0.0;
        },
        fam.support_lo, fam.support_hi, q);
    rep.condition3_values.push_back(k1);
    rep.worst_condition3 = std::max(rep.worst_condition3, k1);
    if (k1 > 1e-8) rep.condition3 = false;
  }
  return rep;
}

}  // namespace ordloc
