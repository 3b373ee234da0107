#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "ordloc/family.hpp"
#include "ordloc/loss.hpp"
#include "ordloc/numerics.hpp"

namespace ordloc {

enum class Provenance { closed_form, numeric };

struct CalibrationOptions {
  QuadSpec quad{};
  RootSpec root{};
  // When false every constant and curve is computed by the generic
  // quadrature+root route even if a closed form is registered; used by the
  // agreement tests.
  bool use_closed_forms = true;
};

// Conditional law of X_(2) - theta_(2) given the spacing U = u, when the gap
// between the location parameters is theta >= 0. Its unnormalized density is
//   z |-> f(z-u+theta) f(z) + f(z-u) f(z+theta),
// handled as two separately supported terms so quadrature never straddles a
// support jump.
class ConditionalPosterior {
 public:
  ConditionalPosterior(const LocationFamily& fam, double theta, double u,
                       const QuadSpec& quad = {});

  double theta() const { return theta_; }
  double u() const { return u_; }

  double unnormalized(double z) const;
  double normalizer() const { return normalizer_; }
  double density(double z) const { return unnormalized(z) / normalizer_; }

  // integral of h(z) times the unnormalized density
  double integrate_weighted(const std::function<double(double)>& h) const;
  // integral of the unnormalized density over (-inf, z]
  double cumulative(double z) const;
  double median(const RootSpec& root = {}) const;

 private:
  struct Term {
    double shift;  // term density is f(z - shift_lo part) ... evaluated below
    double lo, hi;
  };

  double term_value(int which, double z) const;
  double term_integral(int which, const std::function<double(double)>& h,
                       double up_to) const;

  LocationFamily fam_;
  double theta_, u_;
  double lo1_, hi1_, lo2_, hi2_;  // supports of the two product terms
  std::vector<double> splits1_, splits2_;
  double scale1_ = 0.0, scale2_ = 0.0;  // magnitude of each term at its hump
  QuadSpec quad_;
  double normalizer_ = 0.0;
};

// All the constants and shrink curves the estimators need for one
// (family, loss) pair:
//   c0        zero of  E[w'(X - c)]                     (component optimum)
//   b0        zero of  E[w'(X - b) F(X)] weighting      (max-law optimum at gap 0)
//   m0        median of f
//   c(0,u)    zero of the posterior-weighted w' at gap 0, spacing u
//   phi_bz(t) zero of  int w'(z-c) [F(z)-F(z-t)] f(z) dz in c
//   m(0,u)    median of the gap-0 conditional law
// For the absolute loss every w'-root is replaced by the matching half-mass
// (median) equation. Built-in family/loss pairs resolve to closed forms;
// everything always has a generic quadrature+root route.
class Calibration {
 public:
  Calibration(LocationFamily fam, LossSpec loss, CalibrationOptions opt = {});

  const LocationFamily& family() const { return fam_; }
  const LossSpec& loss() const { return loss_; }
  const CalibrationOptions& options() const { return opt_; }

  double c0() const { return c0_; }
  double b0() const { return b0_; }
  double m0() const { return m0_; }
  Provenance c0_provenance() const { return c0_prov_; }
  Provenance b0_provenance() const { return b0_prov_; }
  Provenance curve_provenance() const { return curve_prov_; }

  // u-indexed curves; memoized on the numeric route (u keyed to 12 digits)
  double c_zero_u(double u) const;
  double phi_bz(double t) const;
  double m_zero_u(double u) const;

  // gap-dependent quantities (always numeric)
  double c_theta_u(double theta, double u) const;
  double m_theta_u(double theta, double u) const;
  double b_theta(double theta) const;

  // generic routes, exposed so tests can compare them with the closed forms
  double c0_numeric() const;
  double b0_numeric() const;
  double c_zero_u_numeric(double u) const;
  double phi_bz_numeric(double t) const;
  double m_zero_u_numeric(double u) const;

 private:
  double memoized(int which, double x,
                  const std::function<double(double)>& compute) const;

  LocationFamily fam_;
  LossSpec loss_;
  CalibrationOptions opt_;

  double c0_ = 0.0, b0_ = 0.0, m0_ = 0.0;
  Provenance c0_prov_ = Provenance::numeric;
  Provenance b0_prov_ = Provenance::numeric;
  Provenance curve_prov_ = Provenance::numeric;

  std::function<double(double)> cf_c0u_;    // closed-form c(0,u), if any
  std::function<double(double)> cf_phibz_;  // closed-form phi_bz(t), if any
  std::function<double(double)> cf_m0u_;    // closed-form m(0,u), if any

  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<long long, double> memo_[3];
};

}  // namespace ordloc
