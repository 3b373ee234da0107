#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ordloc/numerics.hpp"
#include "ordloc/rng.hpp"

namespace ordloc {

// A location-0 "standard" density f with its cdf, quantile and support.
// The location shift is always applied externally (x = theta + draw); the
// family itself never stores a location.
struct LocationFamily {
  std::string name;
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;  // (0,1) -> support
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  std::map<std::string, double> params;

  // Inverse-cdf draw; consumes exactly one uniform, which keeps paired
  // (common-random-number) sampling trivial.
  double sample(CounterRng& rng) const { return quantile(rng.uniform()); }

  // Characteristic scale used to seed brackets and pick probe ranges.
  double scale_hint() const;
};

LocationFamily normal_family(double sigma);
LocationFamily exponential_family(double sigma);

// Wraps caller-supplied pieces. Missing cdf is built by quadrature of the
// pdf, missing quantile by bracketed root-finding on the cdf, both to 1e-10.
LocationFamily custom_family(std::string name,
                              std::function<double(double)> pdf,
                              std::function<double(double)> cdf,
                              std::function<double(double)> quantile,
                              double support_lo, double support_hi);

// Verifies the product inequality
//   f(x1-e1) f(x2-e2) >= f(x1-e2) f(x2-e1) - 1e-12
// for all grid pairs x1 < x2, e1 < e2 (the likelihood-ratio ordering the
// dominance results assume).
bool mlr_check(const LocationFamily& fam, const std::vector<double>& x_grid,
               const std::vector<double>& eta_grid);

// The observed pair with its order statistics and spacing.
struct ObservationPair {
  double x1 = 0.0;
  double x2 = 0.0;

  double x_min() const { return x1 < x2 ? x1 : x2; }
  double x_max() const { return x1 < x2 ? x2 : x1; }
  double u() const { return x_max() - x_min(); }
};

// Standard normal helpers shared across the library.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_quantile(double p);

// P(X <= h, Y <= k) for standard bivariate normal with correlation rho.
double binormal_cdf(double h, double k, double rho);

}  // namespace ordloc
