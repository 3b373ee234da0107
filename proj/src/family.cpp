#include "ordloc/family.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ordloc {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;

// Peter Acklam's rational approximation for the normal quantile, refined by
// one Newton step against the erfc-based cdf; good to ~1e-15 over (0,1).
double acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre polynomial.
template <int N>
const std::array<std::pair<double, double>, N>& gauss_legendre() {
  static const std::array<std::pair<double, double>, N> table = [] {
    std::array<std::pair<double, double>, N> t{};
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = N * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      t[i] = {-x, w};
      t[N - 1 - i] = {x, w};
    }
    return t;
  }();
  return table;
}

}  // namespace

double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("normal quantile needs p in (0,1)");
  }
  double x = acklam(p);
  const double density = std_normal_pdf(x);
  if (density > 0.0) x -= (std_normal_cdf(x) - p) / density;
  return x;
}

double binormal_cdf(double h, double k, double rho) {
  if (rho > 0.9999999) return std_normal_cdf(std::min(h, k));
  if (rho < -0.9999999) {
    const double v = std_normal_cdf(h) + std_normal_cdf(k) - 1.0;
    return v > 0.0 ? v : 0.0;
  }
  // Drezner-Wesolowsky: integrate the correlation derivative from 0 to rho.
  double sum = 0.0;
  for (const auto& [node, weight] : gauss_legendre<32>()) {
    const double r = 0.5 * rho * (node + 1.0);
    const double omr2 = 1.0 - r * r;
    sum += weight * std::exp(-0.5 * (h * h - 2.0 * r * h * k + k * k) / omr2) /
           std::sqrt(omr2);
  }
  sum *= 0.5 * rho / (2.0 * M_PI);
  return std_normal_cdf(h) * std_normal_cdf(k) + sum;
}

double LocationFamily::scale_hint() const {
  auto it = params.find("sigma");
  if (it != params.end() && it->second > 0.0) return it->second;
  return 0.5 * (quantile(0.75) - quantile(0.25)) / 0.6744897501960817;
}

LocationFamily normal_family(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_family: sigma must be > 0");
  LocationFamily fam;
  fam.name = "normal";
  fam.params["sigma"] = sigma;
  fam.pdf = [sigma](double x) { return std_normal_pdf(x / sigma) / sigma; };
  fam.cdf = [sigma](double x) { return std_normal_cdf(x / sigma); };
  fam.quantile = [sigma](double p) { return sigma * std_normal_quantile(p); };
  return fam;
}

LocationFamily exponential_family(double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("exponential_family: sigma must be > 0");
  }
  LocationFamily fam;
  fam.name = "exponential";
  fam.params["sigma"] = sigma;
  fam.support_lo = 0.0;
  fam.pdf = [sigma](double x) {
    return x >= 0.0 ? std::exp(-x / sigma) / sigma : 0.0;
  };
  fam.cdf = [sigma](double x) {
    return x >= 0.0 ? -std::expm1(-x / sigma) : 0.0;
  };
  fam.quantile = [sigma](double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::invalid_argument("exponential quantile needs p in (0,1)");
    }
    return -sigma * std::log1p(-p);
  };
  return fam;
}

LocationFamily custom_family(std::string name,
                              std::function<double(double)> pdf,
                              std::function<double(double)> cdf,
                              std::function<double(double)> quantile,
                              double support_lo, double support_hi) {
  if (!pdf) throw std::invalid_argument("custom_family: pdf is required");
  LocationFamily fam;
  fam.name = std::move(name);
  fam.pdf = std::move(pdf);
  fam.support_lo = support_lo;
  fam.support_hi = support_hi;

  if (cdf) {
    fam.cdf = std::move(cdf);
  } else {
    auto p = fam.pdf;
    const double lo = support_lo, hi = support_hi;
    fam.cdf = [p, lo, hi](double x) {
      if (x <= lo) return 0.0;
      QuadSpec spec;
      spec.abs_tol = spec.rel_tol = 1e-10;
      const double v = integrate(p, lo, x >= hi ? hi : x, spec);
      return std::min(1.0, std::max(0.0, v));
    };
  }

  if (quantile) {
    fam.quantile = std::move(quantile);
  } else {
    auto F = fam.cdf;
    const double lo = support_lo, hi = support_hi;
    fam.quantile = [F, lo, hi](double p) {
      if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("quantile needs p in (0,1)");
      }
      RootSpec spec;
      spec.tol = 1e-10;
      const double a = std::isinf(lo) ? -1.0 : lo;
      const double b = std::isinf(hi) ? 1.0 : hi;
      return solve_root([&F, p](double x) { return F(x) - p; }, a, b, spec);
    };
  }
  return fam;
}

bool mlr_check(const LocationFamily& fam, const std::vector<double>& x_grid,
               const std::vector<double>& eta_grid) {
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    for (std::size_t j = i + 1; j < x_grid.size(); ++j) {
      const double x1 = x_grid[i], x2 = x_grid[j];
      for (std::size_t k = 0; k < eta_grid.size(); ++k) {
        for (std::size_t l = k + 1; l < eta_grid.size(); ++l) {
          const double e1 = eta_grid[k], e2 = eta_grid[l];
          const double lhs = fam.pdf(x1 - e1) * fam.pdf(x2 - e2);
          const double rhs = fam.pdf(x1 - e2) * fam.pdf(x2 - e1);
          if (lhs < rhs - 1e-12) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace ordloc
