#include "ordloc/calibrate.hpp"

#include <cmath>
#include <stdexcept>

namespace ordloc {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// A nonnegative weight with known support; every calibration equation is an
// integral against one or two of these.
struct WeightTerm {
  std::function<double(double)> g;
  double lo, hi;
  std::vector<double> splits;
};

// Quantile landmarks of every f factor (shifted by its argument offset).
// Without them an integration panel over a long or infinite range can sample
// only the underflowed tails of a localized density, see zero everywhere and
// converge to zero; splitting at the landmarks puts nodes on the hump.
std::vector<double> landmark_splits(const LocationFamily& fam,
                                    std::initializer_list<double> shifts) {
  std::vector<double> pts;
  const double q_lo = fam.quantile(1e-9);
  const double q_mid = fam.quantile(0.5);
  const double q_hi = fam.quantile(1.0 - 1e-9);
  for (double s : shifts) {
    pts.push_back(s + q_lo);
    pts.push_back(s + q_mid);
    pts.push_back(s + q_hi);
  }
  return pts;
}

double integrate_terms(const std::vector<WeightTerm>& terms,
                       const std::function<double(double)>& h,
                       const QuadSpec& quad) {
  double total = 0.0;
  for (const auto& t : terms) {
    if (!(t.lo < t.hi)) continue;
    QuadSpec q = quad;
    q.split_points = t.splits;
    total += integrate(
        [&](double z) {
          const double gv = t.g(z);
          if (!(gv > 0.0)) return 0.0;
          const double v = h(z) * gv;
          // A huge w' against an underflowing density is a vanishing tail.
          return std::isfinite(v) ? v : 0.0;
        },
        t.lo, t.hi, q);
  }
  return total;
}

double cumulative_terms(const std::vector<WeightTerm>& terms, double up_to,
                        const QuadSpec& quad) {
  double total = 0.0;
  for (const auto& t : terms) {
    const double hi = std::min(up_to, t.hi);
    if (!(t.lo < hi)) continue;
    QuadSpec q = quad;
    q.split_points = t.splits;
    total += integrate(
        [&](double z) {
          const double gv = t.g(z);
          return (gv > 0.0 && std::isfinite(gv)) ? gv : 0.0;
        },
        t.lo, hi, q);
  }
  return total;
}

// c with  int w'(z - c) dG(z) = 0; the integral is strictly decreasing in c
// for any bowl-shaped loss, so a bracketed root always exists and is unique.
double solve_wprime_zero(const LossSpec& loss,
                         const std::vector<WeightTerm>& terms, double center,
                         double scale, const QuadSpec& quad,
                         const RootSpec& root) {
  auto fn = [&](double c) {
    return integrate_terms(
        terms, [&](double z) { return loss.w_prime(z - c); }, quad);
  };
  return solve_root(fn, center - scale, center + scale, root);
}

// m with  G(m) = G(inf)/2  (the median of the weight, used wherever the
// absolute loss replaces a w'-root by a half-mass condition).
double solve_half_mass(const std::vector<WeightTerm>& terms, double center,
                       double scale, const QuadSpec& quad,
                       const RootSpec& root) {
  const double total = integrate_terms(
      terms, [](double) { return 1.0; }, quad);
  if (!(total > 0.0)) {
    throw QuadratureError("weight has no mass", total, 0.0);
  }
  auto fn = [&](double m) {
    return cumulative_terms(terms, m, quad) - 0.5 * total;
  };
  return solve_root(fn, center - scale, center + scale, root);
}

double loss_calibration_root(const LossSpec& loss,
                             const std::vector<WeightTerm>& terms,
                             double center, double scale, const QuadSpec& quad,
                             const RootSpec& root) {
  if (loss.uses_median_equations()) {
    return solve_half_mass(terms, center, scale, quad, root);
  }
  return solve_wprime_zero(loss, terms, center, scale, quad, root);
}

// ---- closed forms for the built-in families --------------------------------

// Shrink curve of the boundary improved estimator, exponential scale sigma,
// squared loss:  [3s - (2t+3s) e^{-t/s}] / [2 (1 - e^{-t/s})], written via
// expm1 so the t -> 0 limit (s/2) comes out clean.
double exp_sq_bz(double sigma, double t) {
  const double em = std::expm1(-t / sigma);  // e^{-t/s} - 1
  const double num = -3.0 * sigma * em - 2.0 * t * (em + 1.0);
  return num / (-2.0 * em);
}

// Exponential scale sigma, absolute loss: exact solution of the half-mass
// equation  K(C) = T(t)/2  with
//   K(C) = int_0^C [F(z) - F(z-t)] f(z) dz,  T(t) = (1 - e^{-t/s})/2.
// Below t = s ln 2 the median falls past the kink at z = t and picks up the
// second analytic branch.
double exp_abs_bz(double sigma, double t) {
  const double q = -std::expm1(-t / sigma);  // 1 - e^{-t/s}
  const double target = 0.25 * q;
  const double at_kink = 0.5 * q * q;  // K(t)
  if (at_kink >= target) {
    return -sigma * std::log1p(-std::sqrt(2.0 * target));
  }
  const double r =
      std::exp(-2.0 * t / sigma) - 2.0 * (target - at_kink) / std::expm1(t / sigma);
  return -0.5 * sigma * std::log(r);
}

double exp_linex_bz(double sigma, double a, double t) {
  const double base = kLn2 - std::log1p(-a * sigma) - std::log(2.0 - a * sigma);
  const double ratio = std::log(std::expm1(-t * (1.0 / sigma - a)) /
                                std::expm1(-t / sigma));
  return (base + ratio) / a;
}

double normal_sq_bz(double sigma, double t) {
  const double s = t / (kSqrt2 * sigma);
  if (s < 1e-8) return 0.25 * t;
  const double num = -std::expm1(-0.5 * s * s) * kInvSqrt2Pi;  // 1/sqrt(2pi) - pdf(s)
  const double den = std_normal_cdf(s) - 0.5;
  return (sigma / kSqrt2) * num / den;
}

double normal_linex_bz(double sigma, double a, double t) {
  if (t < 1e-8 * sigma) return 0.25 * a * sigma * sigma;
  const double num = std_normal_cdf(a * sigma / kSqrt2) -
                     std_normal_cdf((a * sigma * sigma - t) / (kSqrt2 * sigma));
  const double den = std_normal_cdf(t / (kSqrt2 * sigma)) - 0.5;
  return (0.5 * a * a * sigma * sigma + std::log(num) - std::log(den)) / a;
}

// Normal, absolute loss: the half-mass equation reduces to one root of
//   Phi(C/s)^2 / 2 - Phi2(C/s, -t/(sqrt2 s); rho=-1/sqrt2) = T(t)/2
// where Phi2 is the bivariate normal cdf, so no quadrature is needed.
double normal_abs_bz(double sigma, double t, const RootSpec& root) {
  const double k = -t / (kSqrt2 * sigma);
  const double target = 0.5 * (std_normal_cdf(t / (kSqrt2 * sigma)) - 0.5);
  auto fn = [&](double c) {
    const double h = c / sigma;
    const double p = std_normal_cdf(h);
    return 0.5 * p * p - binormal_cdf(h, k, -1.0 / kSqrt2) - target;
  };
  return solve_root(fn, 0.0, 0.5 * t + sigma, root);
}

}  // namespace

// ---- ConditionalPosterior ---------------------------------------------------

ConditionalPosterior::ConditionalPosterior(const LocationFamily& fam,
                                           double theta, double u,
                                           const QuadSpec& quad)
    : fam_(fam), theta_(theta), u_(u), quad_(quad) {
  if (theta < 0.0) throw std::invalid_argument("posterior needs theta >= 0");
  if (!(u > 0.0)) throw std::invalid_argument("posterior needs u > 0");
  const double lo = fam_.support_lo, hi = fam_.support_hi;
  // term 1: f(z-u+theta) f(z), term 2: f(z-u) f(z+theta)
  lo1_ = std::max(lo, lo + u - theta);
  hi1_ = std::min(hi, hi + u - theta);
  lo2_ = std::max(lo + u, lo - theta);
  hi2_ = std::min(hi + u, hi - theta);
  quad_.split_points.clear();
  // landmarks of both factors plus their midpoint, where the product peaks
  splits1_ = landmark_splits(fam_, {u - theta, 0.0, 0.5 * (u - theta)});
  splits2_ = landmark_splits(fam_, {u, -theta, 0.5 * (u - theta)});

  // Far in the gap the product mass underflows toward zero; integrating the
  // terms scaled to unit height keeps the relative tolerance meaningful, so
  // medians and weighted means stay accurate however small the mass is.
  auto probe_scale = [&](int which, double lo, double hi,
                         const std::vector<double>& pts) {
    double peak = 0.0;
    auto consider = [&](double z) {
      if (z < lo || z > hi || !std::isfinite(z)) return;
      peak = std::max(peak, term_value(which, z));
    };
    for (double z : pts) consider(z);
    if (std::isfinite(lo)) {
      consider(lo);
      consider(lo + 1e-3 * fam_.scale_hint());
    }
    if (std::isfinite(hi)) consider(hi);
    return peak;
  };
  scale1_ = probe_scale(0, lo1_, hi1_, splits1_);
  scale2_ = probe_scale(1, lo2_, hi2_, splits2_);
  normalizer_ = integrate_weighted([](double) { return 1.0; });
  if (!(normalizer_ > 0.0)) {
    throw QuadratureError("conditional posterior has no mass", normalizer_, 0.0);
  }
}

double ConditionalPosterior::term_value(int which, double z) const {
  const double v = which == 0
                       ? fam_.pdf(z - u_ + theta_) * fam_.pdf(z)
                       : fam_.pdf(z - u_) * fam_.pdf(z + theta_);
  return (v > 0.0 && std::isfinite(v)) ? v : 0.0;
}

double ConditionalPosterior::unnormalized(double z) const {
  return term_value(0, z) + term_value(1, z);
}

double ConditionalPosterior::term_integral(
    int which, const std::function<double(double)>& h, double up_to) const {
  const double lo = which == 0 ? lo1_ : lo2_;
  const double hi = std::min(up_to, which == 0 ? hi1_ : hi2_);
  const double scale = which == 0 ? scale1_ : scale2_;
  if (!(lo < hi) || scale == 0.0) return 0.0;
  QuadSpec q = quad_;
  q.split_points = which == 0 ? splits1_ : splits2_;
  return scale * integrate(
                     [&](double z) {
                       const double gv = term_value(which, z) / scale;
                       if (gv == 0.0) return 0.0;
                       const double v = h(z) * gv;
                       return std::isfinite(v) ? v : 0.0;
                     },
                     lo, hi, q);
}

double ConditionalPosterior::integrate_weighted(
    const std::function<double(double)>& h) const {
  const double inf = std::numeric_limits<double>::infinity();
  return term_integral(0, h, inf) + term_integral(1, h, inf);
}

double ConditionalPosterior::cumulative(double z) const {
  auto one = [](double) { return 1.0; };
  return term_integral(0, one, z) + term_integral(1, one, z);
}

double ConditionalPosterior::median(const RootSpec& root) const {
  const double half = 0.5 * normalizer_;
  const double lo_finite = std::min(std::isfinite(lo1_) ? lo1_ : u_ / 2.0,
                                    std::isfinite(lo2_) ? lo2_ : u_ / 2.0);
  const double scale = fam_.scale_hint() + u_;
  return solve_root([&](double m) { return cumulative(m) - half; },
                    lo_finite - scale, lo_finite + scale, root);
}

// ---- Calibration ------------------------------------------------------------

Calibration::Calibration(LocationFamily fam, LossSpec loss,
                         CalibrationOptions opt)
    : fam_(std::move(fam)), loss_(std::move(loss)), opt_(std::move(opt)) {
  const bool is_normal = fam_.name == "normal";
  const bool is_exponential = fam_.name == "exponential";
  const double sigma = (is_normal || is_exponential) ? fam_.params.at("sigma") : 0.0;
  const double a = loss_.a;

  if (is_exponential && loss_.kind == LossSpec::Kind::linex && a * sigma >= 1.0) {
    throw std::invalid_argument(
        "linex calibration for the exponential family needs a*sigma < 1");
  }

  m0_ = fam_.quantile(0.5);

  bool have_cf = false;
  if (opt_.use_closed_forms && is_normal) {
    const RootSpec root = opt_.root;
    cf_m0u_ = [](double u) { return 0.5 * u; };
    switch (loss_.kind) {
      case LossSpec::Kind::squared:
        c0_ = 0.0;
        b0_ = sigma / kSqrtPi;
        cf_c0u_ = [](double u) { return 0.5 * u; };
        cf_phibz_ = [sigma](double t) { return normal_sq_bz(sigma, t); };
        have_cf = true;
        break;
      case LossSpec::Kind::linex:
        c0_ = 0.5 * a * sigma * sigma;
        b0_ = (kLn2 + 0.5 * a * a * sigma * sigma +
               std::log(std_normal_cdf(a * sigma / kSqrt2))) / a;
        cf_c0u_ = [a, sigma](double u) {
          return 0.5 * u + 0.25 * a * sigma * sigma;
        };
        cf_phibz_ = [sigma, a](double t) { return normal_linex_bz(sigma, a, t); };
        have_cf = true;
        break;
      case LossSpec::Kind::absolute:
        c0_ = 0.0;
        b0_ = sigma * std_normal_quantile(1.0 / kSqrt2);
        cf_c0u_ = [](double u) { return 0.5 * u; };
        cf_phibz_ = [sigma, root](double t) {
          return normal_abs_bz(sigma, t, root);
        };
        have_cf = true;
        break;
      case LossSpec::Kind::custom:
        break;
    }
  } else if (opt_.use_closed_forms && is_exponential) {
    cf_m0u_ = [sigma](double u) { return u + 0.5 * sigma * kLn2; };
    switch (loss_.kind) {
      case LossSpec::Kind::squared:
        c0_ = sigma;
        b0_ = 1.5 * sigma;
        cf_c0u_ = [sigma](double u) { return u + 0.5 * sigma; };
        cf_phibz_ = [sigma](double t) { return exp_sq_bz(sigma, t); };
        have_cf = true;
        break;
      case LossSpec::Kind::linex:
        c0_ = -std::log1p(-a * sigma) / a;
        b0_ = (kLn2 - std::log1p(-a * sigma) - std::log(2.0 - a * sigma)) / a;
        cf_c0u_ = [a, sigma](double u) {
          return u + (kLn2 - std::log(2.0 - a * sigma)) / a;
        };
        cf_phibz_ = [sigma, a](double t) { return exp_linex_bz(sigma, a, t); };
        have_cf = true;
        break;
      case LossSpec::Kind::absolute:
        c0_ = sigma * kLn2;
        b0_ = -sigma * std::log1p(-1.0 / kSqrt2);
        cf_c0u_ = [sigma](double u) { return u + 0.5 * sigma * kLn2; };
        cf_phibz_ = [sigma](double t) { return exp_abs_bz(sigma, t); };
        have_cf = true;
        break;
      case LossSpec::Kind::custom:
        break;
    }
  }

  if (have_cf) {
    c0_prov_ = b0_prov_ = curve_prov_ = Provenance::closed_form;
  } else {
    cf_c0u_ = nullptr;
    cf_phibz_ = nullptr;
    if (!(opt_.use_closed_forms && (is_normal || is_exponential))) {
      cf_m0u_ = nullptr;
    }
    c0_ = c0_numeric();
    b0_ = b0_numeric();
    c0_prov_ = b0_prov_ = curve_prov_ = Provenance::numeric;
  }
}

double Calibration::c0_numeric() const {
  std::vector<WeightTerm> w{{fam_.pdf, fam_.support_lo, fam_.support_hi,
                             landmark_splits(fam_, {0.0})}};
  return loss_calibration_root(loss_, w, fam_.quantile(0.5), fam_.scale_hint(),
                               opt_.quad, opt_.root);
}

double Calibration::b0_numeric() const {
  auto pdf = fam_.pdf;
  auto cdf = fam_.cdf;
  std::vector<WeightTerm> w{
      {[pdf, cdf](double z) { return pdf(z) * cdf(z); },
       fam_.support_lo, fam_.support_hi, landmark_splits(fam_, {0.0})}};
  return loss_calibration_root(loss_, w, fam_.quantile(0.5), fam_.scale_hint(),
                               opt_.quad, opt_.root);
}

double Calibration::c_zero_u_numeric(double u) const {
  return c_theta_u(0.0, u);
}

double Calibration::m_zero_u_numeric(double u) const {
  return m_theta_u(0.0, u);
}

double Calibration::phi_bz_numeric(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("phi_bz needs t > 0");
  auto pdf = fam_.pdf;
  auto cdf = fam_.cdf;
  WeightTerm w{[pdf, cdf, t](double z) { return (cdf(z) - cdf(z - t)) * pdf(z); },
               fam_.support_lo, fam_.support_hi, landmark_splits(fam_, {0.0})};
  if (std::isfinite(fam_.support_lo)) w.splits.push_back(fam_.support_lo + t);
  const double center = fam_.quantile(0.5) + 0.5 * t;
  const double scale = fam_.scale_hint() + 0.5 * t;
  return loss_calibration_root(loss_, {w}, center, scale, opt_.quad, opt_.root);
}

double Calibration::memoized(int which, double x,
                             const std::function<double(double)>& compute) const {
  if (!(std::fabs(x) < 8e6)) return compute(x);
  const long long key = std::llround(x * 1e12);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_[which].find(key);
    if (it != memo_[which].end()) return it->second;
  }
  const double v = compute(x);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_[which].emplace(key, v);
  return v;
}

static void require_positive(double u, const char* what) {
  if (!(u > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

double Calibration::c_zero_u(double u) const {
  require_positive(u, "u");
  if (cf_c0u_) return cf_c0u_(u);
  return memoized(0, u, [this](double x) { return c_zero_u_numeric(x); });
}

double Calibration::phi_bz(double t) const {
  require_positive(t, "t");
  if (cf_phibz_) return cf_phibz_(t);
  return memoized(1, t, [this](double x) { return phi_bz_numeric(x); });
}

double Calibration::m_zero_u(double u) const {
  require_positive(u, "u");
  if (cf_m0u_) return cf_m0u_(u);
  return memoized(2, u, [this](double x) { return m_zero_u_numeric(x); });
}

double Calibration::c_theta_u(double theta, double u) const {
  require_positive(u, "u");
  ConditionalPosterior post(fam_, theta, u, opt_.quad);
  if (loss_.uses_median_equations()) return post.median(opt_.root);
  const double lo_f = std::isfinite(fam_.support_lo) ? fam_.support_lo : 0.0;
  const double center = lo_f + 0.5 * u + fam_.quantile(0.5);
  const double scale = fam_.scale_hint() + 0.5 * u + theta;
  auto fn = [&](double c) {
    return post.integrate_weighted(
        [&](double z) { return loss_.w_prime(z - c); });
  };
  return solve_root(fn, center - scale, center + scale, opt_.root);
}

double Calibration::m_theta_u(double theta, double u) const {
  require_positive(u, "u");
  if (theta == 0.0 && cf_m0u_) return cf_m0u_(u);
  ConditionalPosterior post(fam_, theta, u, opt_.quad);
  return post.median(opt_.root);
}

double Calibration::b_theta(double theta) const {
  if (theta < 0.0) throw std::invalid_argument("b_theta needs theta >= 0");
  auto pdf = fam_.pdf;
  auto cdf = fam_.cdf;
  const double lo = fam_.support_lo, hi = fam_.support_hi;
  std::vector<WeightTerm> w;
  w.push_back({[pdf, cdf, theta](double z) { return cdf(z + theta) * pdf(z); },
               lo, hi, landmark_splits(fam_, {0.0})});
  w.push_back({[pdf, cdf, theta](double z) { return cdf(z) * pdf(z + theta); },
               lo, std::isfinite(hi) ? hi - theta : hi,
               landmark_splits(fam_, {-theta})});
  const double center = fam_.quantile(0.5);
  const double scale = fam_.scale_hint() + 0.5 * theta;
  return loss_calibration_root(loss_, w, center, scale, opt_.quad, opt_.root);
}

}  // namespace ordloc
