#include "ordloc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ordloc {

namespace {

// 15-point Kronrod nodes with the embedded 7-point Gauss rule (positive
// half; the rule is symmetric). gauss_weight is zero at pure Kronrod nodes.
struct NodeRow {
  double node, gauss_weight, kronrod_weight;
};
constexpr NodeRow kGK15[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct Panel {
  double a, b;
  double value, error;
  int depth;
};

struct GKResult {
  double value, error, resabs;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  fv[0] = f(mid);
  double k15 = kGK15[0].kronrod_weight * fv[0];
  double g7 = kGK15[0].gauss_weight * fv[0];
  double resabs = kGK15[0].kronrod_weight * std::fabs(fv[0]);
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i].node;
    const double fr = f(mid + dx);
    const double fl = f(mid - dx);
    fv[2 * i - 1] = fr;
    fv[2 * i] = fl;
    k15 += kGK15[i].kronrod_weight * (fr + fl);
    g7 += kGK15[i].gauss_weight * (fr + fl);
    resabs += kGK15[i].kronrod_weight * (std::fabs(fr) + std::fabs(fl));
  }

  // Scaled error estimate in the style of QUADPACK's dqk15.
  const double mean = k15 * 0.5;
  double resasc = kGK15[0].kronrod_weight * std::fabs(fv[0] - mean);
  for (int i = 1; i < 8; ++i) {
    resasc += kGK15[i].kronrod_weight *
              (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));
  }
  const double habs = std::fabs(half);
  const double value = k15 * half;
  resabs *= habs;
  resasc *= habs;
  double err = std::fabs((k15 - g7) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * resabs);
  }
  return {value, err, resabs};
}

bool worse(const Panel& x, const Panel& y) {
  if (x.error != y.error) return x.error < y.error;
  return x.a < y.a;  // deterministic tie break
}

double adaptive_finite(const std::function<double(double)>& f, double a,
                       double b, const QuadSpec& spec) {
  if (a == b) return 0.0;
  constexpr std::size_t kMaxPanels = 5000;

  std::vector<Panel> heap;
  auto push = [&](double lo, double hi, int depth) {
    GKResult r = gk15(f, lo, hi);
    if (!std::isfinite(r.value)) {
      throw QuadratureError("integrand produced a non-finite value", r.value,
                            std::numeric_limits<double>::infinity());
    }
    heap.push_back({lo, hi, r.value, r.error, depth});
    std::push_heap(heap.begin(), heap.end(), worse);
  };
  push(a, b, 0);

  std::vector<Panel> frozen;  // panels at max depth, no longer splittable
  double frozen_value = 0.0, frozen_error = 0.0;

  for (;;) {
    double total = frozen_value, err = frozen_error;
    for (const Panel& p : heap) {
      total += p.value;
      err += p.error;
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
    if (err <= tol) return total;

    if (heap.empty() || heap.size() + frozen.size() >= kMaxPanels) {
      throw QuadratureError("quadrature failed to converge", total, err);
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    Panel top = heap.back();
    heap.pop_back();
    if (top.depth >= spec.max_depth) {
      frozen.push_back(top);
      frozen_value += top.value;
      frozen_error += top.error;
      if (heap.empty()) {
        double t = frozen_value, e = frozen_error;
        throw QuadratureError("quadrature failed to converge", t, e);
      }
      continue;
    }
    const double mid = 0.5 * (top.a + top.b);
    if (mid <= top.a || mid >= top.b) {  // interval exhausted in doubles
      frozen.push_back(top);
      frozen_value += top.value;
      frozen_error += top.error;
      continue;
    }
    push(top.a, mid, top.depth + 1);
    push(mid, top.b, top.depth + 1);
  }
}

double guard0(double v) { return std::isfinite(v) ? v : 0.0; }

// Map an infinite range onto a finite parameter interval. The wrapped
// integrand treats non-finite values in the far tail as zero, which is the
// correct limit for any integrable function.
double integrate_transformed(const std::function<double(double)>& f, double lo,
                             double hi, const QuadSpec& spec) {
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) {
    auto g = [&f](double t) {
      const double om = 1.0 - t * t;
      const double x = t / om;
      return guard0(f(x) * (1.0 + t * t) / (om * om));
    };
    return adaptive_finite(g, -1.0, 1.0, spec);
  }
  if (hi_inf) {
    auto g = [&f, lo](double t) {
      const double om = 1.0 - t;
      const double x = lo + t / om;
      return guard0(f(x) / (om * om));
    };
    return adaptive_finite(g, 0.0, 1.0, spec);
  }
  // lo == -inf
  auto g = [&f, hi](double t) {
    const double om = 1.0 - t;
    const double x = hi - t / om;
    return guard0(f(x) / (om * om));
  };
  return adaptive_finite(g, 0.0, 1.0, spec);
}

}  // namespace

double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 const QuadSpec& spec) {
  if (!(spec.abs_tol > 0) || !(spec.rel_tol > 0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (lo > hi) return -integrate(fn, hi, lo, spec);
  if (lo == hi) return 0.0;

  std::vector<double> cuts;
  for (double s : spec.split_points) {
    if (s > lo && s < hi) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadSpec piece = spec;
  piece.split_points.clear();
  // Share the absolute budget across pieces so the sum still meets it.
  if (!cuts.empty()) piece.abs_tol = spec.abs_tol / double(cuts.size() + 1);

  double total = 0.0;
  double left = lo;
  for (double cut : cuts) {
    total += std::isinf(left) ? integrate_transformed(fn, left, cut, piece)
                              : adaptive_finite(fn, left, cut, piece);
    left = cut;
  }
  if (std::isinf(left) || std::isinf(hi)) {
    total += integrate_transformed(fn, left, hi, piece);
  } else {
    total += adaptive_finite(fn, left, hi, piece);
  }
  return total;
}

double solve_root(const std::function<double(double)>& fn, double lo, double hi,
                  const RootSpec& spec) {
  if (!(spec.tol > 0)) throw std::invalid_argument("root tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double a = lo, b = hi;
  double fa = fn(a), fb = fn(b);

  // sign-based test; a product of two tiny values would underflow to zero
  // and fake a bracket
  auto bracketed = [](double x, double y) {
    return (x <= 0.0 && y >= 0.0) || (x >= 0.0 && y <= 0.0);
  };
  for (int i = 0; !bracketed(fa, fb); ++i) {
    if (i >= 100) {
      throw RootError("no sign change found while expanding the bracket");
    }
    const double w = (b - a) > 0 ? (b - a) : 1.0;
    if (std::fabs(fa) < std::fabs(fb)) {
      a -= spec.bracket_expand_factor * w;
      fa = fn(a);
    } else {
      b += spec.bracket_expand_factor * w;
      fb = fn(b);
    }
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  // Brent: inverse quadratic / secant steps guarded by bisection.
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < spec.max_iter; ++iter) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
        0.5 * spec.tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = fn(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw RootError("root iteration did not converge");
}

}  // namespace ordloc
