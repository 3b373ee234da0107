#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordloc {

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 60;
  std::vector<double> split_points;  // interior points to split at (kinks, jumps)
};

struct RootSpec {
  double tol = 1e-12;
  int max_iter = 200;
  double bracket_expand_factor = 2.0;
};

// Thrown when the adaptive subdivision cannot reach the requested tolerance;
// carries the best estimate so callers can still inspect it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best, double bound)
      : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
  double best_estimate;
  double error_bound;
};

class RootError : public std::runtime_error {
 public:
  explicit RootError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive Gauss-Kronrod (7-15) integration of fn over (lo, hi). Either
// endpoint may be infinite; infinite ranges are mapped onto finite ones by a
// smooth rational change of variable before subdividing. Deterministic:
// identical inputs give bit-identical results.
double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 const QuadSpec& spec = {});

// Root of fn on [lo, hi] by Brent's method. If the initial interval does not
// bracket a sign change it is expanded geometrically (up to 100 times) toward
// the endpoint with the smaller |fn|. Terminates when the bracket width falls
// below spec.tol.
double solve_root(const std::function<double(double)>& fn, double lo, double hi,
                  const RootSpec& spec = {});

}  // namespace ordloc
