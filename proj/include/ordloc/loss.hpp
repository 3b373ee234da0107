#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ordloc {

// A bowl-shaped loss W applied to the estimation error, together with its
// derivative. W must vanish at 0, decrease strictly on the negatives and
// increase strictly on the positives, with a nondecreasing derivative.
struct LossSpec {
  enum class Kind { squared, linex, absolute, custom };

  Kind kind = Kind::squared;
  double a = 0.0;  // linex shape; meaningful only for kind == linex
  std::function<double(double)> w;
  std::function<double(double)> w_prime;

  // The absolute loss is handled through median (half-mass) equations in
  // calibration, never through roots of w_prime, since w_prime jumps at 0.
  bool uses_median_equations() const { return kind == Kind::absolute; }
};

const char* loss_name(LossSpec::Kind kind);
LossSpec::Kind loss_kind_from_name(const std::string& name);

// Builds one of the named losses:
//   squared   w(t) = t^2
//   linex     w(t) = e^{at} - at - 1, a != 0
//   absolute  w(t) = |t|, with w'(0) = 0 by convention
LossSpec make_loss(LossSpec::Kind kind, std::optional<double> a = std::nullopt);

// Wraps caller-supplied functions; validation is probe-grid based via
// check_bowl, not symbolic.
LossSpec make_custom_loss(std::function<double(double)> w,
                          std::function<double(double)> w_prime);

// True iff, across the given grid (sorted, containing 0 and points on both
// sides), w(0) = 0, w strictly decreases then strictly increases, and
// w_prime is nondecreasing.
bool check_bowl(const LossSpec& loss, const std::vector<double>& grid);

}  // namespace ordloc
