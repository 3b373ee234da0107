#include "ordloc/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ordloc {

const char* loss_name(LossSpec::Kind kind) {
  switch (kind) {
    case LossSpec::Kind::squared: return "squared";
    case LossSpec::Kind::linex: return "linex";
    case LossSpec::Kind::absolute: return "absolute";
    case LossSpec::Kind::custom: return "custom";
  }
  return "?";
}

LossSpec::Kind loss_kind_from_name(const std::string& name) {
  if (name == "squared") return LossSpec::Kind::squared;
  if (name == "linex") return LossSpec::Kind::linex;
  if (name == "absolute") return LossSpec::Kind::absolute;
  if (name == "custom") return LossSpec::Kind::custom;
  throw std::invalid_argument("unknown loss: " + name);
}

LossSpec make_loss(LossSpec::Kind kind, std::optional<double> a) {
  LossSpec spec;
  spec.kind = kind;
  switch (kind) {
    case LossSpec::Kind::squared:
      spec.w = [](double t) { return t * t; };
      spec.w_prime = [](double t) { return 2.0 * t; };
      break;
    case LossSpec::Kind::linex: {
      if (!a.has_value() || *a == 0.0) {
        throw std::invalid_argument("linex loss requires a nonzero shape a");
      }
      const double av = *a;
      spec.a = av;
      spec.w = [av](double t) { return std::expm1(av * t) - av * t; };
      spec.w_prime = [av](double t) { return av * std::expm1(av * t); };
      break;
    }
    case LossSpec::Kind::absolute:
      spec.w = [](double t) { return std::fabs(t); };
      spec.w_prime = [](double t) {
        return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
      };
      break;
    case LossSpec::Kind::custom:
      throw std::invalid_argument("use make_custom_loss for custom losses");
  }
  return spec;
}

LossSpec make_custom_loss(std::function<double(double)> w,
                          std::function<double(double)> w_prime) {
  if (!w || !w_prime) {
    throw std::invalid_argument("custom loss needs both w and w_prime");
  }
  LossSpec spec;
  spec.kind = LossSpec::Kind::custom;
  spec.w = std::move(w);
  spec.w_prime = std::move(w_prime);
  return spec;
}

bool check_bowl(const LossSpec& loss, const std::vector<double>& grid) {
  if (grid.size() < 3 || !std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("probe grid must be sorted with >= 3 points");
  }
  auto zero = std::find(grid.begin(), grid.end(), 0.0);
  if (zero == grid.begin() || zero == grid.end() ||
      std::next(zero) == grid.end()) {
    throw std::invalid_argument("probe grid must contain 0 with points on both sides");
  }

  if (loss.w(0.0) != 0.0) return false;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t0 = grid[i], t1 = grid[i + 1];
    const double w0 = loss.w(t0), w1 = loss.w(t1);
    if (w0 < 0.0 || w1 < 0.0) return false;
    if (t1 <= 0.0 && !(w0 > w1)) return false;  // strictly decreasing left of 0
    if (t0 >= 0.0 && !(w0 < w1)) return false;  // strictly increasing right of 0
    if (loss.w_prime(t0) > loss.w_prime(t1)) return false;
  }
  return true;
}

}  // namespace ordloc
