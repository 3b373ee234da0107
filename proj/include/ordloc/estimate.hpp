#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ordloc/calibrate.hpp"
#include "ordloc/family.hpp"

namespace ordloc {

// Every estimator here is location equivariant and permutation symmetric,
// hence of the form  x_max - shrink(u).
enum class EstimatorKind {
  natural,             // x_max - c0
  stein,               // x_max - min{c0, c(0,u)}
  b0,                  // x_max - b0
  brewster_zidek,      // x_max - phi_bz(u)
  pitman_nearest,      // x_max - m0
  pitman_improved_m0,  // x_max - min{m0, m(0,u)}
  pitman_improved_c0,  // x_max - min{c0, m(0,u)}
  custom_phi,
};

const char* estimator_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

struct Estimate {
  EstimatorKind kind;
  double value;   // x_max - shrink, always
  double shrink;  // the amount actually subtracted
};

Estimate natural(const ObservationPair& obs, const Calibration& cal);
Estimate stein(const ObservationPair& obs, const Calibration& cal);
Estimate b0_estimator(const ObservationPair& obs, const Calibration& cal);
Estimate brewster_zidek(const ObservationPair& obs, const Calibration& cal);
Estimate pitman_nearest(const ObservationPair& obs, const Calibration& cal);

enum class PitmanAnchor { m0, c0 };
Estimate pitman_improved(const ObservationPair& obs, const Calibration& cal,
                         PitmanAnchor anchor);

Estimate custom_equivariant(const ObservationPair& obs,
                            const std::function<double(double)>& phi);

Estimate evaluate(EstimatorKind kind, const ObservationPair& obs,
                  const Calibration& cal);

// The shrink function u -> phi(u) of a named estimator, bound to a
// calibration. This is what the Monte Carlo engine evaluates per draw.
std::function<double(double)> shrink_function(EstimatorKind kind,
                                              const Calibration& cal);

// Diagnostic membership test for the improved class over the b0 estimator:
//  (i)   phi nondecreasing on the grid,
//  (ii)  phi(50 sigma) within 1e-3 of b0,
//  (iii) int w'(z - phi(t)) [F(z) - F(z-t)] f(z) dz <= 1e-8 at every grid t
//        (half-mass form for the absolute loss).
struct IerdReport {
  bool monotone = false;
  bool limit_matches_b0 = false;
  bool condition3 = false;
  double t_max = 0.0;
  double phi_at_t_max = 0.0;
  double b0 = 0.0;
  double worst_condition3 = 0.0;  // max over the grid of the condition-(iii) integral
  std::vector<double> t_grid;
  std::vector<double> phi_values;
  std::vector<double> condition3_values;

  bool pass() const { return monotone && limit_matches_b0 && condition3; }
};

IerdReport ierd_check(const std::function<double(double)>& phi,
                      const Calibration& cal, const std::vector<double>& t_grid);

}  // namespace ordloc
