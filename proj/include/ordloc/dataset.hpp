#pragma once

#include <array>
#include <string>
#include <vector>

#include "ordloc/calibrate.hpp"
#include "ordloc/estimate.hpp"
#include "ordloc/family.hpp"
#include "ordloc/loss.hpp"

namespace ordloc {

enum class ReductionMode { raw_pair, sample_minimum };

// Exactly two groups of observations. In sample_minimum mode each group is
// reduced to its minimum (for shifted-exponential data the group minimum is
// again shifted exponential, with scale divided by the group size); in
// raw_pair mode each group must hold exactly one value.
struct DataSet {
  std::array<std::vector<double>, 2> groups;
  std::array<std::string, 2> labels;
  ReductionMode reduction = ReductionMode::sample_minimum;
  std::vector<std::string> warnings;  // e.g. non-positive values
};

class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// Reads a `group,value` CSV (header row optional). Group order follows first
// appearance; malformed rows are reported with their line numbers.
DataSet ingest_csv(const std::string& path, ReductionMode mode);

// Reads two one-column files, one group per file.
DataSet ingest_two_files(const std::string& path1, const std::string& path2,
                         ReductionMode mode);

struct Reduced {
  ObservationPair pair;
  double sigma_eff;
};

// Collapses the dataset to one observation per group. The family's sigma is
// the assumed common scale of the raw observations; in sample_minimum mode
// the returned effective scale is sigma / group size.
Reduced reduce(const DataSet& ds, const LocationFamily& family);

struct EstimateRow {
  std::string loss_label;
  double linex_a = 0.0;
  Estimate natural, stein, b0, bz;
};

struct EstimateTable {
  ObservationPair pair;
  double sigma_eff = 0.0;
  std::vector<EstimateRow> rows;
  std::vector<std::string> notes;

  std::string to_text() const;  // 2-decimal rendering
  std::string to_json() const;  // full precision sidecar
};

// One row per loss with the four estimates the analysis compares.
EstimateTable run_estimate_table(const ObservationPair& pair,
                                 const LocationFamily& family,
                                 const std::vector<LossSpec>& losses);

}  // namespace ordloc
