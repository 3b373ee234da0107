#include "ordloc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ordloc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

void flag_nonpositive(DataSet& ds) {
  for (int g = 0; g < 2; ++g) {
    for (std::size_t i = 0; i < ds.groups[g].size(); ++i) {
      if (ds.groups[g][i] <= 0.0) {
        std::ostringstream w;
        w << "group '" << ds.labels[g] << "' value " << ds.groups[g][i]
          << " is non-positive; incompatible with a nonnegative-support family";
        ds.warnings.push_back(w.str());
      }
    }
  }
}

}  // namespace

DataSet ingest_csv(const std::string& path, ReductionMode mode) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);

  DataSet ds;
  ds.reduction = mode;
  int n_labels = 0;
  std::vector<int> bad_lines;
  std::string line;
  int line_no = 0;
  bool any_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos) {
      bad_lines.push_back(line_no);
      continue;
    }
    const std::string label = trim(row.substr(0, comma));
    const std::string value_str = trim(row.substr(comma + 1));
    double value = 0.0;
    if (!parse_double(value_str, value)) {
      // tolerate one header row
      if (line_no == 1) continue;
      bad_lines.push_back(line_no);
      continue;
    }
    any_data = true;
    int g = -1;
    for (int i = 0; i < n_labels; ++i) {
      if (ds.labels[i] == label) g = i;
    }
    if (g < 0) {
      if (n_labels == 2) {
        throw IngestError("more than two groups in " + path +
                          " (third label '" + label + "' at line " +
                          std::to_string(line_no) + ")");
      }
      g = n_labels++;
      ds.labels[g] = label;
    }
    ds.groups[g].push_back(value);
  }

  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << "garbled rows in " << path << " at line(s)";
    for (int l : bad_lines) msg << ' ' << l;
    throw IngestError(msg.str());
  }
  if (!any_data || n_labels < 2 || ds.groups[0].empty() || ds.groups[1].empty()) {
    throw IngestError(path + " does not contain two nonempty groups");
  }
  if (mode == ReductionMode::raw_pair &&
      (ds.groups[0].size() != 1 || ds.groups[1].size() != 1)) {
    throw IngestError("raw_pair mode needs exactly one value per group");
  }
  flag_nonpositive(ds);
  return ds;
}

DataSet ingest_two_files(const std::string& path1, const std::string& path2,
                         ReductionMode mode) {
  DataSet ds;
  ds.reduction = mode;
  const std::string* paths[2] = {&path1, &path2};
  for (int g = 0; g < 2; ++g) {
    std::ifstream in(*paths[g]);
    if (!in) throw IngestError("cannot open " + *paths[g]);
    ds.labels[g] = *paths[g];
    std::string line;
    int line_no = 0;
    std::vector<int> bad_lines;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string row = trim(line);
      if (row.empty()) continue;
      double value = 0.0;
      if (!parse_double(row, value)) {
        bad_lines.push_back(line_no);
        continue;
      }
      ds.groups[g].push_back(value);
    }
    if (!bad_lines.empty()) {
      std::ostringstream msg;
      msg << "garbled rows in " << *paths[g] << " at line(s)";
      for (int l : bad_lines) msg << ' ' << l;
      throw IngestError(msg.str());
    }
    if (ds.groups[g].empty()) throw IngestError(*paths[g] + " is empty");
  }
  if (mode == ReductionMode::raw_pair &&
      (ds.groups[0].size() != 1 || ds.groups[1].size() != 1)) {
    throw IngestError("raw_pair mode needs exactly one value per group");
  }
  flag_nonpositive(ds);
  return ds;
}

Reduced reduce(const DataSet& ds, const LocationFamily& family) {
  const double sigma_hat = family.scale_hint();
  if (ds.reduction == ReductionMode::raw_pair) {
    if (ds.groups[0].size() != 1 || ds.groups[1].size() != 1) {
      throw IngestError("raw_pair reduction needs singleton groups");
    }
    return {ObservationPair{ds.groups[0][0], ds.groups[1][0]}, sigma_hat};
  }
  if (family.name != "exponential") {
    throw IngestError(
        "sample_minimum reduction is only exact for the exponential family");
  }
  const std::size_t n = ds.groups[0].size();
  if (ds.groups[1].size() != n) {
    throw IngestError("sample_minimum reduction needs equal group sizes (got " +
                      std::to_string(n) + " and " +
                      std::to_string(ds.groups[1].size()) + ")");
  }
  const double x1 = *std::min_element(ds.groups[0].begin(), ds.groups[0].end());
  const double x2 = *std::min_element(ds.groups[1].begin(), ds.groups[1].end());
  return {ObservationPair{x1, x2}, sigma_hat / double(n)};
}

EstimateTable run_estimate_table(const ObservationPair& pair,
                                 const LocationFamily& family,
                                 const std::vector<LossSpec>& losses) {
  EstimateTable table;
  table.pair = pair;
  table.sigma_eff = family.scale_hint();
  bool any_absolute = false;
  for (const LossSpec& loss : losses) {
    Calibration cal(family, loss);
    EstimateRow row;
    row.loss_label = loss_name(loss.kind);
    row.linex_a = loss.kind == LossSpec::Kind::linex ? loss.a : 0.0;
    row.natural = natural(pair, cal);
    row.stein = stein(pair, cal);
    row.b0 = b0_estimator(pair, cal);
    row.bz = brewster_zidek(pair, cal);
    table.rows.push_back(row);
    if (loss.kind == LossSpec::Kind::absolute) any_absolute = true;
  }
  if (any_absolute) {
    table.notes.push_back(
        "absolute-loss bz has no closed form; it is solved directly from the "
        "conditional half-mass equation and cross-checked against a nested "
        "double-integral route (for the bundled jute data this gives ~39.58, "
        "not the previously published 45.65)");
  }
  return table;
}

std::string EstimateTable::to_text() const {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "pair: x1=%.6g x2=%.6g (u=%.6g), sigma=%.6g\n",
                pair.x1, pair.x2, pair.u(), sigma_eff);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s %10s\n", "loss",
                "natural", "stein", "b0", "bz");
  out << buf;
  for (const EstimateRow& row : rows) {
    std::string label = row.loss_label;
    if (row.linex_a != 0.0) {
      std::snprintf(buf, sizeof(buf), "%s(a=%g)", row.loss_label.c_str(),
                    row.linex_a);
      label = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-14s %10.2f %10.2f %10.2f %10.2f\n",
                  label.c_str(), row.natural.value, row.stein.value,
                  row.b0.value, row.bz.value);
    out << buf;
  }
  for (const std::string& note : notes) out << "note: " << note << "\n";
  return out.str();
}

std::string EstimateTable::to_json() const {
  nlohmann::json j;
  j["x1"] = pair.x1;
  j["x2"] = pair.x2;
  j["u"] = pair.u();
  j["sigma_eff"] = sigma_eff;
  j["rows"] = nlohmann::json::array();
  for (const EstimateRow& row : rows) {
    nlohmann::json r;
    r["loss"] = row.loss_label;
    if (row.linex_a != 0.0) r["linex_a"] = row.linex_a;
    r["natural"] = {{"value", row.natural.value}, {"shrink", row.natural.shrink}};
    r["stein"] = {{"value", row.stein.value}, {"shrink", row.stein.shrink}};
    r["b0"] = {{"value", row.b0.value}, {"shrink", row.b0.shrink}};
    r["bz"] = {{"value", row.bz.value}, {"shrink", row.bz.shrink}};
    j["rows"].push_back(r);
  }
  j["notes"] = notes;
  return j.dump(2);
}

}  // namespace ordloc
