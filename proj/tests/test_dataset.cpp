#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ordloc/dataset.hpp"

using namespace ordloc;

namespace {

const std::string kJutePath = std::string(ORDLOC_DATA_DIR) + "/jute.csv";

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/ordloc_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("bundled strength data loads with the expected minima") {
  const DataSet ds = ingest_csv(kJutePath, ReductionMode::sample_minimum);
  CHECK(ds.groups[0].size() == 30);
  CHECK(ds.groups[1].size() == 30);
  CHECK(ds.labels[0] == "10mm");
  CHECK(ds.labels[1] == "15mm");
  CHECK(ds.warnings.empty());

  const Reduced red = reduce(ds, exponential_family(322.0));
  CHECK(red.pair.x1 == 43.93);
  CHECK(red.pair.x2 == 42.66);
  CHECK(red.sigma_eff == doctest::Approx(322.0 / 30.0).epsilon(1e-12));
}

TEST_CASE("reduction needs equal group sizes") {
  std::string csv = "group,value\n";
  for (int i = 0; i < 30; ++i) csv += "a," + std::to_string(10 + i) + "\n";
  for (int i = 0; i < 29; ++i) csv += "b," + std::to_string(20 + i) + "\n";
  const std::string path = write_temp("unequal.csv", csv);
  const DataSet ds = ingest_csv(path, ReductionMode::sample_minimum);
  CHECK_THROWS_AS(reduce(ds, exponential_family(1.0)), IngestError);
}

TEST_CASE("sample-minimum reduction is exponential-only") {
  const DataSet ds = ingest_csv(kJutePath, ReductionMode::sample_minimum);
  CHECK_THROWS_AS(reduce(ds, normal_family(1.0)), IngestError);
}

TEST_CASE("raw pair mode passes values through") {
  const std::string p1 = write_temp("pair1.txt", "3.25\n");
  const std::string p2 = write_temp("pair2.txt", "1.5\n");
  const DataSet ds = ingest_two_files(p1, p2, ReductionMode::raw_pair);
  const Reduced red = reduce(ds, exponential_family(2.0));
  CHECK(red.pair.x1 == 3.25);
  CHECK(red.pair.x2 == 1.5);
  CHECK(red.sigma_eff == 2.0);
}

TEST_CASE("raw pair mode rejects longer groups") {
  const std::string p1 = write_temp("long1.txt", "3.25\n4.5\n");
  const std::string p2 = write_temp("long2.txt", "1.5\n");
  CHECK_THROWS_AS(ingest_two_files(p1, p2, ReductionMode::raw_pair),
                  IngestError);
}

TEST_CASE("ingest errors carry line numbers") {
  const std::string path =
      write_temp("garbled.csv", "group,value\na,1.0\nb,oops\na,2.0\n");
  try {
    ingest_csv(path, ReductionMode::sample_minimum);
    CHECK(false);
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("empty and malformed files are rejected") {
  CHECK_THROWS_AS(ingest_csv(write_temp("empty.csv", ""),
                             ReductionMode::sample_minimum),
                  IngestError);
  CHECK_THROWS_AS(ingest_csv(write_temp("onegroup.csv", "group,value\na,1\n"),
                             ReductionMode::sample_minimum),
                  IngestError);
  CHECK_THROWS_AS(ingest_csv("/nonexistent/nope.csv",
                             ReductionMode::sample_minimum),
                  IngestError);
  CHECK_THROWS_AS(ingest_csv(write_temp("threegroups.csv",
                                        "group,value\na,1\nb,2\nc,3\n"),
                             ReductionMode::sample_minimum),
                  IngestError);
}

TEST_CASE("non-positive values are flagged") {
  const std::string path =
      write_temp("nonpos.csv", "group,value\na,1.0\na,-2.0\nb,3.0\n");
  const DataSet ds = ingest_csv(path, ReductionMode::sample_minimum);
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("-2") != std::string::npos);
}

TEST_CASE("estimate table reproduces the three analyses") {
  const DataSet ds = ingest_csv(kJutePath, ReductionMode::sample_minimum);
  const Reduced red = reduce(ds, exponential_family(322.0));
  const LocationFamily fam = exponential_family(red.sigma_eff);
  const EstimateTable table = run_estimate_table(
      red.pair, fam,
      {make_loss(LossSpec::Kind::squared),
       make_loss(LossSpec::Kind::linex, -1.0),
       make_loss(LossSpec::Kind::absolute)});
  REQUIRE(table.rows.size() == 3);

  // frozen full-precision expectations (closed forms at sigma = 322/30)
  CHECK(table.rows[0].natural.value == doctest::Approx(33.196667).epsilon(1e-6));
  CHECK(table.rows[0].stein.value == doctest::Approx(37.293333).epsilon(1e-6));
  CHECK(table.rows[0].b0.value == doctest::Approx(27.830000).epsilon(1e-6));
  CHECK(table.rows[0].bz.value == doctest::Approx(37.940853).epsilon(1e-6));

  CHECK(table.rows[1].natural.value == doctest::Approx(41.467566).epsilon(1e-6));
  CHECK(table.rows[1].stein.value == doctest::Approx(41.467566).epsilon(1e-6));
  CHECK(table.rows[1].b0.value == doctest::Approx(39.616490).epsilon(1e-6));
  CHECK(table.rows[1].bz.value == doctest::Approx(41.522399).epsilon(1e-6));

  CHECK(table.rows[2].natural.value == doctest::Approx(36.490220).epsilon(1e-6));
  CHECK(table.rows[2].stein.value == doctest::Approx(38.940110).epsilon(1e-6));
  CHECK(table.rows[2].b0.value == doctest::Approx(30.750034).epsilon(1e-6));
  CHECK(table.rows[2].bz.value == doctest::Approx(39.575110).epsilon(1e-6));

  // the text table renders to two decimals and flags the absolute-loss bz
  const std::string text = table.to_text();
  CHECK(text.find("33.20") != std::string::npos);
  CHECK(text.find("41.47") != std::string::npos);
  CHECK(text.find("39.58") != std::string::npos);
  CHECK(text.find("45.65") != std::string::npos);

  // JSON sidecar keeps full precision
  const std::string json = table.to_json();
  CHECK(json.find("37.9408") != std::string::npos);
}

TEST_SUITE_END();
