#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "resbif/report.hpp"

using namespace resbif;

TEST_CASE("fixed float formatting") {
  CHECK(report::fmt(0.1) == "0.10000000000000001");
  CHECK(report::fmt(-2.0) == "-2");
}

TEST_CASE("rows are sorted by key and the header comes first") {
  report::CsvTable t({"a", "b"});
  t.add({2.0}, {"2", "x"});
  t.add({1.0}, {"1", "y"});
  t.add({1.0}, {"1", "z"});
  CHECK(t.str() == "a,b\n1,y\n1,z\n2,x\n");
}

TEST_CASE("meta block and JSON key order") {
  const auto m = report::meta(PotentialSpec::square_well(2.0, 1.0), {}, {{"command", "x"}});
  CHECK(m["version"] == report::kToolVersion);
  CHECK(m["descriptor_hash"].get<std::string>().size() == 16);
  CHECK(m["tolerances"]["rtol"].get<double>() > 0.0);
  const std::string s = m.dump();
  CHECK(s.find("\"command\"") < s.find("\"version\""));
}

TEST_CASE("scatter table of the free line") {
  const auto d = scattering_data(PotentialSpec::zero(), 2.0);
  const auto t = report::scatter_table({d});
  CHECK(t.size() == 1);
  CHECK(t.str().rfind("k_re,k_im,w_re", 0) == 0);
}

TEST_CASE("csv writer emits a sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "resbif_report_test";
  std::filesystem::create_directories(dir);
  report::CsvTable t({"a"});
  t.add({0.0}, {"1"});
  report::write_csv(dir / "x.csv", t, {{"k", 1}});
  CHECK(std::filesystem::exists(dir / "x.csv.meta.json"));
  std::ifstream f(dir / "x.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "a\n1\n");
}
