#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "mot/io.hpp"
#include "mot/sinkhorn.hpp"

using namespace mot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("motkit_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("fmt_double round-trips doubles exactly") {
  SplitMix64 rng(701);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, (int)rng.uniform_index(20) - 10);
    CHECK(std::stod(fmt_double(v)) == v);
  }
  CHECK(fmt_double(0.1) == "0.10000000000000001");
}

TEST_CASE("tensor save/load round trip, inline JSON") {
  TempDir tmp;
  SplitMix64 rng(703);
  const DenseTensor t = testutil::random_cost(rng, 3, 3);
  const std::string p = (tmp.path / "t.json").string();
  save_tensor(t, p);
  const DenseTensor back = load_tensor(p);
  REQUIRE(back.shape == t.shape);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    CHECK(back.data[i] == t.data[i]);
}

TEST_CASE("tensor save/load round trip, binary manifest") {
  TempDir tmp;
  SplitMix64 rng(707);
  // > 1e5 entries forces the f64le binary side file.
  DenseTensor t = zeros(Shape({64, 64, 32}));
  for (double& v : t.data) v = rng.uniform(-5.0, 5.0);
  const std::string p = (tmp.path / "big.json").string();
  save_tensor(t, p);
  CHECK(fs::exists(tmp.path / "big.bin"));
  const DenseTensor back = load_tensor(p);
  REQUIRE(back.shape == t.shape);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    CHECK(back.data[i] == t.data[i]);
}

TEST_CASE("instance save/load round trip and validation") {
  TempDir tmp;
  SplitMix64 rng(709);
  const MotInstance inst = testutil::random_instance(rng, 3, 3);
  const std::string p = (tmp.path / "inst.json").string();
  save_instance(inst, p);
  const MotInstance back = load_instance(p);
  CHECK(back.m == 3);
  CHECK(back.n == 3);
  for (std::size_t i = 0; i < inst.cost.data.size(); ++i)
    CHECK(back.cost.data[i] == inst.cost.data[i]);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(back.marginals[k][j] == inst.marginals[k][j]);

  // Bad marginals are rejected on load.
  std::ofstream bad(tmp.path / "bad.json");
  bad << R"({"cost": {"sizes": [2,2], "data": [0,0,0,0]},)"
      << R"("marginals": [[0.7,0.7],[0.5,0.5]]})";
  bad.close();
  CHECK_THROWS((void)load_instance((tmp.path / "bad.json").string()));
  CHECK_THROWS((void)load_tensor((tmp.path / "missing.json").string()));
}

TEST_CASE("trace CSV schema") {
  SplitMix64 rng(711);
  const MotInstance inst = testutil::random_instance(rng, 3, 3);
  const SolveResult greedy = multi_sinkhorn(inst, 0.5, 1e-3);
  const std::string csv = greedy.report.trace_csv();
  CHECK(csv.rfind("t,E,phi,axis\n", 0) == 0);
  // Row count = trace length + header.
  std::size_t lines = 0;
  for (char c : csv) lines += (c == '\n');
  CHECK(lines == greedy.report.trace.size() + 1);

  SolveReport rep;
  rep.trace.push_back({});
  rep.trace.back().hasTheta = true;
  rep.trace.back().theta = 1.0;
  CHECK(rep.trace_csv().rfind("t,E,phi,axis,theta\n", 0) == 0);
}

TEST_CASE("report JSON carries the summary fields") {
  SplitMix64 rng(713);
  const MotInstance inst = testutil::random_instance(rng, 2, 3);
  const SolveResult res = multi_sinkhorn(inst, 0.5, 1e-4);
  const std::string j = report_json(res.report);
  CHECK(j.find("\"solver\": \"greedy\"") != std::string::npos);
  CHECK(j.find("\"trace\"") != std::string::npos);
  CHECK(j.find("\"Rbar\"") != std::string::npos);
}

TEST_CASE("serialization is byte-stable across repeats") {
  TempDir tmp;
  SplitMix64 rng(717);
  const MotInstance inst = testutil::random_instance(rng, 3, 3);
  const SolveResult a = multi_sinkhorn(inst, 0.5, 1e-5);
  const SolveResult b = multi_sinkhorn(inst, 0.5, 1e-5);
  CHECK(report_json(a.report) == report_json(b.report));
  CHECK(a.report.trace_csv() == b.report.trace_csv());

  save_instance(inst, (tmp.path / "a.json").string());
  save_instance(inst, (tmp.path / "b.json").string());
  CHECK(slurp(tmp.path / "a.json") == slurp(tmp.path / "b.json"));
  CHECK(file_hash((tmp.path / "a.json").string()) ==
        file_hash((tmp.path / "b.json").string()));
}

TEST_CASE("file_hash is FNV-1a") {
  TempDir tmp;
  std::ofstream f(tmp.path / "x.txt", std::ios::binary);
  f << "abc";
  f.close();
  // Known FNV-1a 64-bit digest of "abc".
  CHECK(file_hash((tmp.path / "x.txt").string()) == "e71fa2190541574b");
}
