#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mot/accel.hpp"
#include "mot/bench.hpp"
#include "mot/driver.hpp"
#include "mot/hardness.hpp"
#include "mot/io.hpp"
#include "mot/oracle.hpp"
#include "mot/sinkhorn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "motkit 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitSizeCap = 4;

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

fs::path out_dir(const std::string& flagValue) {
  if (!flagValue.empty()) return flagValue;
  if (const char* env = std::getenv("MOT_OUT_DIR")) return env;
  return ".";
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

json manifest_json(const std::string& command,
                   const std::vector<std::string>& inputs,
                   const json& params) {
  json m;
  m["command"] = command;
  m["tool_version"] = kVersion;
  json hashes = json::object();
  for (const std::string& p : inputs) hashes[p] = mot::file_hash(p);
  m["inputs"] = hashes;
  m["parameters"] = params;
  return m;
}

struct SolveOpts {
  std::string instancePath;
  std::string outDir;
  double epsilon = 0.1;
  double eta = 0.0;
  double epsPrime = 0.0;
  std::size_t maxIter = 0;
  std::string solver = "greedy";
  std::string roundTarget = "original";
  bool oracle = false;
  bool writePlan = false;
};

int cmd_solve(const SolveOpts& o, const std::string& command) {
  const mot::MotInstance inst = mot::load_instance(o.instancePath);

  mot::ApproxConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.etaOverride = o.eta;
  cfg.epsPrimeOverride = o.epsPrime;
  cfg.maxIter = o.maxIter;
  cfg.solver = o.solver == "accel" ? mot::SolverKind::Accelerated
                                   : mot::SolverKind::Greedy;
  cfg.roundTarget = o.roundTarget == "smoothed" ? mot::RoundTarget::Smoothed
                                                : mot::RoundTarget::Original;

  const mot::ApproxResult res = mot::approx_mot(inst, cfg);

  const fs::path dir = out_dir(o.outDir);
  fs::create_directories(dir);

  json params;
  params["epsilon"] = mot::fmt_double(o.epsilon);
  params["eta"] = mot::fmt_double(res.eta);
  params["eps_prime"] = mot::fmt_double(res.epsPrime);
  params["solver"] = o.solver;
  params["round_target"] = o.roundTarget;
  params["max_iter"] = res.report.maxIter;

  json bundle;
  bundle["manifest"] = manifest_json(command, {o.instancePath}, params);
  bundle["objective"] = mot::fmt_double(res.objective);
  bundle["pre_round_objective"] = mot::fmt_double(res.preRoundObjective);
  bundle["iterations"] = res.report.iterations;
  bundle["final_E"] = mot::fmt_double(res.report.finalE);
  bundle["rounding_l1_move"] = mot::fmt_double(res.roundingReport.l1Move);
  bundle["report"] = json::parse(mot::report_json(res.report));

  if (o.oracle) {
    const mot::StandardFormLP lp = mot::build_lp(inst);
    const mot::LpSolution sol = mot::simplex_solve(lp);
    json oj;
    oj["lp_value"] = mot::fmt_double(sol.value);
    oj["gap"] = mot::fmt_double(res.objective - sol.value);
    oj["guarantee_satisfied"] =
        sol.status == mot::LpStatus::Optimal &&
        res.objective - sol.value <= o.epsilon + 1e-9;
    bundle["oracle"] = oj;
  }

  write_file(dir / "result.json", bundle.dump(2) + "\n");
  write_file(dir / "trace.csv", res.report.trace_csv());
  if (o.writePlan) mot::save_tensor(res.plan, (dir / "plan.json").string());
  std::cout << "objective " << mot::fmt_double(res.objective) << ", "
            << res.report.iterations << " iterations, results in "
            << dir.string() << "\n";
  return kExitOk;
}

int cmd_oracle(const std::string& instancePath) {
  const mot::MotInstance inst = mot::load_instance(instancePath);
  const mot::LpSolution sol = mot::simplex_solve(mot::build_lp(inst));
  const char* status = sol.status == mot::LpStatus::Optimal ? "optimal"
                       : sol.status == mot::LpStatus::Stalled ? "stalled"
                                                              : "infeasible";
  std::cout << "status " << status << "\noptimum "
            << mot::fmt_double(sol.value) << "\n";
  return sol.status == mot::LpStatus::Optimal ? kExitOk : kExitNoConverge;
}

void print_witness(const char* label, const mot::TuWitness& w) {
  std::cout << label << ": det = " << w.det << " at rows {";
  for (std::size_t i = 0; i < w.rowIdx.size(); ++i)
    std::cout << (i ? "," : "") << w.rowIdx[i];
  std::cout << "}, columns {";
  for (std::size_t i = 0; i < w.colIdx.size(); ++i)
    std::cout << (i ? "," : "") << w.colIdx[i];
  std::cout << "}\n";
}

int cmd_tu(std::size_t n, std::size_t m, std::size_t maxOrder,
           std::size_t minOrder) {
  const mot::IntMatrix A = mot::build_primal_constraints(n, m);
  std::cout << "constraint matrix " << A.rows << "x" << A.cols << ":\n";
  for (std::size_t r = 0; r < A.rows; ++r) {
    for (std::size_t c = 0; c < A.cols; ++c)
      std::cout << (c ? " " : "") << A.at(r, c);
    std::cout << "\n";
  }
  std::cout << "two-nonzero sufficient test: "
            << (mot::sufficient_tu(A) ? "passes (TU)" : "not applicable")
            << "\n";
  const mot::TuResult res = mot::tu_check(A, maxOrder, 5000000, minOrder);
  if (res.witness) {
    print_witness("not totally unimodular", *res.witness);
    const std::size_t full = std::min(A.rows, A.cols);
    if (res.witness->rowIdx.size() < full) {
      const mot::TuResult fullRes = mot::tu_check(A, full, 5000000, full);
      if (fullRes.witness) print_witness("full-order witness", *fullRes.witness);
    }
  } else if (res.partial) {
    std::cout << "inconclusive: enumeration budget exhausted at order "
              << res.maxOrderChecked + 1 << "\n";
  } else {
    std::cout << "totally unimodular up to order " << res.maxOrderChecked
              << "\n";
  }
  return kExitOk;
}

mot::MotInstance image_instance(std::size_t side, std::uint64_t seed,
                                std::size_t m,
                                std::vector<mot::SyntheticImage>& imgs) {
  imgs.clear();
  std::vector<mot::PointList> locs;
  mot::MarginalSet marginals;
  for (std::size_t k = 0; k < m; ++k) {
    imgs.push_back(mot::gen_synthetic_image(side, 0.10, seed * 1000 + k));
    locs.push_back(imgs.back().locations);
    marginals.push_back(imgs.back().marginal);
  }
  const mot::Vec lambda(m, 1.0 / static_cast<double>(m));
  return {mot::barycenter_cost(locs, lambda), std::move(marginals)};
}

struct BenchOpts {
  std::size_t side = 5;
  std::size_t seeds = 10;
  std::size_t m = 3;
  std::vector<double> etaList{0.2};
  std::string solver = "both";
  std::string outDir;
  double epsPrime = 0.05;
  std::size_t maxIter = 20000;
};

int cmd_bench_synthetic(const BenchOpts& o, const std::string& command) {
  const fs::path dir = out_dir(o.outDir);
  fs::create_directories(dir);

  std::vector<std::string> solvers;
  if (o.solver == "both") {
    solvers = {"greedy", "accel"};
  } else {
    solvers = {o.solver};
  }

  std::ostringstream csv;
  csv << "seed,solver,eta,iterations,final_E,d_X,trace_file,runtime_ms\n";
  json summary;
  json runs = json::array();
  std::vector<mot::SyntheticImage> imgs;
  for (std::uint64_t seed = 1; seed <= o.seeds; ++seed) {
    const mot::MotInstance inst = image_instance(o.side, seed, o.m, imgs);
    for (double eta : o.etaList) {
      for (const std::string& sname : solvers) {
        const auto t0 = std::chrono::steady_clock::now();
        const mot::SolveResult sol =
            sname == "greedy"
                ? mot::multi_sinkhorn(inst, eta, o.epsPrime, o.maxIter)
                : mot::accelerated_multi_sinkhorn(inst, eta, o.epsPrime,
                                                  o.maxIter);
        const auto t1 = std::chrono::steady_clock::now();
        const double ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();

        const mot::DenseTensor sc = mot::scaled_cost(inst, eta);
        const mot::DenseTensor plan =
            mot::materialize(sol.beta, sc, mot::lse_total(sol.beta, sc));
        const double dX = mot::metric_d(plan, inst.marginals);

        std::ostringstream tn;
        tn << "trace_s" << seed << "_" << sname << "_eta"
           << mot::fmt_double(eta) << ".csv";
        write_file(dir / tn.str(), sol.report.trace_csv());

        csv << seed << ',' << sname << ',' << mot::fmt_double(eta) << ','
            << sol.report.iterations << ','
            << mot::fmt_double(sol.report.finalE) << ','
            << mot::fmt_double(dX) << ',' << tn.str() << ','
            << mot::fmt_double(ms) << "\n";
        json run;
        run["seed"] = seed;
        run["solver"] = sname;
        run["eta"] = mot::fmt_double(eta);
        run["iterations"] = sol.report.iterations;
        run["final_E"] = mot::fmt_double(sol.report.finalE);
        run["d_X"] = mot::fmt_double(dX);
        run["converged"] = sol.report.converged;
        runs.push_back(run);
      }
    }
  }
  json params;
  params["side"] = o.side;
  params["seeds"] = o.seeds;
  params["marginals"] = o.m;
  params["eps_prime"] = mot::fmt_double(o.epsPrime);
  json etas = json::array();
  for (double e : o.etaList) etas.push_back(mot::fmt_double(e));
  params["eta_list"] = etas;
  summary["manifest"] = manifest_json(command, {}, params);
  summary["runs"] = runs;
  write_file(dir / "bench.csv", csv.str());
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "wrote " << (dir / "bench.csv").string() << " ("
            << runs.size() << " runs)\n";
  return kExitOk;
}

struct BaryOpts {
  std::size_t side = 5;
  std::uint64_t seed = 1;
  std::size_t m = 3;
  double epsilon = 0.5;
  std::string solver = "greedy";
  std::string outDir;
  std::size_t pgmGrid = 0;  // 0: no PGM output
};

int cmd_bench_barycenter(const BaryOpts& o, const std::string& command) {
  const fs::path dir = out_dir(o.outDir);
  fs::create_directories(dir);

  std::vector<mot::SyntheticImage> imgs;
  const mot::MotInstance inst = image_instance(o.side, o.seed, o.m, imgs);
  std::vector<mot::PointList> locs;
  for (const auto& img : imgs) locs.push_back(img.locations);
  const mot::Vec lambda(o.m, 1.0 / static_cast<double>(o.m));

  mot::ApproxConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.solver = o.solver == "accel" ? mot::SolverKind::Accelerated
                                   : mot::SolverKind::Greedy;
  const mot::ApproxResult res = mot::approx_mot(inst, cfg);
  const mot::PointCloud cloud =
      mot::extract_barycenter(res.plan, locs, lambda);

  std::ostringstream csv;
  csv << "x,y,w\n";
  for (std::size_t i = 0; i < cloud.weights.size(); ++i)
    csv << mot::fmt_double(cloud.locations[i][0]) << ','
        << mot::fmt_double(cloud.locations[i][1]) << ','
        << mot::fmt_double(cloud.weights[i]) << "\n";
  write_file(dir / "barycenter.csv", csv.str());

  if (o.pgmGrid > 0) {
    const mot::Vec img = mot::rasterize(cloud, o.pgmGrid);
    double peak = 0.0;
    for (double v : img) peak = std::max(peak, v);
    std::ostringstream pgm;
    pgm << "P2\n" << o.pgmGrid << " " << o.pgmGrid << "\n255\n";
    for (std::size_t r = 0; r < o.pgmGrid; ++r) {
      for (std::size_t c = 0; c < o.pgmGrid; ++c)
        pgm << (c ? " " : "")
            << (peak > 0.0
                    ? static_cast<int>(std::lround(255.0 * img[r * o.pgmGrid + c] / peak))
                    : 0);
      pgm << "\n";
    }
    write_file(dir / "barycenter.pgm", pgm.str());
  }

  json params;
  params["side"] = o.side;
  params["seed"] = o.seed;
  params["epsilon"] = mot::fmt_double(o.epsilon);
  params["solver"] = o.solver;
  json bundle;
  bundle["manifest"] = manifest_json(command, {}, params);
  bundle["objective"] = mot::fmt_double(res.objective);
  bundle["atoms"] = cloud.weights.size();
  write_file(dir / "barycenter.json", bundle.dump(2) + "\n");
  std::cout << "wrote " << (dir / "barycenter.csv").string() << " ("
            << cloud.weights.size() << " atoms)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multimarginal optimal transport toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  SolveOpts so;
  auto* solve = app.add_subcommand("solve", "approximate a MOT instance");
  solve->add_option("--instance", so.instancePath, "instance JSON file")
      ->required();
  solve->add_option("--out-dir", so.outDir, "output directory");
  solve->add_option("--epsilon", so.epsilon, "objective tolerance");
  solve->add_option("--eta", so.eta, "regularization override");
  solve->add_option("--eps-prime", so.epsPrime, "residue target override");
  solve->add_option("--max-iter", so.maxIter, "iteration cap override");
  solve->add_option("--solver", so.solver, "greedy or accel")
      ->check(CLI::IsMember({"greedy", "accel"}));
  solve->add_option("--round-target", so.roundTarget, "original or smoothed")
      ->check(CLI::IsMember({"original", "smoothed"}));
  solve->add_flag("--oracle", so.oracle, "compare against the LP oracle");
  solve->add_flag("--write-plan", so.writePlan, "write the rounded plan");

  std::string oraclePath;
  auto* oracle = app.add_subcommand("oracle", "exact LP baseline");
  auto* oracleSolve = oracle->add_subcommand("solve", "solve the exact LP");
  oracleSolve->add_option("--instance", oraclePath, "instance JSON file")
      ->required();

  std::size_t tuN = 2, tuM = 3, tuMaxOrder = 0, tuMinOrder = 1;
  auto* tu = app.add_subcommand("tu", "total-unimodularity check");
  tu->add_option("--n", tuN, "axis size");
  tu->add_option("--m", tuM, "tensor order");
  tu->add_option("--max-order", tuMaxOrder, "submatrix order cap");
  tu->add_option("--min-order", tuMinOrder, "smallest submatrix order");

  BenchOpts bo;
  BaryOpts yo;
  auto* bench = app.add_subcommand("bench", "experiment protocols");
  auto* synth = bench->add_subcommand("synthetic", "synthetic-image runs");
  synth->add_option("--side", bo.side, "image side length");
  synth->add_option("--seeds", bo.seeds, "number of seeds");
  synth->add_option("--marginals", bo.m, "number of marginals");
  synth->add_option("--eta-list", bo.etaList, "regularization values");
  synth->add_option("--solver", bo.solver, "greedy, accel or both")
      ->check(CLI::IsMember({"greedy", "accel", "both"}));
  synth->add_option("--eps-prime", bo.epsPrime, "residue target");
  synth->add_option("--max-iter", bo.maxIter, "iteration cap");
  synth->add_option("--out-dir", bo.outDir, "output directory");
  auto* bary = bench->add_subcommand("barycenter", "free-support barycenter");
  bary->add_option("--side", yo.side, "image side length");
  bary->add_option("--seed", yo.seed, "seed");
  bary->add_option("--marginals", yo.m, "number of marginals");
  bary->add_option("--epsilon", yo.epsilon, "objective tolerance");
  bary->add_option("--solver", yo.solver, "greedy or accel")
      ->check(CLI::IsMember({"greedy", "accel"}));
  bary->add_option("--pgm", yo.pgmGrid, "also write a PGM on this grid");
  bary->add_option("--out-dir", yo.outDir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(so, command);
    if (*oracleSolve) return cmd_oracle(oraclePath);
    if (*tu) return cmd_tu(tuN, tuM, tuMaxOrder, tuMinOrder);
    if (*synth) return cmd_bench_synthetic(bo, command);
    if (*bary) return cmd_bench_barycenter(yo, command);
    std::cerr << "missing subcommand\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::length_error& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return kExitSizeCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    if (msg.find("did not reach") != std::string::npos ||
        msg.find("did not converge") != std::string::npos) {
      std::cerr << "non-convergence: " << msg << "\n";
      return kExitNoConverge;
    }
    std::cerr << "error: " << msg << "\n";
    return kExitParse;
  }
}
