#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mesp/amesp.hpp"
#include "mesp/io.hpp"
#include "mesp/oracle.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string input;
  std::string algo = "fw";
  int s = 1;
  double alpha = 0.0;
  double theta = 1e-6;
  int trials = 1000;
  std::uint64_t seed = 0;
  bool restrictSupport = true;
  double rankTol = 0.0;
  std::string format = "json";
  std::string output;
  bool withOracle = false;
  std::string inputFormat = "auto";
  double cap = mesp::kDefaultEnumerationCap;
};

int threadCount() {
  const char* env = std::getenv("MESP_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<int> shiftIndices(const std::vector<int>& S) {
  std::vector<int> out(S.size());
  for (size_t i = 0; i < S.size(); ++i) out[i] = S[i] + 1;
  return out;
}

void flattenCsv(const json& j, const std::string& prefix, std::ostream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flattenCsv(*it, key, out);
    } else if (it->is_array()) {
      out << key << ",\"";
      for (size_t i = 0; i < it->size(); ++i) {
        if (i > 0) out << " ";
        out << (*it)[i];
      }
      out << "\"\n";
    } else {
      out << key << "," << *it << "\n";
    }
  }
}

int runSolve(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  json report;
  report["command"] = "solve";
  report["input"] = opt.input;
  report["algo"] = opt.algo;

  const mesp::Matrix raw = mesp::readMatrixFile(opt.input, opt.inputFormat);
  const mesp::SymMatrix C = mesp::toSymmetricChecked(raw);
  const double rankTol =
      opt.rankTol > 0.0 ? opt.rankTol : mesp::defaultRankTolerance(C.order());
  const mesp::CovarianceInstance inst = mesp::factorize(C, rankTol);

  if (opt.s < 1 || opt.s > inst.d) {
    throw mesp::MespError(mesp::ErrorCode::InfeasibleArgs,
                          "s must lie in [1, rank of the input]");
  }
  const int s = opt.s;
  const int threads = threadCount();

  report["n"] = inst.n;
  report["d"] = inst.d;
  report["s"] = s;
  report["seed"] = opt.seed;
  report["alpha"] = opt.alpha;
  report["theta"] = opt.theta;
  report["trials"] = opt.trials;
  report["restrictSupport"] = opt.restrictSupport;

  json results;
  json timing;
  const bool aSide = opt.algo.rfind("amesp", 0) == 0;

  if (opt.algo == "fw" || opt.algo == "sample" || opt.algo == "dsample") {
    const auto tFw = std::chrono::steady_clock::now();
    mesp::FWResult fw = mesp::solvePC(inst, s, opt.alpha);
    timing["fwSec"] = seconds(tFw);
    results["zLD"] = fw.certificate.boundValue;
    results["primal"] = fw.solution.value;
    results["supportSize"] = static_cast<int>(fw.solution.support.size());
    results["iterations"] = static_cast<int>(fw.trace.iters.size());
    results["terminalGap"] = fw.trace.terminalGap;

    const int nEff = opt.restrictSupport
                         ? static_cast<int>(fw.solution.support.size())
                         : inst.n;
    const mesp::MespBounds mb = mesp::mespBounds(std::max(nEff, s), s);
    results["samplingGapBound"] = mb.sampling + fw.trace.terminalGap;

    if (opt.algo == "sample") {
      const auto tS = std::chrono::steady_clock::now();
      mesp::SampledSubset best = mesp::bestOfSampling(
          inst, fw.solution.x, s, opt.trials, opt.seed, threads);
      timing["sampleSec"] = seconds(tS);
      results["LB_S"] = best.logObjective;
      results["S"] = shiftIndices(best.S);
    } else if (opt.algo == "dsample") {
      const auto tD = std::chrono::steady_clock::now();
      mesp::SampledSubset der = mesp::derandomize(inst, fw.solution.x, s);
      timing["dsampleSec"] = seconds(tD);
      results["LB_D"] = der.logObjective;
      results["S"] = shiftIndices(der.S);
    }
  } else if (opt.algo == "local") {
    const auto tL = std::chrono::steady_clock::now();
    mesp::SearchState st = mesp::greedyInit(inst, s);
    auto [finalState, trace] = mesp::localSearch(inst, st, opt.theta);
    mesp::DualCertificate cert =
        mesp::dualCertificateFromLocal(inst, finalState, opt.theta);
    timing["localSec"] = seconds(tL);
    results["LB_L"] = finalState.logDet;
    results["S"] = shiftIndices(finalState.S);
    results["swaps"] = finalState.swapCount;
    results["passes"] = trace.passes;
    results["zLD"] = cert.boundValue;
    results["certBound"] = cert.boundValue;
  } else if (opt.algo == "oracle") {
    const auto tO = std::chrono::steady_clock::now();
    mesp::ExactResult ex = mesp::exactMESP(inst, s, opt.cap);
    timing["oracleSec"] = seconds(tO);
    results["zStar"] = ex.value;
    results["S"] = shiftIndices(ex.S);
  } else if (opt.algo == "amesp-fw" || opt.algo == "amesp-volume") {
    const auto tA = std::chrono::steady_clock::now();
    mesp::APCResult apc = mesp::solveAPC(inst, s, opt.alpha);
    timing["amespFwSec"] = seconds(tA);
    results["zLD_A"] = apc.certificate.boundValue;
    results["primal"] = apc.solution.value;
    results["iterations"] = static_cast<int>(apc.trace.iters.size());
    results["terminalGap"] = apc.trace.terminalGap;
    if (opt.algo == "amesp-volume") {
      const auto tV = std::chrono::steady_clock::now();
      mesp::SampledSubset best = mesp::bestOfVolumeSampling(
          inst, apc.solution.x, s, opt.trials, opt.seed, threads);
      timing["volumeSec"] = seconds(tV);
      results["UB_A"] = mesp::invTraceSubmatrix(inst.C, best.S);
      results["S"] = shiftIndices(best.S);
      results["volumeRatio"] = mesp::amespRatios(inst.n, s, 1.0, 1.0).volume;
    }
  } else if (opt.algo == "amesp-local") {
    const auto tA = std::chrono::steady_clock::now();
    mesp::ASearchResult res = mesp::aLocalSearch(inst, s, nullptr, opt.theta);
    timing["amespLocalSec"] = seconds(tA);
    results["value"] = res.state.invTrace;
    results["S"] = shiftIndices(res.state.S);
    results["swaps"] = res.state.swapCount;
    results["certBound"] = res.certificate.boundValue;
  } else {
    throw mesp::MespError(mesp::ErrorCode::InfeasibleArgs,
                          "unknown algorithm '" + opt.algo + "'");
  }

  if (!aSide) {
    const mesp::MespBounds mb = mesp::mespBounds(inst.n, s);
    json jb;
    jb["sampling"] = mb.sampling;
    jb["nikolov"] = mb.nikolov;
    jb["localSearch"] = mb.localSearch;
    jb["greedy"] = mb.greedy;
    report["approximationBounds"] = jb;
  }

  if (opt.withOracle) {
    const auto tO = std::chrono::steady_clock::now();
    json jo;
    if (aSide) {
      mesp::ExactResult ex = mesp::exactAMESP(inst, s, opt.cap);
      jo["zStar_A"] = ex.value;
      jo["Sstar"] = shiftIndices(ex.S);
    } else {
      mesp::ExactResult ex = mesp::exactMESP(inst, s, opt.cap);
      jo["zStar"] = ex.value;
      jo["Sstar"] = shiftIndices(ex.S);
      if (results.contains("zLD") && std::abs(ex.value) > 1e-12) {
        jo["gapPercent"] =
            100.0 * (results["zLD"].get<double>() - ex.value) /
            std::abs(ex.value);
      }
    }
    timing["oracleSec"] = seconds(tO);
    report["oracle"] = jo;
  }

  report["results"] = results;
  timing["totalSec"] = seconds(t0);
  report["timing"] = timing;

  std::string text;
  if (opt.format == "json") {
    text = report.dump(2) + "\n";
  } else if (opt.format == "csv") {
    std::ostringstream oss;
    flattenCsv(report, "", oss);
    text = oss.str();
  } else {
    throw mesp::MespError(mesp::ErrorCode::InfeasibleArgs,
                          "unknown output format '" + opt.format + "'");
  }
  if (opt.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.output);
    if (!out) {
      throw mesp::MespError(mesp::ErrorCode::ParseError,
                            opt.output + ": cannot open for writing");
    }
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-entropy subset selection toolkit"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("input", opt.input, "Covariance matrix file")->required();
  solve->add_option("--algo", opt.algo,
                    "fw, sample, dsample, local, oracle, amesp-fw, "
                    "amesp-volume, amesp-local");
  solve->add_option("--s", opt.s, "Subset size")->required();
  solve->add_option("--alpha", opt.alpha, "Gap target (0 selects a default)");
  solve->add_option("--theta", opt.theta, "Swap improvement threshold");
  solve->add_option("--trials", opt.trials, "Sampling repetitions");
  solve->add_option("--seed", opt.seed, "Master seed");
  solve->add_flag("--restrict-support,!--no-restrict-support",
                  opt.restrictSupport,
                  "Use the fractional support size in the sampling bound");
  solve->add_option("--rank-tol", opt.rankTol, "Relative rank tolerance");
  solve->add_option("--format", opt.format, "json or csv");
  solve->add_option("--output", opt.output, "Write the report to a file");
  solve->add_flag("--with-oracle", opt.withOracle,
                  "Also compute the exact optimum");
  solve->add_option("--input-format", opt.inputFormat, "auto, dense, or mm");
  solve->add_option("--oracle-cap", opt.cap, "Enumeration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return runSolve(opt);
  } catch (const mesp::MespError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case mesp::ErrorCode::ParseError:
      case mesp::ErrorCode::InfeasibleArgs:
        return 2;
      case mesp::ErrorCode::TooLarge:
        return 3;
      default:
        return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
