// Acceptance criteria AC-1 .. AC-14, one PASS/FAIL line each.
//
//   ytlab_acceptance [--only AC-n] [--workdir DIR]
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ytlab/brownian.hpp"
#include "ytlab/harness.hpp"
#include "ytlab/lpp.hpp"
#include "ytlab/model.hpp"
#include "ytlab/randmat.hpp"
#include "ytlab/random.hpp"
#include "ytlab/rsk.hpp"
#include "ytlab/stats.hpp"

using namespace ytlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::filesystem::path g_workdir = std::filesystem::temp_directory_path() / "ytlab_acceptance";
constexpr std::uint64_t kSeed = 20240601;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

harness::ExperimentConfig config(const std::string& experiment, const std::string& tag) {
  harness::ExperimentConfig c;
  c.experiment = experiment;
  c.seed = kSeed;
  c.out_dir = g_workdir / tag;
  c.cache_dir = g_workdir / "reference-cache";
  c.m_ref = 400;
  c.ref_samples = 10000;
  return c;
}

/// Runs through the harness, re-verifies the files, and reports every KS line.
Outcome run_ks(const harness::ExperimentConfig& c, double runtime_limit = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = harness::run_experiment(c);
  const double t = seconds_since(t0);
  harness::verify(r.summary_path, r.csv_path);
  Outcome o{r.passed, ""};
  for (const auto& ks : r.summary.at("ks")) {
    o.detail += ks.at("statistic").get<std::string>() + "[k=" + std::to_string(ks.at("k").get<int>()) +
                "] vs " + ks.at("reference").get<std::string>() + ": D=" + fmt(ks.at("D").get<double>()) +
                " (<= " + fmt(ks.at("threshold").get<double>()) + ", n1=" + std::to_string(ks.at("n1").get<int>()) +
                ", n2=" + std::to_string(ks.at("n2").get<int>()) + "); ";
  }
  o.detail += "runtime " + fmt(t, 3) + " s";
  if (runtime_limit > 0.0 && t > runtime_limit) {
    o.pass = false;
    o.detail += " exceeds " + fmt(runtime_limit, 3) + " s";
  }
  return o;
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t words = 0, mismatches = 0;
  auto check = [&](const model::Word& w) {
    ++words;
    const auto shape = rsk::rsk_shape(w);
    const auto occ = lpp::WeightMatrix::from_word(w, w.m);
    for (std::size_t k = 1; k <= w.m; ++k) {
      const auto a = rsk::vk_from_shape(shape, k);
      const auto b = rsk::greene_oracle(w, w.m, k);
      const auto c = lpp::lppk(occ, k);
      if (a != b || static_cast<double>(a) != c) ++mismatches;
    }
  };
  std::vector<std::uint32_t> letters(5, 0);
  for (;;) {
    check({letters, 3});
    std::size_t i = 0;
    while (i < 5 && ++letters[i] == 3) letters[i++] = 0;
    if (i == 5) break;
  }
  RandomStream rng(kSeed, 1);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 1 + rng.below(4);
    const std::size_t n = rng.below(9);
    check(model::sample_word(model::uniform_distribution(m), n, rng));
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 30.0, std::to_string(words) + " words, " + std::to_string(mismatches) +
                                           " mismatches, runtime " + fmt(t, 3) + " s (< 30 s)"};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(kSeed, 2);
  std::size_t mismatches = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 1 + rng.below(26);
    const auto w = model::sample_word(model::uniform_distribution(m), rng.below(201), rng);
    const auto a = lpp::lpp1(lpp::WeightMatrix::from_word(w, m));
    const auto b = rsk::lis(w);
    const auto c = rsk::rsk_shape(w).row(0);
    if (a != static_cast<double>(b) || b != c) ++mismatches;
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 30.0,
          "10000 words, " + std::to_string(mismatches) + " mismatches, runtime " + fmt(t, 3) + " s (< 30 s)"};
}

Outcome ac3() {
  auto c = config("gue0", "AC-3");
  c.m = 5;
  c.samples = 50000;
  c.threshold = 0.015;
  return run_ks(c, 60.0);
}

Outcome ac4() {
  auto c = config("corollary4", "AC-4");
  c.n = 100000;
  c.m = 17;
  c.samples = 1000;
  c.threshold = 0.12;
  return run_ks(c, 180.0);
}

Outcome ac5() {
  auto c = config("theorem3", "AC-5");
  c.n = 100000;
  c.m = 17;
  c.rows = 2;
  c.samples = 1000;
  c.threshold = 0.12;
  auto o = run_ks(c, 180.0);
  const auto summary = nlohmann::json::parse(std::ifstream(c.out_dir / "summary.json"));
  const auto& d = summary.at("derived");
  const double ref_frac = d.at("ordering_fraction_reference").get<double>();
  const double word_frac = d.at("ordering_fraction_samples").get<double>();
  o.detail += "; increment ordering: reference " + fmt(ref_frac) + " (>= 0.95), words " + fmt(word_frac);
  o.pass = o.pass && ref_frac >= 0.95;
  return o;
}

Outcome ac6() {
  auto c = config("theorem6", "AC-6");
  c.n = 100000;
  c.samples = 1000;
  c.threshold = 0.15;
  auto o = run_ks(c, 180.0);
  const auto summary = nlohmann::json::parse(std::ifstream(c.out_dir / "summary.json"));
  const auto& p = summary.at("params");
  const auto k = p.at("k").get<std::size_t>();
  const auto m = p.at("m").get<std::size_t>();
  const double pmax = p.at("p_max").get<double>();
  const double p2 = p.at("p_2nd").get<double>();
  const double ratio = summary.at("derived").at("condition2_ratio").get<double>();
  const bool instance = k == 32 && m - k == 1000 && std::fabs(pmax - 0.03) < 1e-12 && std::fabs(p2 - 4e-5) < 1e-15;
  o.detail += "; instance k=" + std::to_string(k) + ", tail letters=" + std::to_string(m - k) + ", p_max=" +
              fmt(pmax, 6) + ", p_2nd=" + fmt(p2, 6) + ", condition ratio " + fmt(ratio) + " (margin >= 10x)";
  o.pass = o.pass && instance && ratio <= 0.1;
  return o;
}

Outcome ac7() {
  auto c = config("scaling1", "AC-7");
  c.m = 4;
  c.samples = 4000;
  c.steps = 1000;
  c.threshold = 0.05;
  return run_ks(c);
}

Outcome ac8() {
  const auto a = randmat::tw_reference(200, 10000, derive_seed(kSeed, "ac8-200"));
  const auto b = randmat::tw_reference(400, 10000, derive_seed(kSeed, "ac8-400"));
  const auto ks = stats::ks_two_sample(stats::EmpiricalDistribution(a.values), stats::EmpiricalDistribution(b.values));
  return {ks.D <= 0.03, "tw(m_ref=200) vs tw(m_ref=400), N=10000 each: D=" + fmt(ks.D) + " (<= 0.03)"};
}

Outcome ac9() {
  auto c = config("dk-limit", "AC-9");
  c.m = 50;
  c.samples = 4000;
  c.steps = 1000;
  c.threshold = 0.10;
  return run_ks(c);
}

Outcome ac10() {
  bool ok = true;
  std::string detail;
  for (double m : {2.0, 10.0, 100.0, 1e4}) {
    const double p = 1.0 / m;
    const double l = stats::lambda_bernoulli(p, 1e-9);
    const double sigma = std::sqrt(p * (1.0 - p));
    const double scaled_gap =
        std::fabs(stats::lambda_bernoulli_standardized(p, 1e-12) - sigma * stats::lambda_bernoulli(p, 1e-12));
    ok = ok && l >= 0.5 && l <= 2.0 && scaled_gap <= 1e-9;
    detail += "m=" + fmt(m) + ": lambda=" + fmt(l, 10) + ", |lambda_std - sigma*lambda|=" + fmt(scaled_gap, 3) + "; ";
  }
  return {ok, detail};
}

Outcome ac11() {
  double worst = 0.0;
  for (double p : {0.3, 0.5, 0.7}) {
    for (std::size_t ell = 1; ell <= 12; ++ell) {
      double exact = 0.0;
      for (std::uint64_t mask = 0; mask < (1ull << ell); ++mask) {
        double prob = 1.0;
        int s = 0, best = 0;
        for (std::size_t i = 0; i < ell; ++i) {
          const bool up = (mask >> i) & 1u;
          prob *= up ? p : 1.0 - p;
          s += up ? 1 : -1;
          best = std::max(best, s);
        }
        exact += prob * best;
      }
      worst = std::max(worst, std::fabs(lpp::walk_plus_expectation_fixed(p, ell) - exact));
    }
  }
  bool bound = true;
  std::string detail = "max |recursion - 2^l enumeration| = " + fmt(worst, 3) + " (<= 1e-12); gamma_n/(n p_2nd):";
  const lpp::ErrorControlParams grid[] = {{0.01, 1e-4, 500}, {0.3, 0.1, 1000}, {0.05, 0.049, 20000}, {0.6, 0.3, 300}};
  for (const auto& g : grid) {
    const double gamma = lpp::walk_plus_expectation(g);
    const double np2 = static_cast<double>(g.n) * g.p_2nd;
    bound = bound && gamma <= np2;
    detail += " " + fmt(gamma / np2);
  }
  return {worst <= 1e-12 && bound, detail};
}

Outcome ac12() {
  const auto dist = model::equal_tail_distribution(50, 0.01, 1e-4);
  std::vector<double> ratios;
  std::string detail = "m=" + std::to_string(dist.m()) + ";";
  bool finite_positive = true;
  for (std::size_t n : {500, 1000, 2000, 4000}) {
    const auto est = lpp::gap_mc(dist, n, 2000, derive_seed(kSeed, "ac12-" + std::to_string(n)));
    const double np2 = static_cast<double>(n) * *dist.p_2nd();
    const double r = est.mean / np2;
    finite_positive = finite_positive && std::isfinite(r) && r > 0.0;
    ratios.push_back(r);
    detail += " n=" + std::to_string(n) + ": E[V1-V1']=" + fmt(est.mean) + "+-" + fmt(est.std_error, 2) +
              ", ratio=" + fmt(r) + ";";
  }
  // stability: each doubling of n moves the ratio by at most 10%
  double worst_step = 0.0;
  for (std::size_t i = 1; i < ratios.size(); ++i) worst_step = std::max(worst_step, std::fabs(ratios[i] / ratios[i - 1] - 1.0));
  detail += " worst change per doubling " + fmt(worst_step) + " (<= 0.10)";
  return {finite_positive && worst_step <= 0.10, detail};
}

Outcome ac13() {
  auto c = config("lim2-k1", "AC-13");
  c.n = 100000;
  c.samples = 2000;
  c.threshold = 0.05;
  return run_ks(c);
}

Outcome ac14() {
  auto c = config("spectrum-identity", "AC-14");
  c.m = 3;
  c.samples = 5000;
  c.steps = 2000;
  c.threshold = 0.05;
  return run_ks(c);
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else if (a == "--workdir" && i + 1 < argc) {
      g_workdir = argv[++i];
    } else {
      std::cerr << "usage: ytlab_acceptance [--only AC-n] [--workdir DIR]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC-1", ac1},   {"AC-2", ac2},   {"AC-3", ac3},   {"AC-4", ac4},   {"AC-5", ac5},
      {"AC-6", ac6},   {"AC-7", ac7},   {"AC-8", ac8},   {"AC-9", ac9},   {"AC-10", ac10},
      {"AC-11", ac11}, {"AC-12", ac12}, {"AC-13", ac13}, {"AC-14", ac14},
  };

  int failures = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && only != name) continue;
    ++ran;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::cerr << "no criterion named " << only << '\n';
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
