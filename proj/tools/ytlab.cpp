// ytlab: run, list and verify Monte Carlo experiments.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 integrity
// failure, 4 a KS distance above its threshold.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "ytlab/error.hpp"
#include "ytlab/harness.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIntegrity = 3;
constexpr int kExitThreshold = 4;

/// Accepts inline JSON or a path to a JSON file.
nlohmann::json json_argument(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text.front() != '{' && text.front() != '[') {
    std::ifstream in(text);
    if (!in) throw ytlab::InvalidInput(std::string("cannot read ") + what + " file " + text);
    std::ostringstream s;
    s << in.rdbuf();
    body = s.str();
  }
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ytlab::InvalidInput(std::string("bad ") + what + " JSON: " + e.what());
  }
}

void print_ks_table(const nlohmann::json& summary) {
  std::cout << "statistic,reference,k,D,p,n1,n2,threshold,passed\n";
  for (const auto& k : summary.at("ks")) {
    std::cout << k.at("statistic").get<std::string>() << ',' << k.at("reference").get<std::string>() << ','
              << k.at("k") << ',' << k.at("D") << ',' << k.at("p") << ',' << k.at("n1") << ',' << k.at("n2") << ','
              << k.at("threshold") << ',' << (k.at("passed").get<bool>() ? "true" : "false") << '\n';
  }
  const auto& derived = summary.at("derived");
  for (const auto& [key, value] : derived.items()) std::cout << "# " << key << " = " << value << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo lab for RSK shapes of random words, GUE spectra and Brownian percolation"};
  app.require_subcommand(1);

  ytlab::harness::ExperimentConfig cfg;
  std::size_t m = 0;
  std::string schedule_text, dist_text, correction = "on";
  double threshold = 0.0;
  int threads = 0;
  bool serial = false;
  std::string cache_dir;

  auto* run = app.add_subcommand("run", "Run one experiment and write raw.csv and summary.json");
  run->add_option("experiment", cfg.experiment, "Experiment name (see `ytlab list`)")->required();
  run->add_option("--n", cfg.n, "Word length");
  auto* m_opt = run->add_option("--m", m, "Alphabet size / path count / GUE dimension / chain length");
  auto* sched_opt = run->add_option("--schedule", schedule_text, "Growth schedule as JSON text or file");
  auto* dist_opt = run->add_option("--dist", dist_text, "Letter law as JSON text or file");
  m_opt->excludes(sched_opt);
  run->add_option("--samples", cfg.samples, "Number of samples N")->check(CLI::PositiveNumber);
  run->add_option("--r", cfg.rows, "Number of rows r (theorem3)");
  run->add_option("--mref", cfg.m_ref, "GUE dimension of the reference law");
  run->add_option("--ref-samples", cfg.ref_samples, "Reference sample count");
  run->add_option("--steps", cfg.steps, "Grid steps per unit time");
  run->add_option("--seed", cfg.seed, "Base seed (u64)");
  run->add_option("--out", cfg.out_dir, "Output directory");
  run->add_option("--cache-dir", cache_dir, "Reference cache directory (default <out>/reference-cache)");
  run->add_option("--format", cfg.format, "Report printed to stdout")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--svg", cfg.svg, "Write SVG histograms next to the CSV");
  auto* thr_opt = run->add_option("--threshold", threshold, "Override the KS threshold");
  run->add_option("--grid-correction", correction, "Continuity correction of grid suprema")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--threads", threads, "OpenMP worker threads (0 = runtime default)");
  run->add_flag("--serial", serial, "Use the serial reference kernels");

  app.add_subcommand("list", "List experiments and the statements they check");

  std::string summary_path, csv_path;
  auto* ver = app.add_subcommand("verify", "Recompute a summary from its raw CSV");
  ver->add_option("summary", summary_path, "summary.json")->required();
  ver->add_option("raw", csv_path, "raw.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& e : ytlab::harness::list_experiments()) {
        std::cout << e.name << "\n  requires: " << e.required << "\n  options:  " << e.optional
                  << "\n  checks:   " << e.statement << '\n';
        if (e.default_threshold) std::cout << "  KS threshold: " << *e.default_threshold << '\n';
      }
      return 0;
    }

    if (app.got_subcommand("verify")) {
      const auto fresh = ytlab::harness::verify(summary_path, csv_path);
      std::cout << "verified " << summary_path << " against " << csv_path << " ("
                << fresh.at("ks").size() << " KS entries)\n";
      return 0;
    }

    if (*m_opt) cfg.m = m;
    if (*sched_opt) cfg.schedule = json_argument(schedule_text, "schedule");
    if (*dist_opt) cfg.dist = json_argument(dist_text, "dist");
    if (*thr_opt) cfg.threshold = threshold;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    cfg.grid_correction = correction == "on";
    cfg.exec = serial ? ytlab::Exec::serial : ytlab::Exec::parallel;
    if (threads > 0) omp_set_num_threads(threads);

    const auto result = ytlab::harness::run_experiment(cfg);
    if (cfg.format == "json") {
      std::cout << result.summary.dump(2) << '\n';
    } else {
      print_ks_table(result.summary);
    }
    std::cerr << "wrote " << result.csv_path.string() << " and " << result.summary_path.string() << '\n';
    return result.passed ? 0 : kExitThreshold;
  } catch (const ytlab::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const ytlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
