#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ytlab/parallel.hpp"

namespace ytlab::harness {

struct ExperimentConfig {
  std::string experiment;
  std::size_t n = 0;
  /// Alphabet size for word experiments, path count for Brownian ones, GUE
  /// dimension for gue0, chain length for dk-limit.
  std::optional<std::size_t> m;
  std::optional<nlohmann::json> schedule;
  std::optional<nlohmann::json> dist;
  std::size_t samples = 1000;
  std::size_t rows = 0;  ///< 0 selects the experiment default
  std::size_t m_ref = 400;
  std::size_t ref_samples = 10000;
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "ytlab-out";
  std::optional<std::filesystem::path> cache_dir;
  std::string format = "csv";
  bool svg = false;
  std::optional<double> threshold;
  bool grid_correction = true;
  Exec exec = Exec::parallel;
};

/// One column of raw values, identified by (statistic, k), in sample order.
struct Series {
  std::string statistic;
  std::size_t k = 1;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> values;
};

using SeriesKey = std::pair<std::string, std::size_t>;
using SeriesMap = std::map<SeriesKey, Series>;

/// A requested two-sample comparison; the reference is series (reference, k).
struct Comparison {
  std::string statistic;
  std::string reference;
  std::size_t k = 1;
  double threshold = 0.0;
};

/// What a sampler hands back before summarizing.
struct ExperimentData {
  nlohmann::json params;
  std::vector<Series> series;
  std::vector<Comparison> comparisons;
};

struct RunResult {
  nlohmann::json summary;
  std::filesystem::path summary_path;
  std::filesystem::path csv_path;
  bool passed = true;
};

struct ExperimentInfo {
  std::string name;
  std::string required;
  std::string optional;
  std::string statement;
  std::optional<double> default_threshold;
};

std::vector<ExperimentInfo> list_experiments();
nlohmann::json catalog_json();

/// Validates the configuration (growth conditions included) before any
/// sampling, draws the samples, writes <out>/raw.csv and <out>/summary.json.
/// Throws InvalidParameter / UnsupportedRule for refused configurations.
RunResult run_experiment(const ExperimentConfig& config);

/// Sampling stage only (exposed for tests and benchmarks).
ExperimentData sample_experiment(const ExperimentConfig& config);

/// KS entries, quantile table, per-series moments and experiment-specific
/// derived metrics, all recomputable from the raw series and params.
nlohmann::json build_summary(const std::string& experiment, const nlohmann::json& params, std::uint64_t seed,
                             const SeriesMap& series, const std::vector<Comparison>& comparisons);

/// Experiment-specific metrics derived from raw series (empty object if none).
nlohmann::json derived_metrics(const std::string& experiment, const nlohmann::json& params, const SeriesMap& series);

/// Raw CSV: experiment,n,m,k,sample_id,statistic,value (shortest round-trip).
std::string raw_csv(const std::string& experiment, const std::vector<Series>& series);
SeriesMap parse_raw_csv(const std::string& text, std::string* experiment = nullptr);

/// Recomputes the summary from the raw CSV and compares every field except
/// wall_seconds to 1e-12.  Throws InvalidInput for unreadable files and
/// IntegrityError naming the first mismatching field.
nlohmann::json verify(const std::filesystem::path& summary_path, const std::filesystem::path& raw_csv_path);

/// Histogram overlay of two samples as a standalone SVG document.
std::string histogram_svg(const std::string& title, const std::vector<double>& a, const std::string& label_a,
                          const std::vector<double>& b, const std::string& label_b);

/// Quantile levels reported for every series.
const std::vector<double>& quantile_levels();

}  // namespace ytlab::harness
