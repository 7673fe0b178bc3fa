#include "ytlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ytlab/error.hpp"
#include "ytlab/stats.hpp"

namespace ytlab::harness {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, static_cast<std::size_t>(res.ptr - buf)};
}

std::string series_name(const std::string& statistic, std::size_t k) {
  return statistic + ":" + std::to_string(k);
}

const Series& find_series(const SeriesMap& series, const std::string& statistic, std::size_t k) {
  const auto it = series.find({statistic, k});
  if (it == series.end()) throw InvalidInput("raw data has no series " + series_name(statistic, k));
  return it->second;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

void compare_json(const nlohmann::json& stored, const nlohmann::json& fresh, const std::string& path) {
  if (fresh.is_number()) {
    if (!stored.is_number()) throw IntegrityError(path + ": stored value is not a number");
    const double a = stored.get<double>();
    const double b = fresh.get<double>();
    if (std::isnan(a) && std::isnan(b)) return;
    if (!(std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}))) {
      throw IntegrityError(path + ": stored " + shortest(a) + ", recomputed " + shortest(b));
    }
    return;
  }
  if (fresh.is_object()) {
    if (!stored.is_object()) throw IntegrityError(path + ": stored value is not an object");
    for (const auto& [key, value] : fresh.items()) {
      const std::string sub = path.empty() ? key : path + "." + key;
      if (!stored.contains(key)) throw IntegrityError(sub + ": missing from stored summary");
      compare_json(stored.at(key), value, sub);
    }
    return;
  }
  if (fresh.is_array()) {
    if (!stored.is_array() || stored.size() != fresh.size()) throw IntegrityError(path + ": array length differs");
    for (std::size_t i = 0; i < fresh.size(); ++i) compare_json(stored[i], fresh[i], path + "[" + std::to_string(i) + "]");
    return;
  }
  if (stored != fresh) throw IntegrityError(path + ": stored " + stored.dump() + ", recomputed " + fresh.dump());
}

}  // namespace

const std::vector<double>& quantile_levels() {
  static const std::vector<double> levels{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  return levels;
}

std::vector<ExperimentInfo> list_experiments() {
  return {
      {"corollary4", "--n, --m or --schedule (uniform letters)", "--samples --mref --ref-samples",
       "Uniform letters, m = o(n^{3/10} (log n)^{-3/5}): (V_1 - n/m - 2 sqrt(n)) / (sqrt(n) m^{-2/3}) converges to "
       "the Tracy-Widom law of the largest GUE eigenvalue",
       0.12},
      {"theorem3", "--n, --m or --schedule (uniform letters)", "--r --samples --mref --ref-samples",
       "Uniform letters, same growth condition: ((V_k - k n/m - 2 k sqrt(n)) / (sqrt(n) m^{-2/3}))_{k<=r} converges "
       "to the limit F_r of the rescaled partial sums of the top r GUE eigenvalues",
       0.12},
      {"theorem6", "--n, --schedule with exponent rules for k, p_max, p_2nd", "--samples --mref --ref-samples",
       "k most probable letters with k -> infinity, k = o(n^{3/10} (log n)^{-3/5}) and "
       "(p_2nd)^2 n^{11/10} (log n)^{-1/5} = o(p_max): (V_1 - p_max n - 2 sqrt(k p_max n)) k^{2/3} / "
       "sqrt(k p_max n) converges to Tracy-Widom",
       0.15},
      {"gue0", "--m", "--samples",
       "GUE spectrum equals in law the traceless GUE spectrum shifted by an independent N(0, 1/m) multiple of "
       "(1, ..., 1); compared on the top eigenvalue",
       0.015},
      {"scaling1", "--m", "--samples --steps",
       "Brownian scaling of directed percolation: L_1(s, m) has the law of sqrt(s) L_1(1, m); checked at s = 4",
       0.05},
      {"dk-limit", "--m (chain length k)", "--samples --steps --mref --ref-samples",
       "k^{1/6} (D_k - 2 sqrt(k)) converges to Tracy-Widom as k -> infinity", 0.10},
      {"lim2-k1", "--n, --dist (default: p_max = 0.3, seven letters at 0.1)", "--samples --steps --ref-samples",
       "Fixed k: (V_1 - p_max n) / sqrt(p_max n) converges to (sqrt(1 - k p_max) - 1) Z_k + D_k with shared "
       "Brownian paths; for k = 1 this is sqrt(1 - p_max) B(1)",
       0.05},
      {"lemma7-gap", "--n, --dist (default: k = 50, p_max = 0.01, equal tail at p_2nd = 1e-4)", "--samples",
       "Error control for non-uniform letters: E[V_1 - V_1'] against gamma_n = E[(max_k S_k)^+] of the "
       "+-1 walk with up-probability p_2nd / (p_max + p_2nd) run for Binomial(n, p_max + p_2nd) steps",
       std::nullopt},
      {"spectrum-identity", "--m", "--samples --steps --ref-samples",
       "sqrt((m-1)/m) times the successive differences of (L_k(1, m))_{k<=m} over the exchangeable bundle with "
       "correlation -1/(m-1) equals the traceless GUE spectrum in law; compared on the first coordinate",
       0.05},
  };
}

nlohmann::json catalog_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : list_experiments()) {
    nlohmann::json j{{"name", e.name}, {"required", e.required}, {"optional", e.optional}, {"statement", e.statement}};
    j["default_threshold"] = e.default_threshold ? nlohmann::json(*e.default_threshold) : nlohmann::json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

std::string raw_csv(const std::string& experiment, const std::vector<Series>& series) {
  std::string out = "experiment,n,m,k,sample_id,statistic,value\n";
  for (const auto& s : series) {
    const std::string prefix =
        experiment + "," + std::to_string(s.n) + "," + std::to_string(s.m) + "," + std::to_string(s.k) + ",";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      out += prefix;
      out += std::to_string(i);
      out += ',';
      out += s.statistic;
      out += ',';
      out += shortest(s.values[i]);
      out += '\n';
    }
  }
  return out;
}

SeriesMap parse_raw_csv(const std::string& text, std::string* experiment) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "experiment,n,m,k,sample_id,statistic,value") {
    throw InvalidInput("raw CSV header mismatch");
  }
  SeriesMap out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (f.size() != 7) throw InvalidInput("raw CSV line " + std::to_string(lineno) + ": expected 7 fields");
    auto to_size = [&](std::string_view s) {
      std::size_t v = 0;
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw InvalidInput("raw CSV line " + std::to_string(lineno) + ": bad integer");
      }
      return v;
    };
    double value = 0.0;
    const auto r = std::from_chars(f[6].data(), f[6].data() + f[6].size(), value);
    if (r.ec != std::errc{} || r.ptr != f[6].data() + f[6].size()) {
      throw InvalidInput("raw CSV line " + std::to_string(lineno) + ": bad value");
    }
    if (experiment) *experiment = std::string(f[0]);
    const std::size_t k = to_size(f[3]);
    const std::size_t id = to_size(f[4]);
    auto& s = out[{std::string(f[5]), k}];
    if (s.values.empty()) {
      s.statistic = std::string(f[5]);
      s.k = k;
      s.n = to_size(f[1]);
      s.m = to_size(f[2]);
    }
    if (id != s.values.size()) throw InvalidInput("raw CSV line " + std::to_string(lineno) + ": sample ids out of order");
    s.values.push_back(value);
  }
  return out;
}

nlohmann::json build_summary(const std::string& experiment, const nlohmann::json& params, std::uint64_t seed,
                             const SeriesMap& series, const std::vector<Comparison>& comparisons) {
  nlohmann::json summary;
  summary["experiment"] = experiment;
  summary["params"] = params;
  summary["seed"] = seed;

  bool passed = true;
  summary["ks"] = nlohmann::json::array();
  for (const auto& c : comparisons) {
    const stats::EmpiricalDistribution a(find_series(series, c.statistic, c.k).values);
    const stats::EmpiricalDistribution b(find_series(series, c.reference, c.k).values);
    const auto ks = stats::ks_two_sample(a, b);
    const bool ok = ks.D <= c.threshold;
    passed = passed && ok;
    summary["ks"].push_back({{"statistic", c.statistic},
                             {"reference", c.reference},
                             {"k", c.k},
                             {"D", ks.D},
                             {"p", ks.p_approx},
                             {"n1", ks.n1},
                             {"n2", ks.n2},
                             {"threshold", c.threshold},
                             {"passed", ok}});
  }

  nlohmann::json q = nlohmann::json::object();
  nlohmann::json moments = nlohmann::json::object();
  for (const auto& [key, s] : series) {
    if (s.values.empty()) continue;
    const stats::EmpiricalDistribution e(s.values);
    const auto values = stats::quantiles(e, quantile_levels());
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < values.size(); ++i) row[shortest(quantile_levels()[i])] = values[i];
    q[series_name(key.first, key.second)] = row;
    moments[series_name(key.first, key.second)] = {
        {"count", s.values.size()}, {"mean", stats::mean(s.values)}, {"sd", std::sqrt(stats::variance(s.values))}};
  }
  summary["quantiles"] = q;
  summary["moments"] = moments;
  summary["derived"] = derived_metrics(experiment, params, series);
  summary["passed"] = passed;
  return summary;
}

RunResult run_experiment(const ExperimentConfig& config) {
  if (config.format != "csv" && config.format != "json") throw InvalidParameter("format must be csv or json");
  const auto start = std::chrono::steady_clock::now();
  auto data = sample_experiment(config);

  SeriesMap map;
  for (const auto& s : data.series) map[{s.statistic, s.k}] = s;
  auto summary = build_summary(config.experiment, data.params, config.seed, map, data.comparisons);
  summary["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(config.out_dir);
  RunResult result;
  result.csv_path = config.out_dir / "raw.csv";
  result.summary_path = config.out_dir / "summary.json";
  write_file(result.csv_path, raw_csv(config.experiment, data.series));
  write_file(result.summary_path, summary.dump(2) + "\n");
  if (config.svg) {
    for (const auto& c : data.comparisons) {
      const auto& a = map.at({c.statistic, c.k});
      const auto& b = map.at({c.reference, c.k});
      write_file(config.out_dir / ("hist_" + c.statistic + "_k" + std::to_string(c.k) + ".svg"),
                 histogram_svg(config.experiment + " k=" + std::to_string(c.k), a.values, c.statistic, b.values,
                               c.reference));
    }
  }
  result.passed = summary["passed"].get<bool>();
  result.summary = std::move(summary);
  return result;
}

nlohmann::json verify(const std::filesystem::path& summary_path, const std::filesystem::path& raw_csv_path) {
  nlohmann::json stored;
  try {
    stored = nlohmann::json::parse(read_file(summary_path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("summary is not valid JSON: " + std::string(e.what()));
  }
  std::string csv_experiment;
  const auto series = parse_raw_csv(read_file(raw_csv_path), &csv_experiment);
  nlohmann::json fresh;
  try {
    const auto experiment = stored.at("experiment").get<std::string>();
    if (!csv_experiment.empty() && csv_experiment != experiment) {
      throw IntegrityError("experiment: summary says " + experiment + ", raw CSV says " + csv_experiment);
    }
    std::vector<Comparison> comparisons;
    for (const auto& k : stored.at("ks")) {
      comparisons.push_back({k.at("statistic").get<std::string>(), k.at("reference").get<std::string>(),
                             k.at("k").get<std::size_t>(), k.at("threshold").get<double>()});
    }
    fresh = build_summary(experiment, stored.at("params"), stored.at("seed").get<std::uint64_t>(), series,
                          comparisons);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("summary is missing fields: " + std::string(e.what()));
  }
  compare_json(stored, fresh, "");
  return fresh;
}

std::string histogram_svg(const std::string& title, const std::vector<double>& a, const std::string& label_a,
                          const std::vector<double>& b, const std::string& label_b) {
  constexpr int kBins = 40;
  constexpr double W = 640, H = 360, pad = 40;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* v : {&a, &b}) {
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  auto density = [&](const std::vector<double>& v) {
    std::vector<double> h(kBins, 0.0);
    for (double x : v) {
      auto i = static_cast<int>((x - lo) / (hi - lo) * kBins);
      h[static_cast<std::size_t>(std::clamp(i, 0, kBins - 1))] += 1.0;
    }
    for (auto& c : h) c /= std::max<std::size_t>(1, v.size());
    return h;
  };
  const auto ha = density(a);
  const auto hb = density(b);
  const double top = std::max(*std::max_element(ha.begin(), ha.end()), *std::max_element(hb.begin(), hb.end()));
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  const double bw = (W - 2 * pad) / kBins;
  auto bars = [&](const std::vector<double>& h, const char* color) {
    for (int i = 0; i < kBins; ++i) {
      const double bh = top > 0 ? h[static_cast<std::size_t>(i)] / top * (H - 2 * pad) : 0.0;
      s << "<rect x=\"" << pad + i * bw << "\" y=\"" << H - pad - bh << "\" width=\"" << bw << "\" height=\"" << bh
        << "\" fill=\"" << color << "\" fill-opacity=\"0.45\"/>\n";
    }
  };
  bars(ha, "#1f77b4");
  bars(hb, "#d62728");
  s << "<text x=\"" << W - 220 << "\" y=\"40\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">"
    << label_a << " (" << a.size() << ")</text>\n";
  s << "<text x=\"" << W - 220 << "\" y=\"56\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">"
    << label_b << " (" << b.size() << ")</text>\n";
  s << "<text x=\"" << pad << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << shortest(lo) << "</text>\n";
  s << "<text x=\"" << W - pad - 60 << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << shortest(hi) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace ytlab::harness
