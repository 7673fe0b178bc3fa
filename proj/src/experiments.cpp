// Per-experiment samplers behind run_experiment.  Each sampler validates its
// configuration first, then draws every sample family from its own derived
// seed so that families never share streams.

#include <cmath>
#include <filesystem>

#include "ytlab/brownian.hpp"
#include "ytlab/error.hpp"
#include "ytlab/harness.hpp"
#include "ytlab/lpp.hpp"
#include "ytlab/model.hpp"
#include "ytlab/randmat.hpp"
#include "ytlab/rsk.hpp"
#include "ytlab/stats.hpp"

namespace ytlab::harness {

namespace {

using nlohmann::json;

double threshold_for(const ExperimentConfig& c) {
  if (c.threshold) return *c.threshold;
  for (const auto& e : list_experiments()) {
    if (e.name == c.experiment && e.default_threshold) return *e.default_threshold;
  }
  return 1.0;
}

brownian::GridCorrection correction(const ExperimentConfig& c) {
  return c.grid_correction ? brownian::GridCorrection::continuity : brownian::GridCorrection::none;
}

void require_samples(const ExperimentConfig& c) {
  if (c.samples < 1) throw InvalidParameter("--samples must be >= 1");
}

void require_n(const ExperimentConfig& c) {
  if (c.n < 2) throw InvalidParameter("--n must be >= 2");
}

randmat::ReferenceDistribution reference(const ExperimentConfig& c, const std::string& kind, std::size_t r) {
  const std::uint64_t seed = derive_seed(c.seed, "gue-reference");
  const auto dir = c.cache_dir ? *c.cache_dir : c.out_dir / "reference-cache";
  const auto file = dir / (kind + "_m" + std::to_string(c.m_ref) + "_r" + std::to_string(r) + "_N" +
                           std::to_string(c.ref_samples) + "_s" + std::to_string(seed) + ".csv");
  if (std::filesystem::exists(file)) {
    auto ref = randmat::load_reference(file);
    if (ref.statistic == kind && ref.m_ref == c.m_ref && ref.r == r && ref.samples == c.ref_samples &&
        ref.seed == seed) {
      return ref;
    }
  }
  auto ref = kind == "tw" ? randmat::tw_reference(c.m_ref, c.ref_samples, seed, c.exec)
                          : randmat::fr_reference(c.m_ref, r, c.ref_samples, seed, c.exec);
  randmat::save_reference(ref, file);
  return ref;
}

/// Uniform-letter setup: explicit m is turned into the exponent a = ln m / ln n.
struct UniformSetup {
  std::size_t m = 0;
  model::GrowthSchedule schedule;
};

UniformSetup uniform_setup(const ExperimentConfig& c) {
  require_n(c);
  if (c.dist) throw InvalidParameter(c.experiment + " uses uniform letters; --dist is not accepted");
  UniformSetup s;
  const double nn = static_cast<double>(c.n);
  if (c.m) {
    if (*c.m < 1) throw InvalidParameter("--m must be >= 1");
    s.m = *c.m;
    s.schedule.m_rule = {std::log(static_cast<double>(s.m)) / std::log(nn), 0.0, 1.0};
  } else if (c.schedule) {
    s.schedule = model::schedule_from_json(*c.schedule);
    if (s.schedule.dist_rule || s.schedule.fixed_dist) {
      throw InvalidParameter(c.experiment + " uses uniform letters; drop the schedule's dist entry");
    }
    s.m = s.schedule.alphabet_size(c.n);
  } else {
    s.schedule.m_rule = {0.25, 0.0, 1.0};
    s.m = s.schedule.alphabet_size(c.n);
  }
  const auto report = model::validate_schedule(s.schedule, model::Theorem::main);
  for (const auto& check : report.checks) {
    if (!check.passed) throw InvalidParameter("schedule refused: " + check.name + " fails (" + check.detail + ")");
  }
  return s;
}

json power_law_json(const model::PowerLaw& p) { return {{"a", p.a}, {"b", p.b}, {"c", p.c}}; }

template <typename Fn>
std::vector<std::vector<double>> word_statistics(const ExperimentConfig& c, const model::LetterDistribution& dist,
                                                 Fn&& stat) {
  const std::uint64_t seed = derive_seed(c.seed, "words");
  return parallel::generate<std::vector<double>>(c.samples, c.exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    return stat(model::sample_word(dist, c.n, rng));
  });
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t k) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][k];
  return out;
}

void add_reference_series(ExperimentData& d, const randmat::ReferenceDistribution& ref, const std::string& name) {
  for (std::size_t k = 0; k < ref.r; ++k) {
    Series s{name, k + 1, 0, ref.m_ref, {}};
    s.values.resize(ref.samples);
    for (std::size_t i = 0; i < ref.samples; ++i) s.values[i] = ref.at(i, k);
    d.series.push_back(std::move(s));
  }
}

json reference_params(const ExperimentConfig& c) {
  return {{"m_ref", c.m_ref}, {"ref_samples", c.ref_samples}};
}

ExperimentData run_uniform(const ExperimentConfig& c, bool several_rows) {
  require_samples(c);
  const auto setup = uniform_setup(c);
  std::size_t r = 1;
  if (several_rows) {
    r = c.rows ? c.rows : (setup.schedule.rows > 1 ? static_cast<std::size_t>(setup.schedule.rows) : 2);
    if (r > setup.m) throw InvalidParameter("--r must not exceed m");
  }
  ExperimentData d;
  d.params = {{"n", c.n},
              {"m", setup.m},
              {"m_rule", power_law_json(setup.schedule.m_rule)},
              {"r", r},
              {"samples", c.samples}};
  d.params.update(reference_params(c));

  const double nn = static_cast<double>(c.n);
  const double md = static_cast<double>(setup.m);
  const double scale = std::sqrt(nn) * std::pow(md, -2.0 / 3.0);
  const auto dist = model::uniform_distribution(setup.m);
  const auto rows = word_statistics(c, dist, [&](const model::Word& w) {
    std::vector<double> out(r);
    if (r == 1) {
      out[0] = static_cast<double>(rsk::lis(w));
    } else {
      const auto shape = rsk::rsk_shape(w);
      for (std::size_t k = 1; k <= r; ++k) out[k - 1] = static_cast<double>(rsk::vk_from_shape(shape, k));
    }
    for (std::size_t k = 1; k <= r; ++k) {
      const auto kd = static_cast<double>(k);
      out[k - 1] = (out[k - 1] - kd * nn / md - 2.0 * kd * std::sqrt(nn)) / scale;
    }
    return out;
  });

  const std::string stat = "Vk_scaled";
  const std::string ref_name = several_rows ? "fr_reference" : "tw_reference";
  const double thr = threshold_for(c);
  for (std::size_t k = 1; k <= r; ++k) {
    d.series.push_back({stat, k, c.n, setup.m, column(rows, k - 1)});
    d.comparisons.push_back({stat, ref_name, k, thr});
  }
  add_reference_series(d, several_rows ? reference(c, "fr", r) : reference(c, "tw", 1), ref_name);
  return d;
}

model::GrowthSchedule default_nonuniform_schedule() {
  // k = 32, p_max = 0.03, p_2nd = 4e-5 at n = 10^5, with exponents that
  // satisfy both growth conditions.
  const double n0 = 1e5;
  model::GrowthSchedule s;
  s.m_rule = {0.0, 0.0, 1.0};
  model::DistributionRule r;
  r.k = {0.25, 0.0, 32.0 / std::pow(n0, 0.25)};
  r.p_max = {-0.25, 0.0, 0.03 * std::pow(n0, 0.25)};
  r.p_2nd = {-0.7, 0.0, 4e-5 * std::pow(n0, 0.7)};
  s.dist_rule = r;
  return s;
}

ExperimentData run_theorem6(const ExperimentConfig& c) {
  require_n(c);
  require_samples(c);
  if (c.dist || c.m) {
    throw UnsupportedRule("theorem6 takes its letter law from --schedule exponent rules for k, p_max and p_2nd");
  }
  const auto schedule = c.schedule ? model::schedule_from_json(*c.schedule) : default_nonuniform_schedule();
  const auto report = model::validate_schedule(schedule, model::Theorem::nonuniform);
  for (const auto& check : report.checks) {
    if (!check.passed) throw InvalidParameter("schedule refused: " + check.name + " fails (" + check.detail + ")");
  }
  const auto dist = schedule.dist_rule->at(c.n);
  const double nn = static_cast<double>(c.n);
  const double p = dist.p_max();
  const double k = static_cast<double>(dist.k());

  ExperimentData d;
  d.params = {{"n", c.n},
              {"m", dist.m()},
              {"k", dist.k()},
              {"p_max", p},
              {"p_2nd", dist.p_2nd().value_or(0.0)},
              {"k_rule", power_law_json(schedule.dist_rule->k)},
              {"p_max_rule", power_law_json(schedule.dist_rule->p_max)},
              {"p_2nd_rule", power_law_json(schedule.dist_rule->p_2nd)},
              {"samples", c.samples}};
  d.params.update(reference_params(c));

  const double root = std::sqrt(k * p * nn);
  const auto rows = word_statistics(c, dist, [&](const model::Word& w) {
    const auto v1 = static_cast<double>(rsk::lis(w));
    return std::vector<double>{(v1 - p * nn - 2.0 * root) / root * std::pow(k, 2.0 / 3.0)};
  });
  d.series.push_back({"V1_scaled", 1, c.n, dist.m(), column(rows, 0)});
  d.comparisons.push_back({"V1_scaled", "tw_reference", 1, threshold_for(c)});
  add_reference_series(d, reference(c, "tw", 1), "tw_reference");
  return d;
}

ExperimentData run_gue0(const ExperimentConfig& c) {
  require_samples(c);
  const std::size_t m = c.m.value_or(5);
  if (m < 1) throw InvalidParameter("--m must be >= 1");
  ExperimentData d;
  d.params = {{"m", m}, {"samples", c.samples}};
  const std::uint64_t s1 = derive_seed(c.seed, "gue");
  const std::uint64_t s2 = derive_seed(c.seed, "gue-traceless");
  auto direct = parallel::generate<double>(c.samples, c.exec, [&](std::size_t i) {
    RandomStream rng(s1, i);
    return randmat::sample_gue_spectrum(m, rng).eigenvalues.front();
  });
  auto shifted = parallel::generate<double>(c.samples, c.exec, [&](std::size_t i) {
    RandomStream rng(s2, i);
    const auto t = randmat::make_traceless(randmat::sample_gue_spectrum(m, rng));
    return t.eigenvalues.front() + rng.normal() / std::sqrt(static_cast<double>(m));
  });
  d.series.push_back({"gue_top", 1, 0, m, std::move(direct)});
  d.series.push_back({"traceless_plus_z_top", 1, 0, m, std::move(shifted)});
  d.comparisons.push_back({"gue_top", "traceless_plus_z_top", 1, threshold_for(c)});
  return d;
}

ExperimentData run_scaling1(const ExperimentConfig& c) {
  require_samples(c);
  const std::size_t m = c.m.value_or(4);
  if (m < 1) throw InvalidParameter("--m must be >= 1");
  if (c.steps < 1) throw InvalidParameter("--steps must be >= 1");
  ExperimentData d;
  d.params = {{"m", m}, {"steps", c.steps}, {"samples", c.samples}, {"s", 4}, {"grid_correction", c.grid_correction}};
  const auto mode = brownian::BundleMode::independent;
  auto long_run = brownian::l_k_batch(m, 1, 4.0, c.steps, mode, c.samples, derive_seed(c.seed, "paths-s4"), c.exec,
                                      correction(c));
  auto unit_run = brownian::l_k_batch(m, 1, 1.0, c.steps, mode, c.samples, derive_seed(c.seed, "paths-s1"), c.exec,
                                      correction(c));
  auto halved = column(long_run, 0);
  for (auto& v : halved) v /= 2.0;
  d.series.push_back({"L1_s4_half", 1, c.steps, m, std::move(halved)});
  d.series.push_back({"L1_s1", 1, c.steps, m, column(unit_run, 0)});
  d.comparisons.push_back({"L1_s4_half", "L1_s1", 1, threshold_for(c)});
  return d;
}

ExperimentData run_dk_limit(const ExperimentConfig& c) {
  require_samples(c);
  const std::size_t k = c.m.value_or(50);
  if (k < 1) throw InvalidParameter("--m (chain length) must be >= 1");
  if (c.steps < 1) throw InvalidParameter("--steps must be >= 1");
  ExperimentData d;
  d.params = {{"k", k}, {"steps", c.steps}, {"samples", c.samples}, {"grid_correction", c.grid_correction}};
  d.params.update(reference_params(c));
  auto values = brownian::d_k_batch(k, c.steps, c.samples, derive_seed(c.seed, "paths"), c.exec, correction(c));
  const double kd = static_cast<double>(k);
  for (auto& v : values) v = std::pow(kd, 1.0 / 6.0) * (v - 2.0 * std::sqrt(kd));
  d.series.push_back({"Dk_scaled", 1, c.steps, k, std::move(values)});
  d.comparisons.push_back({"Dk_scaled", "tw_reference", 1, threshold_for(c)});
  add_reference_series(d, reference(c, "tw", 1), "tw_reference");
  return d;
}

model::LetterDistribution lim2_default() {
  const std::vector<double> tail(7, 0.1);
  return model::nonuniform_distribution(1, 0.3, tail);
}

ExperimentData run_lim2(const ExperimentConfig& c) {
  require_n(c);
  require_samples(c);
  if (c.steps < 1) throw InvalidParameter("--steps must be >= 1");
  const auto dist = c.dist ? model::distribution_from_json(*c.dist) : lim2_default();
  const brownian::NonUniformLimitParams lp{dist.k(), dist.p_max()};
  lp.gaussian_coefficient();
  const double nn = static_cast<double>(c.n);
  const double p = dist.p_max();

  ExperimentData d;
  d.params = {{"n", c.n},       {"dist", dist.to_json()},   {"k", dist.k()},
              {"p_max", p},     {"samples", c.samples},     {"limit_samples", c.ref_samples},
              {"steps", c.steps}, {"grid_correction", c.grid_correction}};
  const auto rows = word_statistics(c, dist, [&](const model::Word& w) {
    return std::vector<double>{(static_cast<double>(rsk::lis(w)) - p * nn) / std::sqrt(p * nn)};
  });
  auto limit = brownian::v1_limit_batch(lp, c.steps, c.ref_samples, derive_seed(c.seed, "limit"), c.exec,
                                        correction(c));
  d.series.push_back({"V1_centered", 1, c.n, dist.m(), column(rows, 0)});
  d.series.push_back({"limit_sample", 1, c.steps, dist.k(), std::move(limit)});
  d.comparisons.push_back({"V1_centered", "limit_sample", 1, threshold_for(c)});
  return d;
}

ExperimentData run_lemma7(const ExperimentConfig& c) {
  require_n(c);
  require_samples(c);
  const auto dist = c.dist ? model::distribution_from_json(*c.dist) : model::equal_tail_distribution(50, 0.01, 1e-4);
  if (dist.is_uniform()) throw DegenerateInput("lemma7-gap needs a non-uniform law (V_1 - V_1' = 0 otherwise)");
  ExperimentData d;
  d.params = {{"n", c.n},
              {"m", dist.m()},
              {"k", dist.k()},
              {"p_max", dist.p_max()},
              {"p_2nd", *dist.p_2nd()},
              {"samples", c.samples}};
  auto est = lpp::gap_mc(dist, c.n, c.samples, derive_seed(c.seed, "words"), c.exec);
  d.series.push_back({"gap", 1, c.n, dist.m(), std::move(est.gaps)});
  return d;
}

ExperimentData run_spectrum_identity(const ExperimentConfig& c) {
  require_samples(c);
  const std::size_t m = c.m.value_or(3);
  if (m < 2) throw InvalidParameter("spectrum-identity needs m >= 2");
  if (c.steps < 1) throw InvalidParameter("--steps must be >= 1");
  if (c.ref_samples < 1) throw InvalidParameter("--ref-samples must be >= 1");
  ExperimentData d;
  d.params = {{"m", m},
              {"steps", c.steps},
              {"samples", c.samples},
              {"ref_samples", c.ref_samples},
              {"grid_correction", c.grid_correction}};
  const auto L = brownian::l_k_batch(m, m, 1.0, c.steps, brownian::BundleMode::exchangeable, c.samples,
                                     derive_seed(c.seed, "bundle"), c.exec, correction(c));
  const double factor = std::sqrt(static_cast<double>(m - 1) / static_cast<double>(m));
  std::vector<std::vector<double>> coords(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) {
    coords[i] = rsk::theta_inv(L[i]);
    for (auto& v : coords[i]) v *= factor;
  }
  const std::uint64_t gseed = derive_seed(c.seed, "gue");
  const auto spectra = parallel::generate<std::vector<double>>(c.ref_samples, c.exec, [&](std::size_t i) {
    RandomStream rng(gseed, i);
    return randmat::make_traceless(randmat::sample_gue_spectrum(m, rng)).eigenvalues;
  });
  for (std::size_t k = 1; k <= m; ++k) d.series.push_back({"identity", k, c.steps, m, column(coords, k - 1)});
  for (std::size_t k = 1; k <= m; ++k) d.series.push_back({"traceless_gue", k, 0, m, column(spectra, k - 1)});
  d.comparisons.push_back({"identity", "traceless_gue", 1, threshold_for(c)});
  return d;
}

/// Fraction of samples whose successive increments s_k - s_{k-1} (s_0 = 0)
/// are non-increasing.
double ordering_fraction(const SeriesMap& series, const std::string& name, std::size_t r) {
  std::vector<const Series*> cols;
  for (std::size_t k = 1; k <= r; ++k) {
    const auto it = series.find({name, k});
    if (it == series.end()) return std::nan("");
    cols.push_back(&it->second);
  }
  const std::size_t N = cols.front()->values.size();
  if (N == 0) return std::nan("");
  std::size_t good = 0;
  for (std::size_t i = 0; i < N; ++i) {
    bool ok = true;
    double prev_sum = 0.0, prev_inc = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r && ok; ++k) {
      const double v = cols[k]->values.at(i);
      const double inc = v - prev_sum;
      ok = inc <= prev_inc + 1e-9 * std::max(1.0, std::fabs(prev_inc));
      prev_inc = inc;
      prev_sum = v;
    }
    good += ok ? 1 : 0;
  }
  return static_cast<double>(good) / static_cast<double>(N);
}

}  // namespace

ExperimentData sample_experiment(const ExperimentConfig& config) {
  const auto& e = config.experiment;
  if (e == "corollary4") return run_uniform(config, false);
  if (e == "theorem3") return run_uniform(config, true);
  if (e == "theorem6") return run_theorem6(config);
  if (e == "gue0") return run_gue0(config);
  if (e == "scaling1") return run_scaling1(config);
  if (e == "dk-limit") return run_dk_limit(config);
  if (e == "lim2-k1") return run_lim2(config);
  if (e == "lemma7-gap") return run_lemma7(config);
  if (e == "spectrum-identity") return run_spectrum_identity(config);
  throw InvalidParameter("unknown experiment '" + e + "' (see `ytlab list`)");
}

nlohmann::json derived_metrics(const std::string& experiment, const nlohmann::json& params, const SeriesMap& series) {
  json out = json::object();
  auto number_or_null = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  if (experiment == "theorem3") {
    const auto r = params.at("r").get<std::size_t>();
    out["ordering_fraction_samples"] = number_or_null(ordering_fraction(series, "Vk_scaled", r));
    out["ordering_fraction_reference"] = number_or_null(ordering_fraction(series, "fr_reference", r));
  } else if (experiment == "theorem6") {
    out["condition2_ratio"] = model::condition2_ratio(params.at("n").get<double>(), params.at("p_max").get<double>(),
                                                      params.at("p_2nd").get<double>());
  } else if (experiment == "lemma7-gap") {
    const auto it = series.find({"gap", 1});
    if (it == series.end() || it->second.values.empty()) return out;
    const auto& g = it->second.values;
    const double N = static_cast<double>(g.size());
    const double mean = parallel::ordered_sum(g) / N;
    const double se = std::sqrt(stats::variance(g) / N);
    const auto n = params.at("n").get<std::size_t>();
    const double p_max = params.at("p_max").get<double>();
    const double p_2nd = params.at("p_2nd").get<double>();
    const double np2 = static_cast<double>(n) * p_2nd;
    out["mean_gap"] = mean;
    out["std_error"] = se;
    out["n_p2nd"] = np2;
    out["ratio"] = mean / np2;
    try {
      const double gamma = lpp::walk_plus_expectation({p_max, p_2nd, n});
      out["gamma_n"] = gamma;
      out["gamma_n_le_n_p2nd"] = gamma <= np2;
    } catch (const SizeGuard&) {
      out["gamma_n"] = nullptr;
    }
  } else if (experiment == "spectrum-identity") {
    const auto m = params.at("m").get<std::size_t>();
    std::vector<const std::vector<double>*> cols;
    for (std::size_t k = 1; k <= m; ++k) {
      const auto it = series.find({"identity", k});
      if (it == series.end()) return out;
      cols.push_back(&it->second.values);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < cols.front()->size(); ++i) {
      double s = 0.0;
      for (const auto* c : cols) s += c->at(i);
      worst = std::max(worst, std::fabs(s));
    }
    out["max_abs_coordinate_sum"] = worst;
  }
  return out;
}

}  // namespace ytlab::harness
