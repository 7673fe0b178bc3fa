#include "ytlab/randmat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ytlab/error.hpp"
#include "ytlab/tridiag.hpp"

namespace ytlab::randmat {

double SpectrumSample::trace() const noexcept {
  return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

TridiagonalModel sample_gue_tridiagonal(std::size_t m, RandomStream& rng) {
  if (m == 0) throw InvalidParameter("GUE dimension must be >= 1");
  TridiagonalModel t;
  t.diag.resize(m);
  t.off.resize(m - 1);
  for (auto& x : t.diag) x = rng.normal();
  for (std::size_t i = 0; i + 1 < m; ++i) t.off[i] = std::sqrt(rng.gamma(static_cast<double>(m - 1 - i)));
  return t;
}

SpectrumSample sample_gue_spectrum(std::size_t m, RandomStream& rng) {
  auto t = sample_gue_tridiagonal(m, rng);
  SpectrumSample s;
  s.eigenvalues = tridiag::eigenvalues_ql(std::move(t.diag), std::move(t.off));
  return s;
}

std::vector<double> sample_gue_top(std::size_t m, std::size_t count, RandomStream& rng) {
  const auto t = sample_gue_tridiagonal(m, rng);
  return tridiag::largest_eigenvalues(t.diag, t.off, count, 1e-10);
}

SpectrumSample make_traceless(const SpectrumSample& spectrum) {
  SpectrumSample out = spectrum;
  if (out.eigenvalues.empty()) return out;
  const double shift = spectrum.trace() / static_cast<double>(spectrum.m());
  for (auto& x : out.eigenvalues) x -= shift;
  out.traceless = true;
  return out;
}

std::vector<double> ReferenceDistribution::marginal(std::size_t k) const {
  if (k >= r) throw InvalidParameter("marginal index out of range");
  std::vector<double> out(samples);
  for (std::size_t i = 0; i < samples; ++i) out[i] = at(i, k);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

ReferenceDistribution edge_reference(std::size_t m_ref, std::size_t r, std::size_t samples,
                                     std::uint64_t seed, Exec exec) {
  const double scale = std::pow(static_cast<double>(m_ref), 1.0 / 6.0);
  const double edge = 2.0 * std::sqrt(static_cast<double>(m_ref));
  const auto rows = parallel::generate<std::vector<double>>(samples, exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const auto top = sample_gue_top(m_ref, r, rng);
    std::vector<double> v(r);
    double partial = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
      partial += top[k];
      v[k] = scale * (partial - static_cast<double>(k + 1) * edge);
    }
    return v;
  });
  ReferenceDistribution ref;
  ref.m_ref = m_ref;
  ref.r = r;
  ref.samples = samples;
  ref.seed = seed;
  ref.values.reserve(samples * r);
  for (const auto& row : rows) ref.values.insert(ref.values.end(), row.begin(), row.end());
  return ref;
}

}  // namespace

ReferenceDistribution tw_reference(std::size_t m_ref, std::size_t samples, std::uint64_t seed, Exec exec) {
  if (m_ref < 50) throw InvalidParameter("tw_reference needs m_ref >= 50");
  if (samples < 100) throw InvalidParameter("tw_reference needs N >= 100");
  auto ref = edge_reference(m_ref, 1, samples, seed, exec);
  ref.statistic = "tw";
  std::sort(ref.values.begin(), ref.values.end());
  return ref;
}

ReferenceDistribution fr_reference(std::size_t m_ref, std::size_t r, std::size_t samples,
                                   std::uint64_t seed, Exec exec) {
  if (r == 0 || r > m_ref) throw InvalidParameter("fr_reference needs 1 <= r <= m_ref");
  if (samples == 0) throw InvalidParameter("fr_reference needs N >= 1");
  auto ref = edge_reference(m_ref, r, samples, seed, exec);
  ref.statistic = "fr";
  if (r == 1) std::sort(ref.values.begin(), ref.values.end());
  return ref;
}

void save_reference(const ReferenceDistribution& ref, const std::filesystem::path& csv_path) {
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw InvalidInput("cannot write " + csv_path.string());
  csv << "sample_id,k,value\n";
  char buf[64];
  for (std::size_t i = 0; i < ref.samples; ++i) {
    for (std::size_t k = 0; k < ref.r; ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf, ref.at(i, k));
      csv << i << ',' << (k + 1) << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
  }
  nlohmann::json meta{{"statistic", ref.statistic}, {"m_ref", ref.m_ref}, {"r", ref.r},
                      {"N", ref.samples},           {"seed", ref.seed}};
  std::ofstream side(csv_path.string() + ".json", std::ios::binary);
  side << meta.dump(2) << '\n';
}

ReferenceDistribution load_reference(const std::filesystem::path& csv_path) {
  std::ifstream side(csv_path.string() + ".json");
  std::ifstream csv(csv_path);
  if (!side || !csv) throw InvalidInput("missing reference file " + csv_path.string());
  ReferenceDistribution ref;
  try {
    const auto meta = nlohmann::json::parse(side);
    ref.statistic = meta.at("statistic").get<std::string>();
    ref.m_ref = meta.at("m_ref").get<std::size_t>();
    ref.r = meta.at("r").get<std::size_t>();
    ref.samples = meta.at("N").get<std::size_t>();
    ref.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad reference sidecar: ") + e.what());
  }
  ref.values.assign(ref.samples * ref.r, 0.0);
  std::string line;
  std::getline(csv, line);
  if (line != "sample_id,k,value") throw InvalidInput("bad reference header in " + csv_path.string());
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw InvalidInput("bad reference row: " + line);
    std::size_t id = 0, k = 0;
    double v = 0.0;
    std::from_chars(line.data(), line.data() + c1, id);
    std::from_chars(line.data() + c1 + 1, line.data() + c2, k);
    const auto res = std::from_chars(line.data() + c2 + 1, line.data() + line.size(), v);
    if (res.ec != std::errc{} || id >= ref.samples || k == 0 || k > ref.r) {
      throw InvalidInput("bad reference row: " + line);
    }
    ref.values[id * ref.r + (k - 1)] = v;
    ++rows;
  }
  if (rows != ref.samples * ref.r) throw InvalidInput("reference row count does not match its sidecar");
  return ref;
}

}  // namespace ytlab::randmat
