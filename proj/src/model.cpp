#include "ytlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ytlab/error.hpp"

namespace ytlab::model {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kExponentEps = 1e-12;

}  // namespace

LetterDistribution LetterDistribution::from_probabilities(std::vector<double> letter_probs) {
  if (letter_probs.empty()) throw InvalidParameter("alphabet must be non-empty");
  long double mass = 0.0L;
  for (double p : letter_probs) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidParameter("probabilities must be finite and >= 0");
    mass += p;
  }
  if (std::fabs(static_cast<double>(mass - 1.0L)) > kMassTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << static_cast<double>(mass) << ", expected 1";
    throw InvalidParameter(msg.str());
  }

  LetterDistribution d;
  const std::size_t m = letter_probs.size();
  d.letter_probs_ = std::move(letter_probs);
  d.order_.resize(m);
  std::iota(d.order_.begin(), d.order_.end(), 0u);
  std::stable_sort(d.order_.begin(), d.order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    return d.letter_probs_[a] > d.letter_probs_[b];
  });
  d.sorted_.resize(m);
  for (std::size_t i = 0; i < m; ++i) d.sorted_[i] = d.letter_probs_[d.order_[i]];

  const double pmax = d.sorted_.front();
  for (std::uint32_t j = 0; j < m; ++j) {
    if (d.letter_probs_[j] == pmax) d.max_set_.push_back(j);
  }
  if (d.max_set_.size() < m) d.p_2nd_ = d.sorted_[d.max_set_.size()];
  d.sigma2_ = pmax * (1.0 - pmax);

  // Vose alias construction.
  d.alias_prob_.assign(m, 0.0);
  d.alias_.assign(m, 0);
  std::vector<double> scaled(m);
  std::vector<std::uint32_t> small, large;
  for (std::uint32_t j = 0; j < m; ++j) {
    scaled[j] = d.letter_probs_[j] * static_cast<double>(m);
    (scaled[j] < 1.0 ? small : large).push_back(j);
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    d.alias_prob_[s] = scaled[s];
    d.alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t j : large) {
    d.alias_prob_[j] = 1.0;
    d.alias_[j] = j;
  }
  // Leftovers from rounding behave as full columns; a zero-probability
  // letter must never be returned as its own column.
  for (std::uint32_t j : small) {
    d.alias_prob_[j] = d.letter_probs_[j] > 0.0 ? 1.0 : 0.0;
    d.alias_[j] = d.order_.front();
  }
  return d;
}

std::uint32_t LetterDistribution::draw(RandomStream& rng) const noexcept {
  const auto m = static_cast<std::uint32_t>(letter_probs_.size());
  if (m == 1) return 0;
  const std::uint32_t column = rng.below(m);
  return rng.uniform() < alias_prob_[column] ? column : alias_[column];
}

nlohmann::json LetterDistribution::to_json() const {
  nlohmann::json j;
  j["m"] = m();
  j["k"] = k();
  j["p_max"] = p_max();
  if (p_2nd_) {
    j["p_2nd"] = *p_2nd_;
  } else {
    j["p_2nd"] = nullptr;
  }
  j["tail_count"] = m() - k();
  j["tail_arrangement"] = "tail letters follow the maximal letters in alphabet order";
  return j;
}

LetterDistribution uniform_distribution(std::size_t m) {
  if (m == 0) throw InvalidParameter("uniform distribution needs m >= 1");
  return LetterDistribution::from_probabilities(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

LetterDistribution nonuniform_distribution(std::size_t k, double p_max, std::span<const double> tail) {
  if (k == 0) throw InvalidParameter("k must be >= 1");
  if (!(p_max > 0.0 && p_max <= 1.0)) throw InvalidParameter("p_max must lie in (0, 1]");
  for (double t : tail) {
    if (!(t < p_max)) throw InvalidParameter("tail probabilities must be < p_max");
  }
  std::vector<double> probs(k, p_max);
  probs.insert(probs.end(), tail.begin(), tail.end());
  return LetterDistribution::from_probabilities(std::move(probs));
}

LetterDistribution equal_tail_distribution(std::size_t k, double p_max, double p_2nd) {
  if (k == 0) throw InvalidParameter("k must be >= 1");
  if (!(p_2nd > 0.0 && p_2nd < p_max)) throw InvalidParameter("need 0 < p_2nd < p_max");
  const double rest = 1.0 - static_cast<double>(k) * p_max;
  if (rest < -kMassTolerance) throw InvalidParameter("k * p_max exceeds 1");
  if (rest <= kMassTolerance) return nonuniform_distribution(k, p_max, {});
  const auto count = static_cast<std::size_t>(std::ceil(rest / p_2nd - 1e-9));
  const std::vector<double> tail(count, rest / static_cast<double>(count));
  return nonuniform_distribution(k, p_max, tail);
}

LetterDistribution distribution_from_json(const nlohmann::json& spec) {
  try {
    if (spec.contains("uniform")) return uniform_distribution(spec.at("uniform").get<std::size_t>());
    const auto k = spec.at("k").get<std::size_t>();
    const auto p_max = spec.at("p_max").get<double>();
    if (spec.contains("tail")) {
      const auto tail = spec.at("tail").get<std::vector<double>>();
      return nonuniform_distribution(k, p_max, tail);
    }
    if (spec.contains("p_2nd")) return equal_tail_distribution(k, p_max, spec.at("p_2nd").get<double>());
    return nonuniform_distribution(k, p_max, {});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("bad distribution spec: ") + e.what());
  }
}

Word sample_word(const LetterDistribution& dist, std::size_t n, RandomStream& rng) {
  Word w;
  w.m = dist.m();
  w.letters.resize(n);
  if (dist.is_uniform()) {
    const auto m = static_cast<std::uint32_t>(dist.m());
    for (auto& x : w.letters) x = rng.below(m);
  } else {
    for (auto& x : w.letters) x = dist.draw(rng);
  }
  return w;
}

OccupancyMatrix occupancy(const Word& word, std::size_t m) {
  OccupancyMatrix occ;
  occ.n_ = word.n();
  occ.m_ = m;
  occ.x_.assign(occ.n_ * m, 0);
  occ.s_.assign((occ.n_ + 1) * m, 0);
  for (std::size_t i = 0; i < occ.n_; ++i) {
    const std::uint32_t letter = word.letters[i];
    if (letter >= m) throw InvalidInput("letter " + std::to_string(letter) + " outside alphabet of size " + std::to_string(m));
    occ.x_[i * m + letter] = 1;
    for (std::size_t j = 0; j < m; ++j) {
      occ.s_[(i + 1) * m + j] = occ.s_[i * m + j] + occ.x_[i * m + j];
    }
  }
  return occ;
}

double PowerLaw::eval(double n) const {
  if (n < 2.0) throw InvalidParameter("growth rules are evaluated for n >= 2");
  return c * std::pow(n, a) * std::pow(std::log(n), b);
}

LetterDistribution DistributionRule::at(std::size_t n) const {
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<std::size_t>(std::floor(k.eval(nn) + 1e-9));
  if (kk == 0) throw InvalidParameter("k(m(n)) evaluates to 0");
  return equal_tail_distribution(kk, p_max.eval(nn), p_2nd.eval(nn));
}

std::size_t GrowthSchedule::alphabet_size(std::size_t n) const {
  if (dist_rule) return dist_rule->at(n).m();
  if (fixed_dist) return fixed_dist->m();
  const double v = std::floor(m_rule.eval(static_cast<double>(n)) + 1e-9);
  return v < 1.0 ? 1 : static_cast<std::size_t>(v);
}

namespace {

PowerLaw power_law_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UnsupportedRule("growth rule must be an object {a, b, c}");
  for (const auto& [key, value] : j.items()) {
    if (key != "a" && key != "b" && key != "c") throw UnsupportedRule("unknown growth-rule field '" + key + "'");
    if (!value.is_number()) throw UnsupportedRule("growth-rule field '" + key + "' must be numeric");
  }
  PowerLaw p;
  p.a = j.value("a", 0.0);
  p.b = j.value("b", 0.0);
  p.c = j.value("c", 1.0);
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c)) {
    throw UnsupportedRule("growth-rule fields must be finite");
  }
  return p;
}

}  // namespace

GrowthSchedule schedule_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw InvalidParameter("schedule must be a JSON object");
  for (const auto& [key, value] : spec.items()) {
    if (key != "a" && key != "b" && key != "c" && key != "rows" && key != "dist") {
      throw UnsupportedRule("unknown schedule field '" + key + "'");
    }
  }
  GrowthSchedule s;
  nlohmann::json m_part = nlohmann::json::object();
  for (const char* key : {"a", "b", "c"}) {
    if (spec.contains(key)) m_part[key] = spec.at(key);
  }
  s.m_rule = power_law_from_json(m_part);
  if (s.m_rule.a < 0.0) throw InvalidParameter("schedule exponent a must be >= 0");
  s.rows = spec.value("rows", 1);
  if (spec.contains("dist")) {
    const auto& d = spec.at("dist");
    if (d.contains("k") && d.at("k").is_object()) {
      DistributionRule rule;
      rule.k = power_law_from_json(d.at("k"));
      rule.p_max = power_law_from_json(d.at("p_max"));
      rule.p_2nd = power_law_from_json(d.at("p_2nd"));
      s.dist_rule = rule;
    } else {
      s.fixed_dist = distribution_from_json(d);
    }
  }
  return s;
}

bool ValidationReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

std::string ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return {};
}

namespace {

struct Order {
  double a;
  double b;
};

/// -1 if f = o(g), 0 if same order, +1 otherwise.
int compare_order(Order f, Order g) {
  if (f.a < g.a - kExponentEps) return -1;
  if (f.a > g.a + kExponentEps) return 1;
  if (f.b < g.b - kExponentEps) return -1;
  if (f.b > g.b + kExponentEps) return 1;
  return 0;
}

std::string describe(Order o) {
  std::ostringstream s;
  s << "n^" << o.a << " (log n)^" << o.b;
  return s.str();
}

ConditionCheck little_o(std::string name, Order f, Order g) {
  ConditionCheck c;
  c.name = std::move(name);
  c.passed = compare_order(f, g) < 0;
  c.detail = describe(f) + (c.passed ? " = o(" : " is not o(") + describe(g) + ")";
  return c;
}

ConditionCheck diverges(std::string name, Order f) {
  ConditionCheck c;
  c.name = std::move(name);
  c.passed = compare_order({0.0, 0.0}, f) < 0;
  c.detail = describe(f) + (c.passed ? " -> infinity" : " stays bounded");
  return c;
}

ConditionCheck positive_constant(std::string name, const PowerLaw& p) {
  ConditionCheck c;
  c.name = std::move(name);
  c.passed = p.c > 0.0;
  c.detail = c.passed ? "c > 0" : "c must be > 0";
  return c;
}

}  // namespace

ValidationReport validate_schedule(const GrowthSchedule& schedule, Theorem theorem) {
  ValidationReport report;
  report.theorem = theorem;
  if (theorem == Theorem::main) {
    const Order m{schedule.m_rule.a, schedule.m_rule.b};
    report.checks.push_back(positive_constant("m(n) >= 1", schedule.m_rule));
    report.checks.push_back(diverges("m(n) -> infinity", m));
    report.checks.push_back(little_o("growth condition m = o(n^{3/10} (log n)^{-3/5})", m, {0.3, -0.6}));
    return report;
  }

  if (!schedule.dist_rule) {
    throw UnsupportedRule("the non-uniform conditions need exponent rules for k, p_max and p_2nd");
  }
  const auto& r = *schedule.dist_rule;
  const Order k{r.k.a, r.k.b};
  const Order pmax{r.p_max.a, r.p_max.b};
  const Order p2{r.p_2nd.a, r.p_2nd.b};
  report.checks.push_back(positive_constant("k(m(n)) >= 1", r.k));
  report.checks.push_back(diverges("k(m(n)) -> infinity", k));
  report.checks.push_back(little_o("growth condition k = o(n^{3/10} (log n)^{-3/5})", k, {0.3, -0.6}));
  report.checks.push_back(little_o("second-probability condition (p_2nd)^2 n^{11/10} (log n)^{-1/5} = o(p_max)",
                                   {2.0 * p2.a + 1.1, 2.0 * p2.b - 0.2}, pmax));

  ConditionCheck mass;
  mass.name = "k p_max <= 1";
  const int km = compare_order({k.a + pmax.a, k.b + pmax.b}, {0.0, 0.0});
  mass.passed = km < 0 || (km == 0 && r.k.c * r.p_max.c <= 1.0);
  mass.detail = "k p_max ~ " + describe({k.a + pmax.a, k.b + pmax.b});
  report.checks.push_back(mass);

  ConditionCheck order;
  order.name = "p_2nd < p_max";
  const int po = compare_order(p2, pmax);
  order.passed = po < 0 || (po == 0 && r.p_2nd.c < r.p_max.c);
  order.detail = "p_2nd ~ " + describe(p2) + ", p_max ~ " + describe(pmax);
  report.checks.push_back(order);
  return report;
}

double condition2_ratio(double n, double p_max, double p_2nd) {
  return p_2nd * p_2nd * std::pow(n, 1.1) / std::pow(std::log(n), 0.2) / p_max;
}

}  // namespace ytlab::model
