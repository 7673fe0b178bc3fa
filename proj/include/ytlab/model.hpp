#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ytlab/random.hpp"

namespace ytlab::model {

/// Letter law over an ordered alphabet {0, ..., m-1}.
///
/// Probabilities are kept sorted non-increasing together with the permutation
/// back to letter order.  Membership in the maximal set uses exact equality:
/// the multiplicity k is structural and distributions are built from exact
/// inputs.
class LetterDistribution {
 public:
  /// General constructor from probabilities in letter order.
  static LetterDistribution from_probabilities(std::vector<double> letter_probs);

  std::size_t m() const noexcept { return letter_probs_.size(); }
  double prob(std::uint32_t letter) const { return letter_probs_.at(letter); }
  const std::vector<double>& letter_probs() const noexcept { return letter_probs_; }

  /// Probabilities sorted non-increasing; sorted()[i] is the probability of
  /// letter order()[i].
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  const std::vector<std::uint32_t>& order() const noexcept { return order_; }

  double p_max() const noexcept { return sorted_.front(); }
  /// Second largest distinct probability; empty when all letters tie.
  std::optional<double> p_2nd() const noexcept { return p_2nd_; }
  /// Letters carrying p_max, ascending in alphabet order.
  const std::vector<std::uint32_t>& max_set() const noexcept { return max_set_; }
  std::size_t k() const noexcept { return max_set_.size(); }
  double sigma2() const noexcept { return sigma2_; }
  bool is_uniform() const noexcept { return !p_2nd_.has_value(); }

  /// Draws one letter (Walker alias table, two uniforms).
  std::uint32_t draw(RandomStream& rng) const noexcept;

  /// Exact-input description, used in output metadata.
  nlohmann::json to_json() const;

 private:
  LetterDistribution() = default;

  std::vector<double> letter_probs_;
  std::vector<double> sorted_;
  std::vector<std::uint32_t> order_;
  std::optional<double> p_2nd_;
  std::vector<std::uint32_t> max_set_;
  double sigma2_ = 0.0;
  // alias table in letter order
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_;
};

LetterDistribution uniform_distribution(std::size_t m);

/// k letters at p_max (letters 0..k-1) followed by the tail letters.
LetterDistribution nonuniform_distribution(std::size_t k, double p_max,
                                           std::span<const double> tail);

/// k letters at p_max and an equal-mass tail whose entries do not exceed
/// p_2nd (tail count = ceil((1 - k p_max) / p_2nd)).
LetterDistribution equal_tail_distribution(std::size_t k, double p_max, double p_2nd);

/// Parses {"uniform": m} or {"k": ..., "p_max": ..., "tail": [...]}.
LetterDistribution distribution_from_json(const nlohmann::json& spec);

struct Word {
  std::vector<std::uint32_t> letters;
  std::size_t m = 0;  ///< alphabet size

  std::size_t n() const noexcept { return letters.size(); }
};

/// n i.i.d. letters from `dist`; deterministic per (seed, stream).
Word sample_word(const LetterDistribution& dist, std::size_t n, RandomStream& rng);

/// Indicators X[i][j] = [letter i == j] and running column sums
/// S[k][j] = sum_{i<k} X[i][j], k = 0..n.
class OccupancyMatrix {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  int x(std::size_t i, std::size_t j) const { return x_[i * m_ + j]; }
  std::int64_t s(std::size_t k, std::size_t j) const { return s_[k * m_ + j]; }

 private:
  friend OccupancyMatrix occupancy(const Word& word, std::size_t m);
  std::size_t n_ = 0, m_ = 0;
  std::vector<std::uint8_t> x_;
  std::vector<std::int64_t> s_;
};

OccupancyMatrix occupancy(const Word& word, std::size_t m);

/// c * n^a * (log n)^b.
struct PowerLaw {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;

  double eval(double n) const;
};

/// Exponent triples for (k(m(n)), p_max, p_2nd).
struct DistributionRule {
  PowerLaw k;
  PowerLaw p_max;
  PowerLaw p_2nd;

  /// Concrete equal-tail distribution at word length n.
  LetterDistribution at(std::size_t n) const;
};

struct GrowthSchedule {
  PowerLaw m_rule;
  std::optional<DistributionRule> dist_rule;
  std::optional<LetterDistribution> fixed_dist;
  int rows = 1;

  /// floor(c n^a (log n)^b), at least 1.
  std::size_t alphabet_size(std::size_t n) const;
};

/// {"a":..,"b":..,"c":..,"rows":..,"dist":{...}} where dist is either a
/// concrete distribution spec or {"k":{a,b,c},"p_max":{..},"p_2nd":{..}}.
GrowthSchedule schedule_from_json(const nlohmann::json& spec);

enum class Theorem { main, nonuniform };

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  Theorem theorem = Theorem::main;
  std::vector<ConditionCheck> checks;

  bool ok() const noexcept;
  /// Name of the first failed condition, empty when ok().
  std::string first_failure() const;
};

/// Decides the asymptotic growth conditions by exponent arithmetic:
/// f = o(g) iff exponent(f) < exponent(g), or equal exponents and strictly
/// smaller log-exponent.
ValidationReport validate_schedule(const GrowthSchedule& schedule, Theorem theorem);

/// Numerical value of (p_2nd)^2 n^{11/10} (log n)^{-1/5} / p_max.
double condition2_ratio(double n, double p_max, double p_2nd);

}  // namespace ytlab::model
