/*
 * Copyright 2026 The urecall Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "urecall/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace urecall {
namespace {

ExactValue make_fraction(const BigInt& num, const BigInt& den) {
  ExactValue q(num, den);
  q.canonicalize();
  return q;
}

// lcm(1..n), guarded against uint64 overflow (which the enumeration budget
// makes unreachable in practice).
std::uint64_t lcm_up_to(int n) {
  std::uint64_t l = 1;
  for (int i = 2; i <= n; ++i) {
    const std::uint64_t g = std::gcd(l, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = static_cast<std::uint64_t>(i) / g;
    if (l > (~std::uint64_t{0}) / factor) {
      throw EnumerationTooLarge("common denominator for n <= " +
                                std::to_string(n) + " overflows");
    }
    l *= factor;
  }
  return l;
}

// Gosper's hack: next bitmask with the same popcount.
std::uint64_t next_combination(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) |
         (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

std::uint64_t first_combination(int bits) {
  return bits == 0 ? 0 : (~std::uint64_t{0} >> (64 - bits));
}

// Mask of the `count` lowest set bits of s.
std::uint64_t lowest_set_bits(std::uint64_t s, int count) {
  std::uint64_t mask = 0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t bit = s & (~s + 1);
    mask |= bit;
    s ^= bit;
  }
  return mask;
}

void check_enumeration_args(int item_count, int n_pos, int sample_size) {
  if (item_count < 1 || item_count > 62) {
    throw EnumerationTooLarge("item_count " + std::to_string(item_count) +
                              " outside the enumerable range [1..62]");
  }
  if (n_pos < 0 || n_pos > item_count) {
    throw UsageError("n_pos " + std::to_string(n_pos) + " outside [0.." +
                     std::to_string(item_count) + "]");
  }
  if (sample_size < 1 || sample_size > item_count) {
    throw InvalidSampleSize("sample_size " + std::to_string(sample_size) +
                            " outside [1.." + std::to_string(item_count) +
                            "]");
  }
}

}  // namespace

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return BigInt(0);
  BigInt result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

ExactValue hypergeom_pmf(std::int64_t x, std::int64_t draws,
                         std::int64_t n_pos, std::int64_t item_count) {
  if (n_pos < 0 || n_pos > item_count || draws < 0 || draws > item_count) {
    throw UsageError("hypergeometric arguments out of range");
  }
  const BigInt ways = binomial(n_pos, x) * binomial(item_count - n_pos, draws - x);
  return make_fraction(ways, binomial(item_count, draws));
}

ExactValue expected_recall_random_ranking(int item_count, int n_pos,
                                          int cutoff) {
  if (n_pos == 0) throw NoPositives("n_pos must be >= 1");
  if (item_count < 1 || n_pos < 0 || n_pos > item_count) {
    throw UsageError("invalid random-ranking instance");
  }
  if (cutoff < 1 || cutoff > item_count) {
    throw InvalidCutoff("cutoff " + std::to_string(cutoff) + " outside [1.." +
                        std::to_string(item_count) + "]");
  }
  ExactValue total(0);
  const int x_max = std::min(cutoff, n_pos);
  for (int x = 1; x <= x_max; ++x) {
    total += ExactValue(x, n_pos) * hypergeom_pmf(x, cutoff, n_pos, item_count);
  }
  total.canonicalize();
  return total;
}

int coupled_cutoff(int item_count, int sample_size, int cutoff_full) {
  const std::int64_t numerator =
      static_cast<std::int64_t>(sample_size) * cutoff_full;
  if (numerator % item_count != 0 || numerator / item_count < 1) {
    throw IncompatibleCutoffs(
        "restricted cutoff " + std::to_string(sample_size) + "*" +
        std::to_string(cutoff_full) + "/" + std::to_string(item_count) +
        " is not a positive integer");
  }
  return static_cast<int>(numerator / item_count);
}

Theorem1Result theorem1_identity_check(const EnumerationSpec& spec,
                                       ZeroPositivePolicy policy,
                                       std::uint64_t budget) {
  check_enumeration_args(spec.item_count, spec.n_pos, spec.sample_size);
  if (spec.n_pos < 1) throw NoPositives("n_pos must be >= 1");
  if (spec.cutoff_full < 1 || spec.cutoff_full > spec.item_count) {
    throw InvalidCutoff("cutoff_full outside [1..item_count]");
  }
  if (spec.cutoff_rand !=
      coupled_cutoff(spec.item_count, spec.sample_size, spec.cutoff_full)) {
    throw IncompatibleCutoffs("cutoff_rand is not the coupled cutoff");
  }

  const BigInt placements = binomial(spec.item_count, spec.n_pos);
  const BigInt subsets = binomial(spec.item_count, spec.sample_size);
  const BigInt pairs = placements * subsets;
  if (pairs > BigInt(static_cast<unsigned long>(budget))) {
    throw EnumerationTooLarge("placements*subsets " + pairs.get_str() +
                              " exceeds budget " + std::to_string(budget));
  }

  // Per-pair values are accumulated as integers over the common denominator
  // L = lcm(1..max observed positives, n_pos): Recall@K̄ = m/n scales to
  // m*(L/n) and Recall@K = r/n_pos to r*(L/n_pos).
  const int max_n = std::min(spec.sample_size, spec.n_pos);
  const std::uint64_t base = lcm_up_to(max_n);
  const std::uint64_t npos_factor =
      static_cast<std::uint64_t>(spec.n_pos) /
      std::gcd(base, static_cast<std::uint64_t>(spec.n_pos));
  if (base > static_cast<std::uint64_t>(
                 std::numeric_limits<std::int64_t>::max()) /
                 npos_factor) {
    throw EnumerationTooLarge("common denominator overflows");
  }
  const std::uint64_t scale = base * npos_factor;
  std::vector<std::int64_t> scale_over(max_n + 1, 0);
  for (int n = 1; n <= max_n; ++n) {
    scale_over[n] = static_cast<std::int64_t>(scale / n);
  }
  const std::int64_t scale_over_npos =
      static_cast<std::int64_t>(scale / spec.n_pos);

  std::vector<std::uint64_t> placement_masks;
  placement_masks.reserve(placements.get_ui());
  const std::uint64_t all_items = first_combination(spec.item_count);
  for (std::uint64_t p = first_combination(spec.n_pos); p <= all_items;
       p = next_combination(p)) {
    placement_masks.push_back(p);
    if (p == all_items) break;  // next_combination would shift past N bits
  }

  const std::uint64_t top_k_mask = first_combination(spec.cutoff_full);

  BigInt total(0);
  std::uint64_t counted = 0;
  for (std::uint64_t subset = first_combination(spec.sample_size);;
       subset = next_combination(subset)) {
    const std::uint64_t subset_top =
        lowest_set_bits(subset, spec.cutoff_rand);
    __int128 row = 0;
    for (const std::uint64_t placement : placement_masks) {
      const int n = std::popcount(placement & subset);
      const int full_hits = std::popcount(placement & top_k_mask);
      if (n == 0) {
        if (policy == ZeroPositivePolicy::kCountAsZero) {
          row -= static_cast<__int128>(full_hits) * scale_over_npos;
          ++counted;
        }
        continue;
      }
      const int restricted_hits = std::popcount(placement & subset_top);
      row += static_cast<__int128>(restricted_hits) * scale_over[n] -
             static_cast<__int128>(full_hits) * scale_over_npos;
      ++counted;
    }
    BigInt row_big;
    const bool negative = row < 0;
    const unsigned __int128 magnitude =
        negative ? static_cast<unsigned __int128>(-row)
                 : static_cast<unsigned __int128>(row);
    mpz_import(row_big.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0,
               &magnitude);
    total += negative ? -row_big : row_big;
    if (subset == all_items || next_combination(subset) > all_items) break;
  }

  Theorem1Result result;
  result.pair_count = pairs.get_ui();
  result.pairs_counted = counted;
  if (counted == 0) {
    throw EmptyEvaluation("every enumerated pair was skipped");
  }
  result.mean_difference = make_fraction(
      total, BigInt(static_cast<unsigned long>(scale)) *
                 BigInt(static_cast<unsigned long>(counted)));
  return result;
}

Theorem2Result theorem2_unbiasedness_check(int item_count, int n_pos,
                                           int above_threshold,
                                           int sample_size,
                                           std::uint64_t budget) {
  check_enumeration_args(item_count, n_pos, sample_size);
  if (n_pos < 1) throw NoPositives("n_pos must be >= 1");
  if (above_threshold < 0 || above_threshold > n_pos) {
    throw UsageError("above_threshold outside [0..n_pos]");
  }
  const BigInt subsets = binomial(item_count, sample_size);
  if (subsets > BigInt(static_cast<unsigned long>(budget))) {
    throw EnumerationTooLarge("subsets " + subsets.get_str() +
                              " exceeds budget " + std::to_string(budget));
  }

  // Canonical placement: items 1..n_pos are positive and of those the
  // first above_threshold are above the threshold. Only membership counts
  // enter m and n, so this fixes the instance without loss of generality.
  const std::uint64_t positives_mask = first_combination(n_pos);
  const std::uint64_t above_mask = first_combination(above_threshold);
  const std::uint64_t all_items = first_combination(item_count);

  const int max_n = std::min(sample_size, n_pos);
  const std::uint64_t scale = lcm_up_to(max_n);

  __int128 total = 0;
  std::uint64_t counted = 0;
  std::vector<std::uint64_t> count_by_n(max_n + 1, 0);
  std::vector<std::uint64_t> hit_sum_by_n(max_n + 1, 0);
  for (std::uint64_t subset = first_combination(sample_size);;
       subset = next_combination(subset)) {
    const int n = std::popcount(subset & positives_mask);
    if (n > 0) {
      const int m = std::popcount(subset & above_mask);
      total += static_cast<__int128>(m) * static_cast<std::int64_t>(scale / n);
      ++counted;
      ++count_by_n[n];
      hit_sum_by_n[n] += static_cast<std::uint64_t>(m);
    }
    if (subset == all_items || next_combination(subset) > all_items) break;
  }

  Theorem2Result result;
  result.subset_count = subsets.get_ui();
  result.subsets_counted = counted;
  if (counted == 0) {
    throw EmptyEvaluation("no subset contains a positive item");
  }

  BigInt total_big;
  {
    const bool negative = total < 0;
    const unsigned __int128 magnitude =
        negative ? static_cast<unsigned __int128>(-total)
                 : static_cast<unsigned __int128>(total);
    mpz_import(total_big.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0,
               &magnitude);
    if (negative) total_big = -total_big;
  }
  result.mean = make_fraction(
      total_big, BigInt(static_cast<unsigned long>(scale)) *
                     BigInt(static_cast<unsigned long>(counted)));
  result.expected = make_fraction(BigInt(above_threshold), BigInt(n_pos));
  result.difference = result.mean - result.expected;
  result.difference.canonicalize();

  // E[m/n | n = n'] = M / n_pos  <=>  n_pos * sum(m) = M * n' * count(n').
  result.conditional_identity_holds = true;
  for (int n = 1; n <= max_n; ++n) {
    if (count_by_n[n] == 0) continue;
    const BigInt lhs = BigInt(n_pos) * BigInt(static_cast<unsigned long>(
                                           hit_sum_by_n[n]));
    const BigInt rhs = BigInt(above_threshold) * BigInt(n) *
                       BigInt(static_cast<unsigned long>(count_by_n[n]));
    if (lhs != rhs) result.conditional_identity_holds = false;
  }
  return result;
}

RandomRankingSweepResult random_ranking_recall_sweep(int max_item_count) {
  RandomRankingSweepResult result;
  for (int n = 1; n <= max_item_count; ++n) {
    for (int n_pos = 1; n_pos <= n; ++n_pos) {
      for (int cutoff = 1; cutoff <= n; ++cutoff) {
        const ExactValue lhs =
            expected_recall_random_ranking(n, n_pos, cutoff);
        const ExactValue rhs = make_fraction(BigInt(cutoff), BigInt(n));
        ++result.instances_checked;
        if (lhs != rhs) ++result.failures;
      }
    }
  }
  return result;
}

MonteCarloResult monte_carlo_expectation(
    const std::function<std::optional<double>(Rng&)>& draw,
    std::uint64_t trials, std::uint64_t seed) {
  if (trials < 2) {
    throw InvalidTrials("trials must be >= 2, got " + std::to_string(trials));
  }
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::optional<double> value = draw(rng);
    if (!value) continue;
    sum += *value;
    sum_sq += *value * *value;
    ++accepted;
  }
  if (accepted < 2) {
    throw EmptyEvaluation("fewer than two draws produced a value");
  }
  MonteCarloResult result;
  result.trials = trials;
  result.accepted = accepted;
  result.mean = sum / static_cast<double>(accepted);
  const double variance =
      std::max(0.0, (sum_sq - sum * sum / static_cast<double>(accepted)) /
                        static_cast<double>(accepted - 1));
  result.standard_error =
      std::sqrt(variance / static_cast<double>(accepted));
  return result;
}

std::function<std::optional<double>(Rng&)> make_subset_ratio_sampler(
    int item_count, int n_pos, int above_threshold, int sample_size) {
  check_enumeration_args(item_count, n_pos, sample_size);
  if (above_threshold < 0 || above_threshold > n_pos) {
    throw UsageError("above_threshold outside [0..n_pos]");
  }
  std::vector<int> initial_pool(item_count);
  std::iota(initial_pool.begin(), initial_pool.end(), 0);
  return [initial_pool, n_pos, above_threshold, sample_size](
             Rng& rng) mutable -> std::optional<double> {
    // Fresh pool per draw so the closure stays a pure function of the
    // generator state; partial Fisher-Yates selects the sample.
    std::vector<int> pool = initial_pool;
    for (int i = 0; i < sample_size; ++i) {
      const int j =
          i + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                  pool.size() - static_cast<std::size_t>(i))));
      std::swap(pool[i], pool[j]);
    }
    int n = 0;
    int m = 0;
    for (int i = 0; i < sample_size; ++i) {
      if (pool[i] < n_pos) {
        ++n;
        if (pool[i] < above_threshold) ++m;
      }
    }
    if (n == 0) return std::nullopt;
    return static_cast<double>(m) / static_cast<double>(n);
  };
}

}  // namespace urecall
