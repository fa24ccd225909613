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
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "urecall/errors.hpp"
#include "urecall/rng.hpp"

namespace urecall {

// All oracle arithmetic is exact: arbitrary-precision integers and reduced
// rationals. Equality assertions on the identities below are exact, never
// tolerance-based.
using BigInt = mpz_class;
using ExactValue = mpq_class;  // kept canonical: reduced, positive denominator

// Maximum placement x subset pairs an enumeration may visit before it is
// rejected as too large. Overridable per call and via the URE_BUDGET
// environment variable in the CLI.
inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// How a subset with zero observed positives enters an average: excluded
// from it, or counted with value zero.
enum class ZeroPositivePolicy {
  kSkip,
  kCountAsZero,
};

// C(n, k); zero outside 0 <= k <= n.
BigInt binomial(std::int64_t n, std::int64_t k);

// Probability that a uniform size-`draws` subset of `item_count` items, of
// which `n_pos` are positive, contains exactly x positives:
// C(n_pos, x) * C(item_count - n_pos, draws - x) / C(item_count, draws).
ExactValue hypergeom_pmf(std::int64_t x, std::int64_t draws,
                         std::int64_t n_pos, std::int64_t item_count);

// Expected Recall@cutoff of a uniformly random ranking:
// sum_x (x / n_pos) * hypergeom_pmf(x, cutoff, n_pos, item_count),
// which reduces to cutoff / item_count exactly.
ExactValue expected_recall_random_ranking(int item_count, int n_pos,
                                          int cutoff);

// Enumeration instance: item_count (N) items of which n_pos (N+) are
// positive; random samples of sample_size (N̄) items; full-ranking cutoff
// cutoff_full (K) and restricted cutoff cutoff_rand (K̄).
struct EnumerationSpec {
  int item_count = 0;
  int n_pos = 0;
  int sample_size = 0;
  int cutoff_full = 0;
  int cutoff_rand = 0;
};

// The coupled restricted cutoff K̄ = (N̄ / N) * K. Throws
// IncompatibleCutoffs unless the value is a positive integer.
int coupled_cutoff(int item_count, int sample_size, int cutoff_full);

struct Theorem1Result {
  ExactValue mean_difference;  // E[Recall@K̄ - Recall@K] over counted pairs
  std::uint64_t pair_count = 0;
  std::uint64_t pairs_counted = 0;
};

// Checks E[Recall@K̄ - Recall@K] = 0 by exhaustive enumeration: every
// placement of the n_pos positive positions (the sufficient statistic of a
// random ranking, since recall depends only on positive positions) crossed
// with every size-sample_size subset. Under the default skip policy the
// difference is an exact zero whenever cutoff_rand is the coupled cutoff.
Theorem1Result theorem1_identity_check(
    const EnumerationSpec& spec,
    ZeroPositivePolicy policy = ZeroPositivePolicy::kSkip,
    std::uint64_t budget = kDefaultEnumerationBudget);

struct Theorem2Result {
  ExactValue mean;        // E[m/n] over subsets with n >= 1
  ExactValue expected;    // M / n_pos
  ExactValue difference;  // mean - expected
  // E[m/n | n = n'] = M / n_pos separately for every attained n' >= 1.
  bool conditional_identity_holds = false;
  std::uint64_t subset_count = 0;
  std::uint64_t subsets_counted = 0;
};

// Checks that the estimator m/n is unbiased for M / n_pos: fixes a ranking
// in which above_threshold (M) of the n_pos positives are ranked above the
// threshold, enumerates every size-sample_size subset, and averages m/n
// over subsets with at least one observed positive. Also verifies the
// conditional identity for each observed-positive count separately.
Theorem2Result theorem2_unbiasedness_check(
    int item_count, int n_pos, int above_threshold, int sample_size,
    std::uint64_t budget = kDefaultEnumerationBudget);

// Result of sweeping expected_recall_random_ranking over every
// (N <= max_item_count, n_pos in [1..N], cutoff in [1..N]) instance and
// comparing it with cutoff / N as reduced rationals.
struct RandomRankingSweepResult {
  std::uint64_t instances_checked = 0;
  std::uint64_t failures = 0;
};

RandomRankingSweepResult random_ranking_recall_sweep(int max_item_count);

struct MonteCarloResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;  // draws that produced a value
};

// Sample mean and standard error of a metric over seeded random draws.
// Draws returning nullopt are skipped (and counted). Deterministic given
// the seed; trials must be >= 2.
MonteCarloResult monte_carlo_expectation(
    const std::function<std::optional<double>(Rng&)>& draw,
    std::uint64_t trials, std::uint64_t seed);

// Draw closure for Monte Carlo checks of the unbiasedness identity: samples
// sample_size items out of item_count without replacement, where the first
// n_pos items are positive and the first above_threshold of those are
// ranked above the threshold, and returns m/n (nullopt when n = 0).
std::function<std::optional<double>(Rng&)> make_subset_ratio_sampler(
    int item_count, int n_pos, int above_threshold, int sample_size);

}  // namespace urecall
