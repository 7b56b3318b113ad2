// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qldpc/bp.hpp"
#include "qldpc/code.hpp"
#include "qldpc/mbbp.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

enum class DecoderKind { bp_flooding, bp_serial, mbbp_ld, mbbp_random };

// What counts toward the failure-stopping target: logical failures (syndrome
// miss or residual outside the stabilizer row space) or plain non-convergence.
enum class FailureRule { logical, nonconvergence };

struct SimulationConfig {
    std::vector<double> p_values;
    DecoderKind decoder = DecoderKind::mbbp_ld;
    std::size_t target_failures = 100;
    std::size_t max_trials = 10'000'000;
    std::uint64_t seed = 1;
    std::size_t partitions = 20; // seeded partition ensemble size
    // How many ensemble members the MBBP decoder pools its bases from. The
    // default single partition matches the evaluated curves; pooling more
    // partitions grows the list and can lower the error rate further.
    std::size_t pooled_partitions = 1;
    BpConfig bp;             // channel_p is overridden per point
    bool swap_xz = false;    // decode hx errors against hz roles swapped
    std::size_t threads = 0; // 0 = hardware concurrency
    FailureRule failure_rule = FailureRule::logical;

    void validate() const;
};

struct PointRecord {
    double p = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double ler = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double avg_iters_total = 0.0;
    double avg_iters_per_instance = 0.0;
    double avg_k_max = 0.0;
    std::size_t instances = 1;
};

struct SimulationResult {
    std::vector<PointRecord> points;
};

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson 95% score interval for failures/trials.
Interval wilson_interval(std::size_t failures, std::size_t trials);

// Independent Bernoulli(p) bits, deterministic in the rng stream.
BinaryVector sample_error(std::size_t n, double p, CounterRng& rng);

// Per-trial error stream: trial t at (seed, p) always sees the same error,
// independent of decoder, thread count, and the position of p in a sweep.
CounterRng trial_stream(std::uint64_t seed, double p, std::size_t trial);

// Bases fed to the pooled MBBP decoder: all subtrees from `partitions` seeded
// permutations of the decoding matrix's check nodes (mbbp_ld), or their
// matched random counterparts (mbbp_random). Empty for plain BP kinds.
std::vector<AugmentedBasis> make_harness_bases(const SparseBinaryMatrix& h_dec,
                                               DecoderKind kind, std::size_t partitions,
                                               std::uint64_t seed);

// The seeded permutation used for partition index i.
std::vector<std::uint32_t> harness_permutation(std::size_t num_checks, std::uint64_t seed,
                                               std::size_t index);

PointRecord run_point(const CssCode& code, const SimulationConfig& cfg, double p);
SimulationResult run_sweep(const CssCode& code, const SimulationConfig& cfg);

struct CompareRow {
    double p = 0.0;
    double tree_mean_ler = 0.0;
    double tree_best_ler = 0.0;
    double random_mean_ler = 0.0;
    double random_best_ler = 0.0;
    std::size_t tree_pooled_failures = 0;
    std::size_t random_pooled_failures = 0;
    std::size_t decoders_per_mode = 0;
};

// Subtree-vs-matched-random study: one single-partition MBBP decoder per
// permutation per mode, all fed the same error streams; reports mean and best
// LER per mode. Each decoder stops at ceil(pooled_target / partitions)
// failures (or max_trials).
std::vector<CompareRow> compare_tree_vs_random(const CssCode& code, const SimulationConfig& cfg,
                                               std::size_t pooled_target_failures);

std::string result_to_csv(const SimulationResult& result);
std::string compare_to_csv(const std::vector<CompareRow>& rows);

} // namespace qldpc
