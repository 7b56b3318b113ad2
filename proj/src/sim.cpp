// SPDX-License-Identifier: Apache-2.0
#include "qldpc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <thread>

namespace qldpc {

namespace {

// Fixed stream tags so every consumer of the master seed draws from a
// distinct substream.
constexpr std::uint64_t kPermTag = 0x7375627472656573ULL;
constexpr std::uint64_t kRandRowsTag = 0x72616e64726f7773ULL;
constexpr std::uint64_t kTrialTag = 0x747269616c626974ULL;

std::size_t resolve_threads(std::size_t requested) {
    if (requested)
        return requested;
    const auto hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

} // namespace

void SimulationConfig::validate() const {
    if (p_values.empty())
        throw std::invalid_argument("SimulationConfig: p_values must be non-empty");
    for (auto p : p_values)
        if (!(p > 0.0) || !(p < 0.5))
            throw std::invalid_argument("SimulationConfig: every p must be in (0, 0.5)");
    if (target_failures < 1)
        throw std::invalid_argument("SimulationConfig: target_failures must be >= 1");
    if (max_trials < 1)
        throw std::invalid_argument("SimulationConfig: max_trials must be >= 1");
    if (decoder == DecoderKind::mbbp_ld || decoder == DecoderKind::mbbp_random) {
        if (partitions < 1)
            throw std::invalid_argument("SimulationConfig: partitions must be >= 1 for MBBP");
        if (pooled_partitions < 1 || pooled_partitions > partitions)
            throw std::invalid_argument(
                "SimulationConfig: pooled_partitions must be in [1, partitions]");
    }
}

Interval wilson_interval(std::size_t failures, std::size_t trials) {
    if (trials == 0)
        return {0.0, 1.0};
    const double z = 1.959963984540054; // two-sided 95%
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    // Exact endpoints at the boundary counts (the formula leaves rounding dust).
    if (failures == 0)
        ci.low = 0.0;
    if (failures == trials)
        ci.high = 1.0;
    return ci;
}

BinaryVector sample_error(std::size_t n, double p, CounterRng& rng) {
    if (!(p > 0.0) || !(p < 0.5))
        throw std::invalid_argument("sample_error: p must be in (0, 0.5)");
    std::vector<std::uint32_t> support;
    for (std::uint32_t i = 0; i < n; ++i)
        if (rng.next_double() < p)
            support.push_back(i);
    return BinaryVector(n, std::move(support));
}

CounterRng trial_stream(std::uint64_t seed, double p, std::size_t trial) {
    return CounterRng(CounterRng::derive(seed, kTrialTag, double_bits(p), trial));
}

std::vector<std::uint32_t> harness_permutation(std::size_t num_checks, std::uint64_t seed,
                                               std::size_t index) {
    CounterRng rng(CounterRng::derive(seed, kPermTag, index));
    return rng.permutation(static_cast<std::uint32_t>(num_checks));
}

std::vector<AugmentedBasis> make_harness_bases(const SparseBinaryMatrix& h_dec,
                                               DecoderKind kind, std::size_t partitions,
                                               std::uint64_t seed) {
    if (kind == DecoderKind::bp_flooding || kind == DecoderKind::bp_serial)
        return {};
    auto g = TannerGraph::from_matrix(h_dec);
    std::vector<AugmentedBasis> bases;
    for (std::size_t i = 0; i < partitions; ++i) {
        auto part = build_partition(g, harness_permutation(g.num_checks(), seed, i));
        std::vector<AugmentedBasis> group;
        if (kind == DecoderKind::mbbp_ld) {
            group = build_augmented_bases(h_dec, part);
        } else {
            CounterRng rng(CounterRng::derive(seed, kRandRowsTag, i));
            group = build_random_bases(h_dec, part, rng);
        }
        for (auto& b : group)
            bases.push_back(std::move(b));
    }
    return bases;
}

namespace {

struct TrialStats {
    bool failure = false;
    std::size_t total_iters = 0;
    std::size_t k_max = 0;
};

// Plain-BP or MBBP front end with per-point config override.
class DecodeEngine {
public:
    DecodeEngine(const SparseBinaryMatrix& h_dec, DecoderKind kind,
                 std::vector<AugmentedBasis> bases, BpConfig cfg) {
        if (kind == DecoderKind::bp_flooding || kind == DecoderKind::bp_serial) {
            plain_.emplace(TannerGraph::from_matrix(h_dec));
        } else {
            cfg.channel_p = 0.25; // placeholder; decode overrides per point
            mbbp_.emplace(h_dec, std::move(bases), cfg);
        }
    }

    TrialStats decode_trial(const BinaryVector& syndrome, const BpConfig& cfg,
                            BinaryVector* estimate, bool* converged) const {
        TrialStats st;
        if (plain_) {
            auto out = plain_->decode(syndrome, cfg);
            st.total_iters = out.iterations_used;
            st.k_max = out.iterations_used;
            *converged = out.converged;
            *estimate = std::move(out.estimate);
        } else {
            auto out = mbbp_->decode(syndrome, cfg);
            st.total_iters = out.total_iterations;
            st.k_max = out.k_max;
            *converged = out.any_converged;
            *estimate = std::move(out.estimate);
        }
        return st;
    }

    std::size_t instances() const { return plain_ ? 1 : mbbp_->num_instances(); }

private:
    std::optional<BpDecoder> plain_;
    std::optional<MbbpDecoder> mbbp_;
};

BpConfig point_config(const SimulationConfig& cfg, double p) {
    BpConfig bp = cfg.bp;
    bp.channel_p = p;
    switch (cfg.decoder) {
    case DecoderKind::bp_flooding:
        bp.schedule = Schedule::flooding;
        break;
    case DecoderKind::bp_serial:
    case DecoderKind::mbbp_ld:
    case DecoderKind::mbbp_random:
        bp.schedule = Schedule::serial;
        break;
    }
    return bp;
}

// Runs trials 0, 1, 2, ... until the failure target is met, counting a trial
// only once all lower-index trials are resolved. The outcome is a pure
// function of (seed, p, trial index), so any thread count and block size
// produce identical records.
PointRecord run_trials(const DecodeEngine& engine, const SparseBinaryMatrix& h_dec,
                       const RowSpaceBasis& stabilizers, const SimulationConfig& cfg,
                       double p) {
    const BpConfig bp = point_config(cfg, p);
    bp.validate();
    const std::size_t n = h_dec.num_cols();
    const std::size_t nthreads = resolve_threads(cfg.threads);
    const std::size_t block = std::max<std::size_t>(64, nthreads * 32);

    auto eval = [&](std::size_t trial) {
        auto stream = trial_stream(cfg.seed, p, trial);
        auto error = sample_error(n, p, stream);
        auto syndrome = mat_vec_mod2(h_dec, error);
        BinaryVector estimate;
        bool converged = false;
        auto st = engine.decode_trial(syndrome, bp, &estimate, &converged);
        if (cfg.failure_rule == FailureRule::nonconvergence)
            st.failure = !converged;
        else
            st.failure = is_logical_failure(h_dec, stabilizers, error, estimate, syndrome);
        return st;
    };

    PointRecord rec;
    rec.p = p;
    rec.instances = engine.instances();
    std::size_t sum_total = 0, sum_kmax = 0;
    std::vector<TrialStats> buf;
    bool done = false;
    for (std::size_t start = 0; start < cfg.max_trials && !done; start += buf.size()) {
        const std::size_t count = std::min(block, cfg.max_trials - start);
        buf.assign(count, TrialStats{});
        if (nthreads <= 1 || count < 2 * nthreads) {
            for (std::size_t i = 0; i < count; ++i)
                buf[i] = eval(start + i);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (count + nthreads - 1) / nthreads;
            for (std::size_t w = 0; w < nthreads; ++w) {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(count, lo + chunk);
                if (lo >= hi)
                    break;
                workers.emplace_back([&, lo, hi] {
                    for (std::size_t i = lo; i < hi; ++i)
                        buf[i] = eval(start + i);
                });
            }
            for (auto& t : workers)
                t.join();
        }
        for (const auto& st : buf) {
            ++rec.trials;
            sum_total += st.total_iters;
            sum_kmax += st.k_max;
            if (st.failure)
                ++rec.failures;
            if (rec.failures >= cfg.target_failures) {
                done = true;
                break;
            }
        }
    }

    rec.ler = rec.trials ? static_cast<double>(rec.failures) / rec.trials : 0.0;
    auto ci = wilson_interval(rec.failures, rec.trials);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    if (rec.trials) {
        rec.avg_iters_total = static_cast<double>(sum_total) / rec.trials;
        rec.avg_iters_per_instance = rec.avg_iters_total / rec.instances;
        rec.avg_k_max = static_cast<double>(sum_kmax) / rec.trials;
    }
    return rec;
}

} // namespace

PointRecord run_point(const CssCode& code, const SimulationConfig& cfg, double p) {
    cfg.validate();
    const auto& h_dec = cfg.swap_xz ? code.hx : code.hz;
    const auto& h_stab = cfg.swap_xz ? code.hz : code.hx;
    RowSpaceBasis stabilizers(h_stab);
    DecodeEngine engine(h_dec, cfg.decoder,
                        make_harness_bases(h_dec, cfg.decoder, cfg.pooled_partitions, cfg.seed),
                        cfg.bp);
    return run_trials(engine, h_dec, stabilizers, cfg, p);
}

SimulationResult run_sweep(const CssCode& code, const SimulationConfig& cfg) {
    cfg.validate();
    const auto& h_dec = cfg.swap_xz ? code.hx : code.hz;
    const auto& h_stab = cfg.swap_xz ? code.hz : code.hx;
    RowSpaceBasis stabilizers(h_stab);
    DecodeEngine engine(h_dec, cfg.decoder,
                        make_harness_bases(h_dec, cfg.decoder, cfg.pooled_partitions, cfg.seed),
                        cfg.bp);
    SimulationResult result;
    for (auto p : cfg.p_values)
        result.points.push_back(run_trials(engine, h_dec, stabilizers, cfg, p));
    return result;
}

std::vector<CompareRow> compare_tree_vs_random(const CssCode& code, const SimulationConfig& cfg,
                                               std::size_t pooled_target_failures) {
    cfg.validate();
    if (pooled_target_failures < 1)
        throw std::invalid_argument("compare_tree_vs_random: pooled target must be >= 1");
    const auto& h_dec = cfg.swap_xz ? code.hx : code.hz;
    const auto& h_stab = cfg.swap_xz ? code.hz : code.hx;
    RowSpaceBasis stabilizers(h_stab);
    auto g = TannerGraph::from_matrix(h_dec);

    // One single-partition decoder per permutation per mode, shared across
    // all p values. Tree and random modes reuse the same partitions.
    std::vector<DecodeEngine> tree_engines, random_engines;
    tree_engines.reserve(cfg.partitions);
    random_engines.reserve(cfg.partitions);
    for (std::size_t i = 0; i < cfg.partitions; ++i) {
        auto part = build_partition(g, harness_permutation(g.num_checks(), cfg.seed, i));
        tree_engines.emplace_back(h_dec, DecoderKind::mbbp_ld,
                                  build_augmented_bases(h_dec, part), cfg.bp);
        CounterRng rng(CounterRng::derive(cfg.seed, kRandRowsTag, i));
        random_engines.emplace_back(h_dec, DecoderKind::mbbp_random,
                                    build_random_bases(h_dec, part, rng), cfg.bp);
    }

    SimulationConfig per_decoder = cfg;
    per_decoder.target_failures =
        (pooled_target_failures + cfg.partitions - 1) / cfg.partitions;

    std::vector<CompareRow> rows;
    for (auto p : cfg.p_values) {
        CompareRow row;
        row.p = p;
        row.decoders_per_mode = cfg.partitions;
        double tree_sum = 0.0, rand_sum = 0.0;
        double tree_best = 1.0, rand_best = 1.0;
        for (std::size_t i = 0; i < cfg.partitions; ++i) {
            auto tr = run_trials(tree_engines[i], h_dec, stabilizers, per_decoder, p);
            tree_sum += tr.ler;
            tree_best = std::min(tree_best, tr.ler);
            row.tree_pooled_failures += tr.failures;
            auto rr = run_trials(random_engines[i], h_dec, stabilizers, per_decoder, p);
            rand_sum += rr.ler;
            rand_best = std::min(rand_best, rr.ler);
            row.random_pooled_failures += rr.failures;
        }
        row.tree_mean_ler = tree_sum / cfg.partitions;
        row.tree_best_ler = tree_best;
        row.random_mean_ler = rand_sum / cfg.partitions;
        row.random_best_ler = rand_best;
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string format_line(const PointRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.10g,%zu,%zu,%.6e,%.6e,%.6e,%.4f,%.4f,%.4f\n", r.p,
                  r.trials, r.failures, r.ler, r.ci_low, r.ci_high, r.avg_iters_total,
                  r.avg_iters_per_instance, r.avg_k_max);
    return buf;
}

} // namespace

std::string result_to_csv(const SimulationResult& result) {
    std::string csv =
        "p,trials,failures,ler,ci_low,ci_high,avg_iters_total,avg_iters_per_instance,"
        "avg_k_max\n";
    for (const auto& r : result.points)
        csv += format_line(r);
    return csv;
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
    std::string csv =
        "p,tree_mean_ler,tree_best_ler,random_mean_ler,random_best_ler,"
        "tree_pooled_failures,random_pooled_failures,decoders_per_mode\n";
    for (const auto& r : rows) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.10g,%.6e,%.6e,%.6e,%.6e,%zu,%zu,%zu\n", r.p,
                      r.tree_mean_ler, r.tree_best_ler, r.random_mean_ler, r.random_best_ler,
                      r.tree_pooled_failures, r.random_pooled_failures, r.decoders_per_mode);
        csv += buf;
    }
    return csv;
}

} // namespace qldpc
