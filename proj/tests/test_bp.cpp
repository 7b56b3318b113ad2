// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qldpc/bp.hpp"
#include "qldpc/code.hpp"

using namespace qldpc;

namespace {

// Naive per-edge min-sum with the same edge layout, update order, sign
// convention, and clipping as the kernel. No two-min shortcut, no shared
// accumulators; used to pin down Eqs.-level behavior bit for bit.
struct ReferenceBp {
    const TannerGraph& g;
    std::vector<std::uint32_t> edge_var;
    std::vector<std::size_t> check_begin;
    std::vector<std::vector<std::uint32_t>> var_edges;

    explicit ReferenceBp(const TannerGraph& graph) : g(graph) {
        check_begin.resize(g.num_checks() + 1);
        var_edges.resize(g.num_vars());
        for (std::size_t c = 0; c < g.num_checks(); ++c) {
            check_begin[c] = edge_var.size();
            for (auto v : g.check_neighbors(c)) {
                var_edges[v].push_back(static_cast<std::uint32_t>(edge_var.size()));
                edge_var.push_back(v);
            }
        }
        check_begin[g.num_checks()] = edge_var.size();
    }

    static double clip(double x, double c) { return std::clamp(x, -c, c); }

    struct Result {
        std::vector<double> ctv, vtc, posterior;
        std::vector<std::uint8_t> hard;
    };

    Result run(const std::vector<std::uint8_t>& syn, const BpConfig& cfg,
               std::size_t iterations) const {
        const double mu = std::log((1.0 - cfg.channel_p) / cfg.channel_p);
        Result r;
        r.vtc.assign(edge_var.size(), mu);
        r.ctv.assign(edge_var.size(), 0.0);
        auto check_update = [&](std::size_t c) {
            for (std::size_t e = check_begin[c]; e < check_begin[c + 1]; ++e) {
                double best = std::numeric_limits<double>::infinity();
                double sign = syn[c] ? -1.0 : 1.0;
                for (std::size_t o = check_begin[c]; o < check_begin[c + 1]; ++o) {
                    if (o == e)
                        continue;
                    best = std::min(best, std::fabs(r.vtc[o]));
                    if (r.vtc[o] < 0.0)
                        sign = -sign;
                }
                r.ctv[e] = clip(cfg.alpha * sign * best, cfg.clip);
            }
        };
        auto var_update = [&](std::uint32_t v, std::uint32_t edge) {
            double sum = mu;
            for (auto e : var_edges[v])
                if (e != edge)
                    sum += r.ctv[e];
            return clip(sum, cfg.clip);
        };
        for (std::size_t it = 0; it < iterations; ++it) {
            if (cfg.schedule == Schedule::flooding) {
                for (std::size_t c = 0; c < g.num_checks(); ++c)
                    check_update(c);
                for (std::uint32_t v = 0; v < g.num_vars(); ++v)
                    for (auto e : var_edges[v])
                        r.vtc[e] = var_update(v, e);
            } else {
                for (std::uint32_t c = 0; c < g.num_checks(); ++c) {
                    for (std::size_t e = check_begin[c]; e < check_begin[c + 1]; ++e)
                        r.vtc[e] = var_update(edge_var[e], static_cast<std::uint32_t>(e));
                    check_update(c);
                }
            }
        }
        r.posterior.resize(g.num_vars());
        r.hard.resize(g.num_vars());
        for (std::uint32_t v = 0; v < g.num_vars(); ++v) {
            double sum = mu;
            for (auto e : var_edges[v])
                sum += r.ctv[e];
            r.posterior[v] = sum;
            r.hard[v] = (sum < 0.0) ? 1 : 0;
        }
        return r;
    }
};

// Random connected acyclic parity-check matrix: each new check attaches to
// one existing variable and brings at least one fresh variable.
SparseBinaryMatrix random_tree(std::size_t max_vars, CounterRng& rng) {
    std::size_t nv = 0;
    std::vector<std::vector<std::uint32_t>> rows;
    auto fresh = [&]() { return static_cast<std::uint32_t>(nv++); };
    rows.emplace_back();
    const std::size_t d0 = 1 + rng.next_below(3);
    for (std::size_t i = 0; i < std::min(d0, max_vars); ++i)
        rows[0].push_back(fresh());
    while (nv + 1 <= max_vars) {
        if (rows.size() >= 2 && rng.next_double() < 0.2)
            break;
        std::vector<std::uint32_t> row{static_cast<std::uint32_t>(rng.next_below(nv))};
        const std::size_t extra = std::min<std::size_t>(1 + rng.next_below(2), max_vars - nv);
        for (std::size_t i = 0; i < extra; ++i)
            row.push_back(fresh());
        rows.push_back(std::move(row));
    }
    return SparseBinaryMatrix(nv, std::move(rows));
}

BpConfig base_config(double p, Schedule sched, double alpha = 0.875) {
    BpConfig cfg;
    cfg.channel_p = p;
    cfg.schedule = sched;
    cfg.alpha = alpha;
    return cfg;
}

BinaryVector sample_bsc(std::size_t n, double p, CounterRng& rng) {
    std::vector<std::uint32_t> support;
    for (std::uint32_t i = 0; i < n; ++i)
        if (rng.next_double() < p)
            support.push_back(i);
    return BinaryVector(n, std::move(support));
}

} // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(base_config(0.0, Schedule::flooding).validate(), std::invalid_argument);
    CHECK_THROWS_AS(base_config(0.5, Schedule::flooding).validate(), std::invalid_argument);
    CHECK_THROWS_AS(base_config(0.1, Schedule::flooding, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(base_config(0.1, Schedule::flooding, 1.5).validate(), std::invalid_argument);
    BpConfig bad = base_config(0.1, Schedule::flooding);
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    BpConfig bad_min = base_config(0.1, Schedule::flooding);
    bad_min.min_iterations = bad_min.max_iterations + 1;
    CHECK_THROWS_AS(bad_min.validate(), std::invalid_argument);
    bad_min.min_iterations = 0;
    CHECK_THROWS_AS(bad_min.validate(), std::invalid_argument);
    CHECK_NOTHROW(base_config(0.1, Schedule::flooding, 1.0).validate());
}

TEST_CASE("init_state priors and zero messages") {
    auto g = TannerGraph::from_matrix(oracles::example_4x6());
    auto st = init_state(g, base_config(0.1, Schedule::flooding));
    for (auto v : st.prior)
        CHECK(v == doctest::Approx(std::log(9.0)));
    for (auto m : st.check_to_var)
        CHECK(m == 0.0);
    for (auto m : st.var_to_check)
        CHECK(m == 0.0);

    // p -> 0.5 drives the prior to 0+.
    auto st2 = init_state(g, base_config(0.5 - 1e-12, Schedule::flooding));
    CHECK(st2.prior[0] > 0.0);
    CHECK(st2.prior[0] < 1e-9);
}

TEST_CASE("zero syndrome converges to zero at iteration 1") {
    for (auto sched : {Schedule::flooding, Schedule::serial}) {
        auto out = bp_decode(oracles::example_4x6(), BinaryVector(4),
                             base_config(0.1, sched));
        CHECK(out.converged);
        CHECK(out.iterations_used == 1);
        CHECK(out.estimate.is_zero());
    }
}

TEST_CASE("worked example: weight-1 error on v6 is recovered") {
    auto h = oracles::example_4x6();
    BinaryVector e(6, {5});
    auto s = mat_vec_mod2(h, e);
    CHECK(s == BinaryVector(4, {1, 3}));
    // Brute force confirms {5} is the unique weight-1 solution.
    auto best = oracles::min_weight_solution(h.to_dense(), s.to_bits());
    REQUIRE(best == 1);
    CHECK(oracles::count_min_weight_solutions(h.to_dense(), s.to_bits(), 1) == 1);

    for (auto sched : {Schedule::flooding, Schedule::serial}) {
        auto out = bp_decode(h, s, base_config(0.05, sched));
        CHECK(out.converged);
        CHECK(out.estimate == e);
    }
}

TEST_CASE("syndrome length mismatch is rejected") {
    CHECK_THROWS_AS(bp_decode(oracles::example_4x6(), BinaryVector(3),
                              base_config(0.1, Schedule::flooding)),
                    std::invalid_argument);
}

TEST_CASE("kernel matches the scalar reference bit for bit") {
    CounterRng rng(CounterRng::derive(17, 0));
    for (int t = 0; t < 12; ++t) {
        auto h = oracles::random_sparse(5 + rng.next_below(6), 8 + rng.next_below(8), 4, rng);
        auto g = TannerGraph::from_matrix(h);
        ReferenceBp ref(g);
        BpDecoder dec(g);
        for (auto sched : {Schedule::flooding, Schedule::serial}) {
            auto cfg = base_config(0.08, sched);
            for (std::size_t iters : {1u, 2u, 5u}) {
                auto syn = oracles::random_vector(h.num_rows(), 0.3, rng);
                auto want = ref.run(syn.to_bits(), cfg, iters);
                cfg.max_iterations = iters;
                BpState got;
                auto out = dec.decode(syn, cfg, &got);
                if (out.converged)
                    continue; // early halt leaves fewer passes than the reference ran
                CHECK(got.check_to_var == want.ctv);
                CHECK(got.var_to_check == want.vtc);
                CHECK(got.posterior == want.posterior);
                CHECK(out.estimate == BinaryVector::from_bits(want.hard));
            }
        }
    }
}

TEST_CASE("variable update linearity holds when magnitudes stay under the clip") {
    CounterRng rng(CounterRng::derive(17, 1));
    // Rows of weight exactly 3: degree-1 checks would saturate to the clip
    // at once and void the unclipped-linearity precondition.
    std::vector<std::vector<std::uint32_t>> rows(6);
    for (auto& row : rows) {
        while (row.size() < 3) {
            auto c = static_cast<std::uint32_t>(rng.next_below(10));
            if (std::find(row.begin(), row.end(), c) == row.end())
                row.push_back(c);
        }
    }
    SparseBinaryMatrix h(10, std::move(rows));
    auto g = TannerGraph::from_matrix(h);
    BpDecoder dec(g);
    auto cfg = base_config(0.1, Schedule::flooding);
    cfg.max_iterations = 3;
    cfg.clip = 1000.0; // keep sums unsaturated so Eq.-(3) linearity is exact
    auto syn = oracles::random_vector(h.num_rows(), 0.4, rng);
    BpState st;
    dec.decode(syn, cfg, &st);

    // Rebuild each var-to-check message from the exported state.
    std::size_t edge = 0;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> var_edges(g.num_vars());
    for (std::size_t c = 0; c < g.num_checks(); ++c)
        for (auto v : g.check_neighbors(c))
            var_edges[v].emplace_back(edge++, c);
    for (std::uint32_t v = 0; v < g.num_vars(); ++v) {
        for (auto [e, c] : var_edges[v]) {
            double sum = st.prior[v];
            for (auto [e2, c2] : var_edges[v])
                if (e2 != e)
                    sum += st.check_to_var[e2];
            REQUIRE(std::fabs(sum) < cfg.clip);
            CHECK(st.var_to_check[e] == doctest::Approx(sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("tree exactness: converged fixpoint estimates are maximum likelihood") {
    CounterRng rng(CounterRng::derive(17, 2));
    int unique_checked = 0;
    for (int t = 0; t < 50; ++t) {
        auto h = random_tree(10, rng);
        auto dense = h.to_dense();
        auto rep = oracles::check_induced_subgraph(h, [&] {
            std::vector<std::uint32_t> all(h.num_rows());
            for (std::uint32_t i = 0; i < h.num_rows(); ++i)
                all[i] = i;
            return all;
        }());
        REQUIRE(rep.acyclic);

        const std::size_t m = h.num_rows();
        REQUIRE(m <= 10);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
            std::vector<std::uint8_t> sbits(m, 0);
            for (std::size_t i = 0; i < m; ++i)
                sbits[i] = (mask >> i) & 1;
            auto s = BinaryVector::from_bits(sbits);
            auto best = oracles::min_weight_solution(dense, sbits);
            // Fixpoint decode: halting deferred until messages settle, which
            // on a tree takes at most diameter-many passes. The default
            // halt-on-first-match mode can stop on a transient decision that
            // satisfies the syndrome above minimum weight.
            auto fixpoint = [&](Schedule sched, double alpha) {
                auto cfg = base_config(0.05, sched, alpha);
                cfg.min_iterations = h.num_rows() + h.num_cols();
                return bp_decode(h, s, cfg);
            };
            for (auto alpha : {1.0, 0.875}) {
                for (auto sched : {Schedule::flooding, Schedule::serial}) {
                    auto out = fixpoint(sched, alpha);
                    if (!out.converged)
                        continue;
                    REQUIRE(best.has_value());
                    CHECK(mat_vec_mod2(h, out.estimate) == s);
                    CHECK(out.estimate.weight() == *best);
                    // Default early-halt mode stays syndrome-sound.
                    auto early = bp_decode(h, s, base_config(0.05, sched, alpha));
                    if (early.converged)
                        CHECK(mat_vec_mod2(h, early.estimate) == s);
                }
            }
            // Unique minimum-weight solutions must be found exactly.
            if (best && oracles::count_min_weight_solutions(dense, sbits, *best) == 1) {
                ++unique_checked;
                for (auto sched : {Schedule::flooding, Schedule::serial}) {
                    auto out = fixpoint(sched, 1.0);
                    CHECK(out.converged);
                    CHECK(out.estimate.weight() == *best);
                }
            }
        }
    }
    CHECK(unique_checked > 100);
}

TEST_CASE("convergence flag soundness on random loopy graphs") {
    CounterRng rng(CounterRng::derive(17, 3));
    for (int t = 0; t < 200; ++t) {
        auto h = oracles::random_sparse(8, 16, 4, rng);
        auto e = sample_bsc(16, 0.08, rng);
        auto s = mat_vec_mod2(h, e);
        for (auto sched : {Schedule::flooding, Schedule::serial}) {
            auto cfg = base_config(0.08, sched);
            cfg.max_iterations = 30;
            auto out = bp_decode(h, s, cfg);
            if (out.converged)
                CHECK(mat_vec_mod2(h, out.estimate) == s);
        }
    }
}

TEST_CASE("determinism: identical inputs give bit-identical outcomes") {
    CounterRng rng(CounterRng::derive(17, 4));
    auto h = oracles::random_sparse(10, 20, 4, rng);
    auto s = oracles::random_vector(10, 0.3, rng);
    for (auto sched : {Schedule::flooding, Schedule::serial}) {
        auto cfg = base_config(0.07, sched);
        BpState st1, st2;
        auto a = bp_decode(h, s, cfg, &st1);
        auto b = bp_decode(h, s, cfg, &st2);
        CHECK(a.estimate == b.estimate);
        CHECK(a.converged == b.converged);
        CHECK(a.iterations_used == b.iterations_used);
        CHECK(st1.posterior == st2.posterior);
        CHECK(st1.check_to_var == st2.check_to_var);
    }
}

TEST_CASE("serial converges at least as fast as flooding on most bb144 trials") {
    auto code = build_bivariate_bicycle(12, 6, {{3, 0}, {0, 1}, {0, 2}},
                                        {{0, 3}, {1, 0}, {2, 0}}, "bb144");
    BpDecoder dec(TannerGraph::from_matrix(code.hz));
    auto flood = base_config(0.04, Schedule::flooding);
    auto serial = base_config(0.04, Schedule::serial);
    std::size_t serial_no_slower = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        CounterRng stream(CounterRng::derive(99, 0x747269616c, t));
        auto e = sample_bsc(code.n, 0.04, stream);
        auto s = mat_vec_mod2(code.hz, e);
        auto a = dec.decode(s, flood);
        auto b = dec.decode(s, serial);
        if (b.iterations_used <= a.iterations_used)
            ++serial_no_slower;
    }
    CHECK(serial_no_slower >= 600);
}

TEST_CASE("flooding and serial agree on cycle-free matrices") {
    CounterRng rng(CounterRng::derive(17, 5));
    for (int t = 0; t < 10; ++t) {
        auto h = random_tree(10, rng);
        auto e = sample_bsc(h.num_cols(), 0.1, rng);
        auto s = mat_vec_mod2(h, e);
        auto a = bp_decode(h, s, base_config(0.1, Schedule::flooding));
        auto b = bp_decode(h, s, base_config(0.1, Schedule::serial));
        if (a.converged && b.converged)
            CHECK(a.estimate == b.estimate);
    }
}
