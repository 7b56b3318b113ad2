// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qldpc/code.hpp"
#include "qldpc/subtree.hpp"

using namespace qldpc;

namespace {

// Covered variables of a subtree: all neighbors of its member checks.
std::vector<std::uint8_t> covered_vars(const TannerGraph& g,
                                       const std::vector<std::uint32_t>& members) {
    std::vector<std::uint8_t> covered(g.num_vars(), 0);
    for (auto c : members)
        for (auto v : g.check_neighbors(c))
            covered[v] = 1;
    return covered;
}

void check_partition_invariants(const SparseBinaryMatrix& h, const SubtreePartition& part) {
    auto g = TannerGraph::from_matrix(h);

    // Every check assigned exactly once, and members agree with check_sets.
    std::vector<std::uint32_t> assignment_count(g.num_checks(), 0);
    for (std::size_t t = 0; t < part.num_subtrees; ++t) {
        for (auto c : part.members[t]) {
            ++assignment_count[c];
            CHECK(part.check_sets[c] == t + 1);
        }
    }
    for (std::size_t c = 0; c < g.num_checks(); ++c) {
        CHECK(part.check_sets[c] >= 1);
        CHECK(assignment_count[c] == 1);
    }

    for (std::size_t t = 0; t < part.num_subtrees; ++t) {
        // Acyclic, connected, with the tree edge count.
        auto rep = oracles::check_induced_subgraph(h, part.members[t]);
        CHECK(rep.acyclic);
        CHECK(rep.connected);
        CHECK(rep.num_edges == rep.num_checks + rep.num_vars - 1);

        // Maximality: every outside check touching the covered variables was
        // either assigned before this subtree's BFS ran or would close a
        // cycle (>= 2 covered neighbors).
        auto covered = covered_vars(g, part.members[t]);
        for (std::uint32_t c = 0; c < g.num_checks(); ++c) {
            if (part.check_sets[c] == t + 1)
                continue;
            std::uint32_t overlap = 0;
            for (auto v : g.check_neighbors(c))
                overlap += covered[v];
            if (overlap == 0)
                continue;
            const bool assigned_earlier = part.check_sets[c] <= t;
            CHECK((assigned_earlier || overlap >= 2));
        }
        // Recorded rejection witnesses all carry eta >= 2.
        for (auto [c, eta] : part.rejections[t])
            CHECK(eta >= 2);
    }
}

} // namespace

TEST_CASE("worked example partition under pi = (c1, c4, c2, c3)") {
    auto h = oracles::example_4x6();
    auto g = TannerGraph::from_matrix(h);
    auto part = build_partition(g, {0, 3, 1, 2});

    REQUIRE(part.num_subtrees == 2);
    CHECK(part.members[0] == std::vector<std::uint32_t>{0, 2}); // t1 = {c1, c3}
    CHECK(part.members[1] == std::vector<std::uint32_t>{3, 1}); // t2 = {c4, c2}
    CHECK(part.check_sets == std::vector<std::uint32_t>{1, 2, 1, 2});

    // c2 and c4 rejected from t1, both with eta = 2.
    REQUIRE(part.rejections[0].size() == 2);
    CHECK(part.rejections[0][0] == std::pair<std::uint32_t, std::uint32_t>{1, 2});
    CHECK(part.rejections[0][1] == std::pair<std::uint32_t, std::uint32_t>{3, 2});
    CHECK(part.rejections[1].empty());

    check_partition_invariants(h, part);
}

TEST_CASE("a tree graph yields a single subtree under any permutation") {
    // Star of checks around shared variables: c0-(v0)-c1-(v1)-c2, plus leaves.
    SparseBinaryMatrix h(6, {{0, 3}, {0, 1, 4}, {1, 2, 5}});
    auto g = TannerGraph::from_matrix(h);
    CounterRng rng(CounterRng::derive(13, 0));
    for (int t = 0; t < 6; ++t) {
        auto part = build_partition(g, rng.permutation(3));
        CHECK(part.num_subtrees == 1);
        CHECK(part.members[0].size() == 3);
        check_partition_invariants(h, part);
    }
}

TEST_CASE("invalid permutations are rejected") {
    auto g = TannerGraph::from_matrix(oracles::example_4x6());
    CHECK_THROWS_AS(build_partition(g, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(build_partition(g, {0, 1, 2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(build_partition(g, {0, 1, 2, 4}), std::invalid_argument);
}

TEST_CASE("random graphs: 50 permutations keep every invariant") {
    CounterRng rng(CounterRng::derive(13, 1));
    auto h = oracles::random_sparse(30, 45, 4, rng);
    auto g = TannerGraph::from_matrix(h);
    for (int t = 0; t < 50; ++t) {
        auto part = build_partition(g, rng.permutation(30));
        check_partition_invariants(h, part);
    }
}

TEST_CASE("identical (H, pi) gives identical partitions") {
    CounterRng rng(CounterRng::derive(13, 2));
    auto h = oracles::random_sparse(25, 40, 5, rng);
    auto g = TannerGraph::from_matrix(h);
    auto pi = rng.permutation(25);
    auto a = build_partition(g, pi);
    auto b = build_partition(g, pi);
    CHECK(a.check_sets == b.check_sets);
    CHECK(a.members == b.members);
    CHECK(a.rejections == b.rejections);
    CHECK(a.num_subtrees == b.num_subtrees);
}

TEST_CASE("lemma bound on bb144 hz over random permutations") {
    auto code = build_bivariate_bicycle(12, 6, {{3, 0}, {0, 1}, {0, 2}},
                                        {{0, 3}, {1, 0}, {2, 0}}, "bb144");
    auto g = TannerGraph::from_matrix(code.hz);
    REQUIRE(g.check_regular_weight() == 6);
    CounterRng rng(CounterRng::derive(13, 3));
    for (int t = 0; t < 30; ++t) {
        auto part = build_partition(g, rng.permutation(72));
        auto rep = verify_lemma_bound(g, part);
        CHECK(rep.applicable);
        CHECK(rep.weight == 6);
        CHECK(rep.bound == doctest::Approx(143.0 / 5.0));
        CHECK(rep.pass);
        CHECK(rep.max_subtree_size <= 28);
        // w = 6 with |V_v| = 2|V_c|: the bound is within 0.4 |V_c|.
        CHECK(rep.bound <= 0.4 * g.num_checks());
    }
}

TEST_CASE("lemma bound edge cases") {
    // Single check: one subtree of size 1.
    SparseBinaryMatrix h(3, {{0, 1, 2}});
    auto g = TannerGraph::from_matrix(h);
    auto part = build_partition(g, {0});
    auto rep = verify_lemma_bound(g, part);
    CHECK(rep.applicable);
    CHECK(rep.max_subtree_size == 1);
    CHECK(rep.pass);

    // Irregular graph: not applicable.
    SparseBinaryMatrix irr(4, {{0, 1}, {0, 1, 2}});
    auto girr = TannerGraph::from_matrix(irr);
    auto pirr = build_partition(girr, {0, 1});
    CHECK_FALSE(verify_lemma_bound(girr, pirr).applicable);
}

TEST_CASE("augmented bases reproduce the worked example's printed matrices") {
    auto h = oracles::example_4x6();
    auto g = TannerGraph::from_matrix(h);
    auto part = build_partition(g, {0, 3, 1, 2});
    auto bases = build_augmented_bases(h, part);
    REQUIRE(bases.size() == 2);

    const auto& t1 = bases[0];
    CHECK(t1.matrix.num_rows() == 6);
    CHECK(t1.matrix.row(4) == std::vector<std::uint32_t>{0, 1, 2}); // c1
    CHECK(t1.matrix.row(5) == std::vector<std::uint32_t>{0, 3, 4}); // c3
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(t1.matrix.row(i) == h.row(i));
    CHECK(t1.row_origin == std::vector<std::uint32_t>{0, 1, 2, 3, 0, 2});

    const auto& t2 = bases[1];
    CHECK(t2.matrix.row(4) == std::vector<std::uint32_t>{3, 4, 5}); // c4 first
    CHECK(t2.matrix.row(5) == std::vector<std::uint32_t>{1, 2, 5}); // then c2
    CHECK(t2.row_origin == std::vector<std::uint32_t>{0, 1, 2, 3, 3, 1});
}

TEST_CASE("subtree of size 1 appends exactly one duplicated row") {
    // Two checks sharing two variables: the second check is always rejected.
    SparseBinaryMatrix h(3, {{0, 1}, {0, 1, 2}});
    auto g = TannerGraph::from_matrix(h);
    auto part = build_partition(g, {0, 1});
    REQUIRE(part.num_subtrees == 2);
    auto bases = build_augmented_bases(h, part);
    CHECK(bases[0].matrix.num_rows() == 3);
    CHECK(bases[1].matrix.num_rows() == 3);
}

TEST_CASE("replicate_syndrome") {
    auto h = oracles::example_4x6();
    auto g = TannerGraph::from_matrix(h);
    auto bases = build_augmented_bases(h, build_partition(g, {0, 3, 1, 2}));

    // Zero syndrome extends to zero.
    CHECK(replicate_syndrome(bases[0], BinaryVector(4)) == BinaryVector(6));

    // s = (1,0,0,0) over t1 (origins 0,1,2,3,0,2) -> (1,0,0,0,1,0).
    auto ext = replicate_syndrome(bases[0], BinaryVector(4, {0}));
    CHECK(ext == BinaryVector(6, {0, 4}));

    CHECK_THROWS_AS(replicate_syndrome(bases[0], BinaryVector(5)), std::invalid_argument);

    // H^(t) e == replicate(H e) for random e.
    CounterRng rng(CounterRng::derive(13, 4));
    for (int t = 0; t < 10; ++t) {
        auto e = oracles::random_vector(6, 0.4, rng);
        for (const auto& basis : bases)
            CHECK(mat_vec_mod2(basis.matrix, e) ==
                  replicate_syndrome(basis, mat_vec_mod2(h, e)));
    }
}

TEST_CASE("matched random bases preserve the group structure") {
    auto code = build_bivariate_bicycle(6, 6, {{3, 0}, {0, 1}, {0, 2}},
                                        {{0, 3}, {1, 0}, {2, 0}}, "bb72");
    auto g = TannerGraph::from_matrix(code.hz);
    CounterRng prng(CounterRng::derive(13, 5));
    auto part = build_partition(g, prng.permutation(36));
    auto tree_bases = build_augmented_bases(code.hz, part);
    CounterRng rng(CounterRng::derive(13, 6));
    auto rand_bases = build_random_bases(code.hz, part, rng);

    REQUIRE(rand_bases.size() == tree_bases.size());
    for (std::size_t i = 0; i < rand_bases.size(); ++i) {
        CHECK(rand_bases[i].matrix.num_rows() == tree_bases[i].matrix.num_rows());
        CHECK(rand_bases[i].original_rows == code.hz.num_rows());
        // Duplicated rows are distinct within the group and are rows of H.
        std::vector<std::uint32_t> dups(rand_bases[i].row_origin.begin() + code.hz.num_rows(),
                                        rand_bases[i].row_origin.end());
        auto sorted = dups;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (std::size_t r = 0; r < dups.size(); ++r)
            CHECK(rand_bases[i].matrix.row(code.hz.num_rows() + r) == code.hz.row(dups[r]));
    }

    // Determinism in the rng stream.
    CounterRng rng2(CounterRng::derive(13, 6));
    auto again = build_random_bases(code.hz, part, rng2);
    for (std::size_t i = 0; i < again.size(); ++i)
        CHECK(again[i].row_origin == rand_bases[i].row_origin);
}

TEST_CASE("interleaved check order puts duplicates right after their originals") {
    auto h = oracles::example_4x6();
    auto g = TannerGraph::from_matrix(h);
    auto bases = build_augmented_bases(h, build_partition(g, {0, 3, 1, 2}));
    // t1 origins: 0,1,2,3,0,2 -> order 0,4,1,2,5,3.
    CHECK(interleaved_check_order(bases[0]) == std::vector<std::uint32_t>{0, 4, 1, 2, 5, 3});
}

TEST_CASE("partition/matrix size mismatch is rejected") {
    auto h = oracles::example_4x6();
    auto g = TannerGraph::from_matrix(h);
    auto part = build_partition(g, {0, 3, 1, 2});
    SparseBinaryMatrix other(6, {{0, 1}});
    CHECK_THROWS_AS(build_augmented_bases(other, part), std::invalid_argument);
}
