// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/tanner.hpp"

namespace qldpc {

// Partition of the check nodes into maximal cycle-free subtrees, obtained by
// BFS in root order pi with the eta <= 1 admission rule: a dequeued check
// joins the current subtree only if at most one of its variable neighbors is
// already covered.
struct SubtreePartition {
    // 1-based subtree index per check; every check is assigned.
    std::vector<std::uint32_t> check_sets;
    std::size_t num_subtrees = 0;
    // Root-order permutation used to build the partition.
    std::vector<std::uint32_t> permutation;
    // Per subtree (0-based), member checks in BFS admission order. The first
    // member is the subtree's root.
    std::vector<std::vector<std::uint32_t>> members;
    // Per subtree, the (check, eta) pairs rejected with eta >= 2 during its
    // BFS; these witness maximality.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rejections;
};

SubtreePartition build_partition(const TannerGraph& g, const std::vector<std::uint32_t>& pi);

// Subtree size bound for check-regular graphs: |t| <= (|V_v| - 1)/(w - 1).
struct LemmaBoundReport {
    bool applicable = false; // false when the graph is not check-regular
    std::size_t weight = 0;
    std::size_t max_subtree_size = 0;
    double bound = 0.0;
    bool pass = false;
};

LemmaBoundReport verify_lemma_bound(const TannerGraph& g, const SubtreePartition& part);

// One redundant parity-check representation: the original H with one
// subtree's rows appended below it.
struct AugmentedBasis {
    std::size_t subtree_index = 0; // 1-based, matching check_sets
    SparseBinaryMatrix matrix;     // [H; H_t]
    std::size_t original_rows = 0; // H.num_rows()
    // Original H row index for every row of matrix; identity on the first
    // original_rows entries.
    std::vector<std::uint32_t> row_origin;
};

// One basis per subtree. Appended rows follow the subtree's BFS admission
// order, matching the worked example's printed augmented matrices.
std::vector<AugmentedBasis> build_augmented_bases(const SparseBinaryMatrix& h,
                                                  const SubtreePartition& part);

// Matched random baseline: same number of groups and same number of
// duplicated rows per group, but rows drawn uniformly (distinct within each
// group) instead of subtree members.
std::vector<AugmentedBasis> build_random_bases(const SparseBinaryMatrix& h,
                                               const SubtreePartition& part, CounterRng& rng);

// Extends a syndrome over H to the augmented matrix by replicating the bits
// of duplicated rows.
BinaryVector replicate_syndrome(const AugmentedBasis& basis, const BinaryVector& s);

// Serial-schedule check order that visits each original row immediately
// followed by its duplicates, instead of all originals first.
std::vector<std::uint32_t> interleaved_check_order(const AugmentedBasis& basis);

} // namespace qldpc
