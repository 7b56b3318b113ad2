// SPDX-License-Identifier: Apache-2.0
#include "qldpc/subtree.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace qldpc {

SubtreePartition build_partition(const TannerGraph& g, const std::vector<std::uint32_t>& pi) {
    const std::size_t nc = g.num_checks();
    {
        if (pi.size() != nc)
            throw std::invalid_argument("build_partition: permutation size != num_checks");
        std::vector<std::uint8_t> seen(nc, 0);
        for (auto c : pi) {
            if (c >= nc || seen[c])
                throw std::invalid_argument("build_partition: not a permutation of the checks");
            seen[c] = 1;
        }
    }

    SubtreePartition part;
    part.permutation = pi;
    part.check_sets.assign(nc, 0);

    std::vector<std::uint8_t> visited(g.num_vars(), 0); // variables, reset per root
    std::vector<std::uint8_t> tested(nc, 0);            // checks, reset per root
    std::uint32_t s = 0;

    // Every unassigned check in pi order roots a BFS and is admitted with
    // eta = 0, so a single sweep assigns all checks.
    for (auto root : pi) {
        if (part.check_sets[root] != 0)
            continue;
        ++s;
        part.members.emplace_back();
        part.rejections.emplace_back();
        std::fill(visited.begin(), visited.end(), 0);
        std::fill(tested.begin(), tested.end(), 0);

        std::deque<std::uint32_t> queue{root};
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            if (tested[u])
                continue; // duplicate enqueue, already consumed
            tested[u] = 1;
            std::uint32_t eta = 0;
            for (auto v : g.check_neighbors(u))
                eta += visited[v];
            if (eta >= 2) {
                part.rejections.back().emplace_back(u, eta);
                continue;
            }
            part.check_sets[u] = s;
            part.members.back().push_back(u);
            for (auto v : g.check_neighbors(u)) {
                visited[v] = 1;
                for (auto c : g.var_neighbors(v))
                    if (!tested[c] && part.check_sets[c] == 0)
                        queue.push_back(c);
            }
        }
    }
    part.num_subtrees = s;
    return part;
}

LemmaBoundReport verify_lemma_bound(const TannerGraph& g, const SubtreePartition& part) {
    LemmaBoundReport rep;
    auto w = g.check_regular_weight();
    if (!w || *w < 2)
        return rep;
    rep.applicable = true;
    rep.weight = *w;
    rep.bound = static_cast<double>(g.num_vars() - 1) / static_cast<double>(*w - 1);
    for (const auto& m : part.members)
        rep.max_subtree_size = std::max(rep.max_subtree_size, m.size());
    rep.pass = static_cast<double>(rep.max_subtree_size) <= rep.bound;
    return rep;
}

std::vector<AugmentedBasis> build_augmented_bases(const SparseBinaryMatrix& h,
                                                  const SubtreePartition& part) {
    if (part.check_sets.size() != h.num_rows())
        throw std::invalid_argument("build_augmented_bases: partition size != matrix rows");
    std::vector<AugmentedBasis> bases;
    bases.reserve(part.num_subtrees);
    for (std::size_t t = 0; t < part.num_subtrees; ++t) {
        AugmentedBasis basis;
        basis.subtree_index = t + 1;
        basis.original_rows = h.num_rows();
        auto rows = h.rows();
        basis.row_origin.resize(h.num_rows());
        for (std::uint32_t i = 0; i < h.num_rows(); ++i)
            basis.row_origin[i] = i;
        for (auto c : part.members[t]) {
            rows.push_back(h.row(c));
            basis.row_origin.push_back(c);
        }
        basis.matrix = SparseBinaryMatrix(h.num_cols(), std::move(rows));
        bases.push_back(std::move(basis));
    }
    return bases;
}

std::vector<AugmentedBasis> build_random_bases(const SparseBinaryMatrix& h,
                                               const SubtreePartition& part, CounterRng& rng) {
    if (part.check_sets.size() != h.num_rows())
        throw std::invalid_argument("build_random_bases: partition size != matrix rows");
    const auto m = static_cast<std::uint32_t>(h.num_rows());
    std::vector<AugmentedBasis> bases;
    bases.reserve(part.num_subtrees);
    for (std::size_t t = 0; t < part.num_subtrees; ++t) {
        AugmentedBasis basis;
        basis.subtree_index = t + 1;
        basis.original_rows = h.num_rows();
        auto rows = h.rows();
        basis.row_origin.resize(h.num_rows());
        for (std::uint32_t i = 0; i < h.num_rows(); ++i)
            basis.row_origin[i] = i;
        // Same number of duplicated rows as the subtree, distinct within the
        // group, uniform over all rows of H.
        std::vector<std::uint32_t> picks;
        while (picks.size() < part.members[t].size()) {
            auto r = static_cast<std::uint32_t>(rng.next_below(m));
            if (std::find(picks.begin(), picks.end(), r) == picks.end())
                picks.push_back(r);
        }
        for (auto r : picks) {
            rows.push_back(h.row(r));
            basis.row_origin.push_back(r);
        }
        basis.matrix = SparseBinaryMatrix(h.num_cols(), std::move(rows));
        bases.push_back(std::move(basis));
    }
    return bases;
}

BinaryVector replicate_syndrome(const AugmentedBasis& basis, const BinaryVector& s) {
    if (s.length() != basis.original_rows)
        throw std::invalid_argument("replicate_syndrome: syndrome length != original row count");
    std::vector<std::uint32_t> support;
    auto bits = s.to_bits();
    for (std::uint32_t i = 0; i < basis.row_origin.size(); ++i)
        if (bits[basis.row_origin[i]])
            support.push_back(i);
    return BinaryVector(basis.matrix.num_rows(), std::move(support));
}

std::vector<std::uint32_t> interleaved_check_order(const AugmentedBasis& basis) {
    const std::size_t m = basis.original_rows;
    std::vector<std::vector<std::uint32_t>> dups(m);
    for (std::uint32_t r = static_cast<std::uint32_t>(m); r < basis.row_origin.size(); ++r)
        dups[basis.row_origin[r]].push_back(r);
    std::vector<std::uint32_t> order;
    order.reserve(basis.row_origin.size());
    for (std::uint32_t i = 0; i < m; ++i) {
        order.push_back(i);
        for (auto r : dups[i])
            order.push_back(r);
    }
    return order;
}

} // namespace qldpc
