// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

// Bipartite view over a parity-check matrix. Check node i is row i and
// variable node j is column j; no relabeling, so subtree assignments line up
// with matrix row indices.
class TannerGraph {
public:
    static TannerGraph from_matrix(const SparseBinaryMatrix& h);

    std::size_t num_checks() const { return check_neighbors_.size(); }
    std::size_t num_vars() const { return var_neighbors_.size(); }
    std::size_t num_edges() const { return num_edges_; }

    const std::vector<std::uint32_t>& check_neighbors(std::size_t c) const {
        return check_neighbors_[c];
    }
    const std::vector<std::uint32_t>& var_neighbors(std::size_t v) const {
        return var_neighbors_[v];
    }

    std::size_t max_check_degree() const { return max_check_degree_; }
    std::size_t max_var_degree() const { return max_var_degree_; }

    // The common check degree w, or nullopt if check degrees differ.
    std::optional<std::size_t> check_regular_weight() const;

    SparseBinaryMatrix to_matrix() const;

    // Graphviz rendering: checks as boxes, variables as circles, 1-based
    // labels c1../v1.. as in the usual Tanner-graph figures.
    void write_dot(std::ostream& out) const;

private:
    std::vector<std::vector<std::uint32_t>> check_neighbors_;
    std::vector<std::vector<std::uint32_t>> var_neighbors_;
    std::size_t num_edges_ = 0;
    std::size_t max_check_degree_ = 0;
    std::size_t max_var_degree_ = 0;
};

} // namespace qldpc
