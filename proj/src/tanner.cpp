// SPDX-License-Identifier: Apache-2.0
#include "qldpc/tanner.hpp"

#include <algorithm>
#include <ostream>

namespace qldpc {

TannerGraph TannerGraph::from_matrix(const SparseBinaryMatrix& h) {
    TannerGraph g;
    g.check_neighbors_ = h.rows();
    g.var_neighbors_.resize(h.num_cols());
    for (std::size_t i = 0; i < h.num_rows(); ++i)
        for (auto c : h.row(i))
            g.var_neighbors_[c].push_back(static_cast<std::uint32_t>(i));
    for (const auto& cn : g.check_neighbors_) {
        g.num_edges_ += cn.size();
        g.max_check_degree_ = std::max(g.max_check_degree_, cn.size());
    }
    for (const auto& vn : g.var_neighbors_)
        g.max_var_degree_ = std::max(g.max_var_degree_, vn.size());
    return g;
}

std::optional<std::size_t> TannerGraph::check_regular_weight() const {
    if (check_neighbors_.empty())
        return std::nullopt;
    const std::size_t w = check_neighbors_.front().size();
    for (const auto& cn : check_neighbors_)
        if (cn.size() != w)
            return std::nullopt;
    return w;
}

SparseBinaryMatrix TannerGraph::to_matrix() const {
    return SparseBinaryMatrix(num_vars(), check_neighbors_);
}

void TannerGraph::write_dot(std::ostream& out) const {
    out << "graph tanner {\n";
    out << "  rankdir=TB;\n";
    for (std::size_t c = 0; c < num_checks(); ++c)
        out << "  c" << c + 1 << " [shape=box];\n";
    for (std::size_t v = 0; v < num_vars(); ++v)
        out << "  v" << v + 1 << " [shape=circle];\n";
    for (std::size_t c = 0; c < num_checks(); ++c)
        for (auto v : check_neighbors_[c])
            out << "  c" << c + 1 << " -- v" << v + 1 << ";\n";
    out << "}\n";
}

} // namespace qldpc
