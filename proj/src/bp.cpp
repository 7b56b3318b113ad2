// SPDX-License-Identifier: Apache-2.0
#include "qldpc/bp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qldpc {

void BpConfig::validate() const {
    if (max_iterations < 1)
        throw std::invalid_argument("BpConfig: max_iterations must be >= 1");
    if (min_iterations < 1 || min_iterations > max_iterations)
        throw std::invalid_argument("BpConfig: min_iterations must be in [1, max_iterations]");
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("BpConfig: alpha must be in (0, 1]");
    if (!(channel_p > 0.0) || !(channel_p < 0.5))
        throw std::invalid_argument("BpConfig: channel_p must be in (0, 0.5)");
    if (!(clip > 0.0))
        throw std::invalid_argument("BpConfig: clip must be positive");
}

BpState init_state(const TannerGraph& g, const BpConfig& cfg) {
    cfg.validate();
    const double mu = std::log((1.0 - cfg.channel_p) / cfg.channel_p);
    BpState st;
    st.prior.assign(g.num_vars(), mu);
    st.check_to_var.assign(g.num_edges(), 0.0);
    st.var_to_check.assign(g.num_edges(), 0.0);
    st.posterior = st.prior;
    return st;
}

BpDecoder::BpDecoder(TannerGraph g, std::vector<std::uint32_t> serial_check_order)
    : graph_(std::move(g)), serial_order_(std::move(serial_check_order)) {
    const std::size_t nc = graph_.num_checks();
    check_edge_begin_.resize(nc + 1);
    edge_var_.reserve(graph_.num_edges());
    var_edges_.resize(graph_.num_vars());
    for (std::size_t c = 0; c < nc; ++c) {
        check_edge_begin_[c] = edge_var_.size();
        for (auto v : graph_.check_neighbors(c)) {
            var_edges_[v].push_back(static_cast<std::uint32_t>(edge_var_.size()));
            edge_var_.push_back(v);
        }
    }
    check_edge_begin_[nc] = edge_var_.size();

    if (serial_order_.empty()) {
        serial_order_.resize(nc);
        for (std::uint32_t c = 0; c < nc; ++c)
            serial_order_[c] = c;
    } else {
        std::vector<std::uint8_t> seen(nc, 0);
        for (auto c : serial_order_) {
            if (c >= nc || seen[c])
                throw std::invalid_argument("BpDecoder: serial order is not a check permutation");
            seen[c] = 1;
        }
        if (serial_order_.size() != nc)
            throw std::invalid_argument("BpDecoder: serial order is not a check permutation");
    }
}

namespace {

inline double clip_llr(double x, double clip) {
    return std::clamp(x, -clip, clip);
}

} // namespace

BpOutcome BpDecoder::decode(const BinaryVector& syndrome, const BpConfig& cfg,
                            BpState* final_state) const {
    cfg.validate();
    const std::size_t nc = graph_.num_checks();
    const std::size_t nv = graph_.num_vars();
    if (syndrome.length() != nc)
        throw std::invalid_argument("BpDecoder::decode: syndrome length != check count");

    const double mu = std::log((1.0 - cfg.channel_p) / cfg.channel_p);
    const auto syn = syndrome.to_bits();

    std::vector<double> vtc(edge_var_.size(), mu); // first check pass sees the prior
    std::vector<double> ctv(edge_var_.size(), 0.0);
    std::vector<double> posterior(nv, mu);
    std::vector<std::uint8_t> hard(nv, 0);

    // Normalized min-sum check update from the current var-to-check values;
    // a satisfied check (syndrome 0) keeps the sign product, an unsatisfied
    // one flips it.
    auto update_check = [&](std::size_t c) {
        const std::size_t begin = check_edge_begin_[c];
        const std::size_t end = check_edge_begin_[c + 1];
        if (begin == end)
            return;
        double min1 = std::numeric_limits<double>::infinity();
        double min2 = std::numeric_limits<double>::infinity();
        std::size_t argmin = begin;
        unsigned neg = syn[c] ? 1u : 0u;
        for (std::size_t e = begin; e < end; ++e) {
            const double m = vtc[e];
            neg ^= (m < 0.0) ? 1u : 0u;
            const double a = std::fabs(m);
            if (a < min1) {
                min2 = min1;
                min1 = a;
                argmin = e;
            } else if (a < min2) {
                min2 = a;
            }
        }
        for (std::size_t e = begin; e < end; ++e) {
            const double other = (e == argmin) ? min2 : min1;
            const unsigned sgn = neg ^ ((vtc[e] < 0.0) ? 1u : 0u);
            ctv[e] = clip_llr(sgn ? -cfg.alpha * other : cfg.alpha * other, cfg.clip);
        }
    };

    // Extrinsic var-to-check for one edge, summed in ascending edge order.
    auto var_message = [&](std::uint32_t v, std::uint32_t edge) {
        double sum = mu;
        for (auto e : var_edges_[v])
            if (e != edge)
                sum += ctv[e];
        return clip_llr(sum, cfg.clip);
    };

    BpOutcome out;
    out.iterations_used = cfg.max_iterations;
    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        if (cfg.schedule == Schedule::flooding) {
            for (std::size_t c = 0; c < nc; ++c)
                update_check(c);
            for (std::uint32_t v = 0; v < nv; ++v)
                for (auto e : var_edges_[v])
                    vtc[e] = var_message(v, e);
        } else {
            for (auto c : serial_order_) {
                for (std::size_t e = check_edge_begin_[c]; e < check_edge_begin_[c + 1]; ++e)
                    vtc[e] = var_message(edge_var_[e], static_cast<std::uint32_t>(e));
                update_check(c);
            }
        }

        // Posterior, hard decision (ties to 0), halting test.
        for (std::uint32_t v = 0; v < nv; ++v) {
            double sum = mu;
            for (auto e : var_edges_[v])
                sum += ctv[e];
            posterior[v] = sum;
            hard[v] = (sum < 0.0) ? 1 : 0;
        }
        if (iter < cfg.min_iterations)
            continue;
        bool satisfied = true;
        for (std::size_t c = 0; c < nc && satisfied; ++c) {
            unsigned parity = 0;
            for (std::size_t e = check_edge_begin_[c]; e < check_edge_begin_[c + 1]; ++e)
                parity ^= hard[edge_var_[e]];
            satisfied = (parity == syn[c]);
        }
        if (satisfied) {
            out.converged = true;
            out.iterations_used = iter;
            break;
        }
    }

    out.estimate = BinaryVector::from_bits(hard);
    if (final_state) {
        final_state->prior.assign(nv, mu);
        final_state->check_to_var = std::move(ctv);
        final_state->var_to_check = std::move(vtc);
        final_state->posterior = std::move(posterior);
    }
    return out;
}

BpOutcome bp_decode(const SparseBinaryMatrix& h, const BinaryVector& syndrome,
                    const BpConfig& cfg, BpState* final_state) {
    return BpDecoder(TannerGraph::from_matrix(h)).decode(syndrome, cfg, final_state);
}

} // namespace qldpc
