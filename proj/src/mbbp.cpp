// SPDX-License-Identifier: Apache-2.0
#include "qldpc/mbbp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qldpc {

BinaryVector fws_select(const CandidateList& list) {
    if (list.empty())
        throw std::invalid_argument("fws_select: empty candidate list");

    // Frequency of each distinct estimate, keyed by support.
    std::map<std::vector<std::uint32_t>, std::size_t> freq;
    for (const auto& entry : list)
        ++freq[entry.estimate.support()];

    const std::vector<std::uint32_t>* best = nullptr;
    std::size_t best_freq = 0;
    for (const auto& [support, f] : freq) {
        if (!best) {
            best = &support;
            best_freq = f;
            continue;
        }
        // score = f / (w + 1), compared exactly in integers.
        const std::size_t w = support.size();
        const std::size_t bw = best->size();
        const auto lhs = f * (bw + 1);
        const auto rhs = best_freq * (w + 1);
        bool better = lhs > rhs;
        if (lhs == rhs) {
            if (w < bw)
                better = true;
            else if (w == bw && support < *best)
                better = true;
        }
        if (better) {
            best = &support;
            best_freq = f;
        }
    }
    return BinaryVector(list.front().estimate.length(), *best);
}

MbbpOutcome mbbp_decode(const SparseBinaryMatrix& h, const std::vector<AugmentedBasis>& bases,
                        const BinaryVector& syndrome, const BpConfig& cfg) {
    return MbbpDecoder(h, bases, cfg).decode(syndrome);
}

MbbpDecoder::MbbpDecoder(SparseBinaryMatrix h, std::vector<AugmentedBasis> bases, BpConfig cfg)
    : h_(std::move(h)), bases_(std::move(bases)), cfg_(cfg) {
    cfg_.validate();
    instances_.reserve(bases_.size());
    for (const auto& basis : bases_) {
        if (basis.matrix.num_cols() != h_.num_cols() || basis.original_rows != h_.num_rows())
            throw std::invalid_argument("MbbpDecoder: basis dimensions do not match H");
        std::vector<std::uint32_t> order;
        if (cfg_.schedule == Schedule::serial && cfg_.serial_order == SerialOrder::interleaved)
            order = interleaved_check_order(basis);
        instances_.emplace_back(TannerGraph::from_matrix(basis.matrix), std::move(order));
    }
}

MbbpOutcome MbbpDecoder::decode(const BinaryVector& syndrome, const BpConfig& cfg) const {
    if (syndrome.length() != h_.num_rows())
        throw std::invalid_argument("MbbpDecoder::decode: syndrome length != H rows");

    MbbpOutcome out;
    out.per_instance.reserve(instances_.size());
    CandidateList candidates;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        auto extended = replicate_syndrome(bases_[i], syndrome);
        auto res = instances_[i].decode(extended, cfg);
        out.total_iterations += res.iterations_used;
        out.k_max = std::max(out.k_max, res.iterations_used);
        if (res.converged) {
            // Augmentation adds rows, not columns, so the estimate is already
            // length n; a converged instance satisfies the original rows.
            candidates.push_back({res.estimate, i, res.iterations_used});
        }
        out.per_instance.push_back(std::move(res));
    }

    out.list_size = candidates.size();
    out.any_converged = !candidates.empty();
    if (out.any_converged)
        out.estimate = fws_select(candidates);
    else
        out.estimate = BinaryVector(h_.num_cols()); // declared failure: all-zero
    return out;
}

} // namespace qldpc
