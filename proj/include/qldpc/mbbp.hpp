// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qldpc/bp.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/subtree.hpp"

namespace qldpc {

// One converged instance's contribution to the candidate list. The list is a
// multiset: exact duplicates stay and drive the frequency score.
struct CandidateEntry {
    BinaryVector estimate;
    std::size_t source_basis = 0; // index into the bases list
    std::size_t iterations = 0;
};

using CandidateList = std::vector<CandidateEntry>;

// Frequency-weighted scoring: pick argmax of frequency / (weight + 1) over
// the multiset, breaking ties by lower Hamming weight and then by
// lexicographically smaller support. Throws on an empty list; the caller is
// expected to emit the all-zero failure outcome instead.
BinaryVector fws_select(const CandidateList& list);

struct MbbpOutcome {
    BinaryVector estimate;
    bool any_converged = false;
    std::size_t list_size = 0;
    std::size_t k_max = 0;            // max iterations over instances
    std::size_t total_iterations = 0; // sum over instances
    std::vector<BpOutcome> per_instance;
};

// Runs one BP instance per augmented basis against the replicated syndrome,
// gathers converged estimates, and selects with fws_select. An empty list
// yields the all-zero estimate with any_converged = false.
MbbpOutcome mbbp_decode(const SparseBinaryMatrix& h, const std::vector<AugmentedBasis>& bases,
                        const BinaryVector& syndrome, const BpConfig& cfg);

// Reusable form: builds the per-basis decoders (and serial orders) once.
class MbbpDecoder {
public:
    MbbpDecoder(SparseBinaryMatrix h, std::vector<AugmentedBasis> bases, BpConfig cfg);

    MbbpOutcome decode(const BinaryVector& syndrome) const { return decode(syndrome, cfg_); }
    // Override the stored config (e.g. a different channel_p) while reusing
    // the prebuilt per-basis graphs. Schedule-dependent serial orders come
    // from the constructor's config.
    MbbpOutcome decode(const BinaryVector& syndrome, const BpConfig& cfg) const;

    std::size_t num_instances() const { return instances_.size(); }
    const SparseBinaryMatrix& matrix() const { return h_; }
    const BpConfig& config() const { return cfg_; }

private:
    SparseBinaryMatrix h_;
    std::vector<AugmentedBasis> bases_;
    std::vector<BpDecoder> instances_;
    BpConfig cfg_;
};

} // namespace qldpc
