// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/tanner.hpp"

namespace qldpc {

enum class Schedule { flooding, serial };

// Serial-schedule check order over augmented matrices: all original rows
// first (ascending) or each original immediately followed by its duplicates.
enum class SerialOrder { ascending, interleaved };

struct BpConfig {
    std::size_t max_iterations = 100;
    // First iteration at which the halting test runs. The default checks
    // after every pass; raising it defers halting until messages settle,
    // which on cycle-free graphs avoids stopping on a transient decision
    // that meets the syndrome at more than the minimum weight.
    std::size_t min_iterations = 1;
    double alpha = 0.875; // normalized min-sum scaling, in (0, 1]
    Schedule schedule = Schedule::flooding;
    double channel_p = 0.0; // physical error probability, in (0, 0.5)
    double clip = 50.0;     // LLR magnitude clip
    SerialOrder serial_order = SerialOrder::ascending;

    // Throws std::invalid_argument on out-of-range parameters.
    void validate() const;
};

struct BpOutcome {
    BinaryVector estimate;
    bool converged = false;
    std::size_t iterations_used = 0;
};

// Message state, indexed consistently with BpDecoder's edge layout: edges are
// grouped by check, ascending within each check's neighbor list.
struct BpState {
    std::vector<double> prior;        // per variable, ln((1-p)/p)
    std::vector<double> check_to_var; // per edge
    std::vector<double> var_to_check; // per edge
    std::vector<double> posterior;    // per variable
};

BpState init_state(const TannerGraph& g, const BpConfig& cfg);

// Syndrome min-sum decoder over a fixed Tanner graph. decode() is const and
// allocates its working state per call, so one decoder may serve concurrent
// callers.
class BpDecoder {
public:
    explicit BpDecoder(TannerGraph g, std::vector<std::uint32_t> serial_check_order = {});

    const TannerGraph& graph() const { return graph_; }

    BpOutcome decode(const BinaryVector& syndrome, const BpConfig& cfg,
                     BpState* final_state = nullptr) const;

private:
    TannerGraph graph_;
    std::vector<std::uint32_t> edge_var_;       // edge -> variable
    std::vector<std::size_t> check_edge_begin_; // check -> first edge (size nc+1)
    std::vector<std::vector<std::uint32_t>> var_edges_;
    std::vector<std::uint32_t> serial_order_;
};

// One-shot convenience over a matrix.
BpOutcome bp_decode(const SparseBinaryMatrix& h, const BinaryVector& syndrome,
                    const BpConfig& cfg, BpState* final_state = nullptr);

} // namespace qldpc
