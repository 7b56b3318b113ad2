// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

// CSS code: two parity-check matrices over the same n qubits with
// hx * hz^T = 0. X errors are decoded against hz syndromes and scored
// modulo the row space of hx.
struct CssCode {
    std::string name;
    SparseBinaryMatrix hx;
    SparseBinaryMatrix hz;
    std::size_t n = 0;
    std::size_t k = 0;                  // n - rank(hx) - rank(hz), computed
    std::optional<std::size_t> d_claimed; // unchecked claim, never computed
};

struct CssValidationReport {
    // (hx row, hz row) pairs with odd overlap.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> violations;
    std::size_t computed_k = 0;
    bool valid() const { return violations.empty(); }
};

CssValidationReport validate_css(const CssCode& code);

// Assembles a CssCode from the two matrices, filling n and k. Throws if the
// column counts differ; orthogonality is reported by validate_css, not here.
CssCode make_css_code(std::string name, SparseBinaryMatrix hx, SparseBinaryMatrix hz,
                      std::optional<std::size_t> d_claimed = std::nullopt);

// Bivariate bicycle construction over Z_l x Z_m: monomial terms (i, j) stand
// for x^i y^j with x, y the two commuting cyclic shifts. H_X = [A | B] and
// H_Z = [B^T | A^T], giving n = 2*l*m.
CssCode build_bivariate_bicycle(std::size_t l, std::size_t m,
                                const std::vector<std::pair<std::size_t, std::size_t>>& a_terms,
                                const std::vector<std::pair<std::size_t, std::size_t>>& b_terms,
                                std::string name = "bb");

// Decoding trial outcome: failure iff the estimate misses the syndrome or the
// residual is outside the stabilizer row space. For X-error decoding the
// syndrome matrix is hz and the stabilizer matrix is hx.
bool is_logical_failure(const CssCode& code, const BinaryVector& true_error,
                        const BinaryVector& estimate, const SparseBinaryMatrix& syndrome_matrix,
                        const SparseBinaryMatrix& stabilizer_matrix);

// Fast path for simulation loops: precomputed stabilizer basis and an already
// extracted syndrome.
bool is_logical_failure(const SparseBinaryMatrix& syndrome_matrix,
                        const RowSpaceBasis& stabilizer_space, const BinaryVector& true_error,
                        const BinaryVector& estimate, const BinaryVector& observed_syndrome);

// Code presets. A preset file is a JSON document:
//   {"presets": [
//     {"name":..., "l":..., "m":..., "a_terms":[[i,j],...], "b_terms":[...],
//      "k":..., "d":...},
//     {"name":..., "hx_path":..., "hz_path":..., "k":..., "d":...}]}
// Paths are resolved relative to the preset file. When a preset claims k, the
// loader recomputes it and refuses to return a mismatching code.
struct CodePreset {
    std::string name;
    bool from_files = false;
    std::size_t l = 0, m = 0;
    std::vector<std::pair<std::size_t, std::size_t>> a_terms, b_terms;
    std::string hx_path, hz_path;
    std::optional<std::size_t> k_claimed;
    std::optional<std::size_t> d_claimed;
};

std::vector<CodePreset> read_preset_file(const std::string& path);
CssCode load_preset(const std::string& preset_file, const std::string& name);
CssCode load_preset(const CodePreset& preset, const std::string& base_dir);

} // namespace qldpc
