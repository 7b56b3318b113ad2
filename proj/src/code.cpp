// SPDX-License-Identifier: Apache-2.0
#include "qldpc/code.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qldpc {

namespace {

// Odd-overlap test between two sorted index lists.
bool odd_overlap(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    unsigned parity = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            parity ^= 1;
            ++ia;
            ++ib;
        }
    }
    return parity != 0;
}

} // namespace

CssValidationReport validate_css(const CssCode& code) {
    CssValidationReport rep;
    for (std::uint32_t i = 0; i < code.hx.num_rows(); ++i)
        for (std::uint32_t j = 0; j < code.hz.num_rows(); ++j)
            if (odd_overlap(code.hx.row(i), code.hz.row(j)))
                rep.violations.emplace_back(i, j);
    rep.computed_k = code.n - rank_mod2(code.hx) - rank_mod2(code.hz);
    return rep;
}

CssCode make_css_code(std::string name, SparseBinaryMatrix hx, SparseBinaryMatrix hz,
                      std::optional<std::size_t> d_claimed) {
    if (hx.num_cols() != hz.num_cols())
        throw std::invalid_argument("make_css_code: hx and hz column counts differ");
    CssCode code;
    code.name = std::move(name);
    code.n = hx.num_cols();
    code.hx = std::move(hx);
    code.hz = std::move(hz);
    code.k = code.n - rank_mod2(code.hx) - rank_mod2(code.hz);
    code.d_claimed = d_claimed;
    return code;
}

CssCode build_bivariate_bicycle(std::size_t l, std::size_t m,
                                const std::vector<std::pair<std::size_t, std::size_t>>& a_terms,
                                const std::vector<std::pair<std::size_t, std::size_t>>& b_terms,
                                std::string name) {
    if (l < 1 || m < 1)
        throw std::invalid_argument("build_bivariate_bicycle: l and m must be >= 1");
    auto check_terms = [&](const std::vector<std::pair<std::size_t, std::size_t>>& terms,
                           const char* which) {
        for (const auto& [i, j] : terms)
            if (i >= l || j >= m)
                throw std::invalid_argument(std::string("build_bivariate_bicycle: ") + which +
                                            " exponent out of range");
        auto sorted = terms;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument(std::string("build_bivariate_bicycle: duplicate ") +
                                        which + " term");
    };
    check_terms(a_terms, "a_terms");
    check_terms(b_terms, "b_terms");

    const std::size_t lm = l * m;
    // Row r = alpha*m + beta of the monomial block x^i y^j has its 1 at
    // column ((alpha+i) mod l)*m + ((beta+j) mod m).
    auto shift_col = [&](std::size_t r, std::size_t i, std::size_t j) {
        const std::size_t alpha = r / m;
        const std::size_t beta = r % m;
        return ((alpha + i) % l) * m + ((beta + j) % m);
    };

    std::vector<std::vector<std::uint32_t>> hx_rows(lm), hz_rows(lm);
    for (std::size_t r = 0; r < lm; ++r) {
        for (const auto& [i, j] : a_terms) {
            hx_rows[r].push_back(static_cast<std::uint32_t>(shift_col(r, i, j)));
            // A^T block of H_Z: transpose of x^i y^j is x^(l-i) y^(m-j).
            hz_rows[r].push_back(
                static_cast<std::uint32_t>(lm + shift_col(r, (l - i) % l, (m - j) % m)));
        }
        for (const auto& [i, j] : b_terms) {
            hx_rows[r].push_back(static_cast<std::uint32_t>(lm + shift_col(r, i, j)));
            hz_rows[r].push_back(
                static_cast<std::uint32_t>(shift_col(r, (l - i) % l, (m - j) % m)));
        }
    }
    return make_css_code(std::move(name), SparseBinaryMatrix(2 * lm, std::move(hx_rows)),
                         SparseBinaryMatrix(2 * lm, std::move(hz_rows)));
}

bool is_logical_failure(const CssCode& code, const BinaryVector& true_error,
                        const BinaryVector& estimate, const SparseBinaryMatrix& syndrome_matrix,
                        const SparseBinaryMatrix& stabilizer_matrix) {
    if (true_error.length() != code.n || estimate.length() != code.n)
        throw std::invalid_argument("is_logical_failure: vector length != n");
    const auto observed = mat_vec_mod2(syndrome_matrix, true_error);
    RowSpaceBasis stabilizers(stabilizer_matrix);
    return is_logical_failure(syndrome_matrix, stabilizers, true_error, estimate, observed);
}

bool is_logical_failure(const SparseBinaryMatrix& syndrome_matrix,
                        const RowSpaceBasis& stabilizer_space, const BinaryVector& true_error,
                        const BinaryVector& estimate, const BinaryVector& observed_syndrome) {
    if (mat_vec_mod2(syndrome_matrix, estimate) != observed_syndrome)
        return true;
    return !stabilizer_space.contains(true_error ^ estimate);
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> parse_terms(const nlohmann::json& j,
                                                             const char* field) {
    std::vector<std::pair<std::size_t, std::size_t>> terms;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2)
            throw std::invalid_argument(std::string("preset: ") + field +
                                        " entries must be [i, j] pairs");
        terms.emplace_back(t[0].get<std::size_t>(), t[1].get<std::size_t>());
    }
    return terms;
}

} // namespace

std::vector<CodePreset> read_preset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open preset file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("preset file " + path + ": " + e.what());
    }
    if (!doc.contains("presets") || !doc["presets"].is_array())
        throw std::invalid_argument("preset file " + path + ": missing \"presets\" array");

    std::vector<CodePreset> presets;
    for (const auto& p : doc["presets"]) {
        CodePreset preset;
        preset.name = p.at("name").get<std::string>();
        if (p.contains("hx_path")) {
            preset.from_files = true;
            preset.hx_path = p.at("hx_path").get<std::string>();
            preset.hz_path = p.at("hz_path").get<std::string>();
        } else {
            preset.l = p.at("l").get<std::size_t>();
            preset.m = p.at("m").get<std::size_t>();
            preset.a_terms = parse_terms(p.at("a_terms"), "a_terms");
            preset.b_terms = parse_terms(p.at("b_terms"), "b_terms");
        }
        if (p.contains("k"))
            preset.k_claimed = p["k"].get<std::size_t>();
        if (p.contains("d"))
            preset.d_claimed = p["d"].get<std::size_t>();
        presets.push_back(std::move(preset));
    }
    return presets;
}

CssCode load_preset(const CodePreset& preset, const std::string& base_dir) {
    CssCode code;
    if (preset.from_files) {
        namespace fs = std::filesystem;
        auto resolve = [&](const std::string& p) {
            fs::path fp(p);
            return fp.is_absolute() ? fp.string() : (fs::path(base_dir) / fp).string();
        };
        code = make_css_code(preset.name, read_alist_file(resolve(preset.hx_path)),
                             read_alist_file(resolve(preset.hz_path)), preset.d_claimed);
    } else {
        code = build_bivariate_bicycle(preset.l, preset.m, preset.a_terms, preset.b_terms,
                                       preset.name);
        code.d_claimed = preset.d_claimed;
    }
    auto rep = validate_css(code);
    if (!rep.valid())
        throw std::invalid_argument("preset " + preset.name + ": hx*hz^T != 0 (" +
                                    std::to_string(rep.violations.size()) + " violating pairs)");
    if (preset.k_claimed && code.k != *preset.k_claimed)
        throw std::invalid_argument("preset " + preset.name + ": computed k=" +
                                    std::to_string(code.k) + " does not match claimed k=" +
                                    std::to_string(*preset.k_claimed));
    return code;
}

CssCode load_preset(const std::string& preset_file, const std::string& name) {
    auto presets = read_preset_file(preset_file);
    for (const auto& p : presets)
        if (p.name == name)
            return load_preset(p, std::filesystem::path(preset_file).parent_path().string());
    throw std::invalid_argument("preset \"" + name + "\" not found in " + preset_file);
}

} // namespace qldpc
