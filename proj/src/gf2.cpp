// SPDX-License-Identifier: Apache-2.0
#include "qldpc/gf2.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qldpc {

namespace {

void sort_and_check(std::vector<std::uint32_t>& idx, std::size_t limit, const char* what) {
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw std::invalid_argument(std::string(what) + ": duplicate index");
    if (!idx.empty() && idx.back() >= limit)
        throw std::invalid_argument(std::string(what) + ": index out of range");
}

std::vector<std::uint64_t> pack_row(const std::vector<std::uint32_t>& row, std::size_t num_words) {
    std::vector<std::uint64_t> bits(num_words, 0);
    for (auto c : row)
        bits[c >> 6] ^= std::uint64_t(1) << (c & 63);
    return bits;
}

std::vector<std::uint64_t> pack_support(const std::vector<std::uint32_t>& support,
                                        std::size_t num_words) {
    std::vector<std::uint64_t> bits(num_words, 0);
    for (auto c : support)
        bits[c >> 6] ^= std::uint64_t(1) << (c & 63);
    return bits;
}

// Eliminates packed rows in place, returns pivot columns in elimination order.
std::vector<std::uint32_t> eliminate(std::vector<std::vector<std::uint64_t>>& rows,
                                     std::size_t num_cols) {
    std::vector<std::uint32_t> pivots;
    std::size_t next_row = 0;
    for (std::uint32_t col = 0; col < num_cols && next_row < rows.size(); ++col) {
        const std::size_t word = col >> 6;
        const std::uint64_t mask = std::uint64_t(1) << (col & 63);
        std::size_t pivot = next_row;
        while (pivot < rows.size() && !(rows[pivot][word] & mask))
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[next_row], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next_row && (rows[r][word] & mask)) {
                for (std::size_t w = 0; w < rows[r].size(); ++w)
                    rows[r][w] ^= rows[next_row][w];
            }
        }
        pivots.push_back(col);
        ++next_row;
    }
    return pivots;
}

} // namespace

BinaryVector::BinaryVector(std::size_t length, std::vector<std::uint32_t> support)
    : length_(length), support_(std::move(support)) {
    sort_and_check(support_, length_, "BinaryVector");
}

BinaryVector BinaryVector::from_bits(const std::vector<std::uint8_t>& bits) {
    BinaryVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            v.support_.push_back(static_cast<std::uint32_t>(i));
    return v;
}

bool BinaryVector::get(std::size_t pos) const {
    return std::binary_search(support_.begin(), support_.end(),
                              static_cast<std::uint32_t>(pos));
}

std::vector<std::uint8_t> BinaryVector::to_bits() const {
    std::vector<std::uint8_t> bits(length_, 0);
    for (auto p : support_)
        bits[p] = 1;
    return bits;
}

BinaryVector BinaryVector::operator^(const BinaryVector& other) const {
    if (length_ != other.length_)
        throw std::invalid_argument("BinaryVector xor: length mismatch");
    BinaryVector out(length_);
    std::set_symmetric_difference(support_.begin(), support_.end(), other.support_.begin(),
                                  other.support_.end(), std::back_inserter(out.support_));
    return out;
}

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t num_cols,
                                       std::vector<std::vector<std::uint32_t>> rows)
    : num_cols_(num_cols), rows_(std::move(rows)) {
    for (auto& r : rows_)
        sort_and_check(r, num_cols_, "SparseBinaryMatrix row");
}

SparseBinaryMatrix SparseBinaryMatrix::identity(std::size_t n) {
    SparseBinaryMatrix m(n, n);
    for (std::uint32_t i = 0; i < n; ++i)
        m.rows_[i] = {i};
    return m;
}

SparseBinaryMatrix SparseBinaryMatrix::from_dense(
    const std::vector<std::vector<std::uint8_t>>& dense) {
    const std::size_t nc = dense.empty() ? 0 : dense.front().size();
    SparseBinaryMatrix m(dense.size(), nc);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i].size() != nc)
            throw std::invalid_argument("from_dense: ragged rows");
        for (std::size_t j = 0; j < nc; ++j)
            if (dense[i][j])
                m.rows_[i].push_back(static_cast<std::uint32_t>(j));
    }
    return m;
}

std::size_t SparseBinaryMatrix::num_entries() const {
    std::size_t n = 0;
    for (const auto& r : rows_)
        n += r.size();
    return n;
}

std::size_t SparseBinaryMatrix::max_row_weight() const {
    std::size_t w = 0;
    for (const auto& r : rows_)
        w = std::max(w, r.size());
    return w;
}

BinaryVector SparseBinaryMatrix::row_vector(std::size_t i) const {
    return BinaryVector(num_cols_, rows_[i]);
}

std::vector<std::vector<std::uint8_t>> SparseBinaryMatrix::to_dense() const {
    std::vector<std::vector<std::uint8_t>> dense(num_rows(),
                                                 std::vector<std::uint8_t>(num_cols_, 0));
    for (std::size_t i = 0; i < num_rows(); ++i)
        for (auto c : rows_[i])
            dense[i][c] = 1;
    return dense;
}

BinaryVector mat_vec_mod2(const SparseBinaryMatrix& m, const BinaryVector& v) {
    if (v.length() != m.num_cols())
        throw std::invalid_argument("mat_vec_mod2: vector length != matrix columns");
    std::vector<std::uint8_t> bits(m.num_cols(), 0);
    for (auto p : v.support())
        bits[p] = 1;
    BinaryVector out(m.num_rows());
    std::vector<std::uint32_t> support;
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        unsigned parity = 0;
        for (auto c : m.row(i))
            parity ^= bits[c];
        if (parity)
            support.push_back(static_cast<std::uint32_t>(i));
    }
    return BinaryVector(m.num_rows(), std::move(support));
}

std::size_t rank_mod2(const SparseBinaryMatrix& m) {
    const std::size_t num_words = (m.num_cols() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(m.num_rows());
    for (std::size_t i = 0; i < m.num_rows(); ++i)
        rows.push_back(pack_row(m.row(i), std::max<std::size_t>(num_words, 1)));
    return eliminate(rows, m.num_cols()).size();
}

RowSpaceBasis::RowSpaceBasis(const SparseBinaryMatrix& m)
    : num_cols_(m.num_cols()), num_words_(std::max<std::size_t>((m.num_cols() + 63) / 64, 1)) {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(m.num_rows());
    for (std::size_t i = 0; i < m.num_rows(); ++i)
        rows.push_back(pack_row(m.row(i), num_words_));
    pivot_cols_ = eliminate(rows, num_cols_);
    basis_rows_.assign(rows.begin(), rows.begin() + pivot_cols_.size());
}

bool RowSpaceBasis::contains(const BinaryVector& v) const {
    if (v.length() != num_cols_)
        throw std::invalid_argument("RowSpaceBasis::contains: length mismatch");
    auto bits = pack_support(v.support(), num_words_);
    for (std::size_t r = 0; r < basis_rows_.size(); ++r) {
        const std::uint32_t col = pivot_cols_[r];
        if (bits[col >> 6] & (std::uint64_t(1) << (col & 63))) {
            for (std::size_t w = 0; w < num_words_; ++w)
                bits[w] ^= basis_rows_[r][w];
        }
    }
    for (auto w : bits)
        if (w)
            return false;
    return true;
}

bool in_row_space(const SparseBinaryMatrix& m, const BinaryVector& v) {
    if (v.length() != m.num_cols())
        throw std::invalid_argument("in_row_space: length mismatch");
    return RowSpaceBasis(m).contains(v);
}

SparseBinaryMatrix vertical_stack(const SparseBinaryMatrix& top,
                                  const SparseBinaryMatrix& bottom) {
    if (top.num_cols() != bottom.num_cols())
        throw std::invalid_argument("vertical_stack: column-count mismatch");
    std::vector<std::vector<std::uint32_t>> rows = top.rows();
    rows.insert(rows.end(), bottom.rows().begin(), bottom.rows().end());
    return SparseBinaryMatrix(top.num_cols(), std::move(rows));
}

namespace {

std::uint64_t read_count(std::istream& in, const char* what) {
    long long v;
    if (!(in >> v) || v < 0)
        throw std::invalid_argument(std::string("alist: bad or missing ") + what);
    return static_cast<std::uint64_t>(v);
}

} // namespace

SparseBinaryMatrix read_alist(std::istream& in) {
    const auto n = read_count(in, "column count");
    const auto m = read_count(in, "row count");
    const auto max_col_deg = read_count(in, "max column degree");
    const auto max_row_deg = read_count(in, "max row degree");
    std::vector<std::uint64_t> col_deg(n), row_deg(m);
    std::uint64_t col_deg_sum = 0, row_deg_sum = 0;
    for (auto& d : col_deg) {
        d = read_count(in, "column degree");
        if (d > max_col_deg)
            throw std::invalid_argument("alist: column degree exceeds declared max");
        col_deg_sum += d;
    }
    for (auto& d : row_deg) {
        d = read_count(in, "row degree");
        if (d > max_row_deg)
            throw std::invalid_argument("alist: row degree exceeds declared max");
        row_deg_sum += d;
    }
    if (col_deg_sum != row_deg_sum)
        throw std::invalid_argument("alist: column and row degree sums differ");

    // Adjacency lists come either zero-padded to the max degree or unpadded;
    // the remaining token count decides which.
    std::vector<std::uint64_t> tokens;
    long long v;
    while (in >> v) {
        if (v < 0)
            throw std::invalid_argument("alist: negative adjacency entry");
        tokens.push_back(static_cast<std::uint64_t>(v));
    }
    const std::uint64_t padded_total = n * max_col_deg + m * max_row_deg;
    const std::uint64_t unpadded_total = col_deg_sum + row_deg_sum;
    bool padded;
    if (tokens.size() == padded_total)
        padded = true;
    else if (tokens.size() == unpadded_total)
        padded = false;
    else
        throw std::invalid_argument("alist: adjacency token count matches neither padded "
                                    "nor unpadded layout");

    std::size_t pos = 0;
    auto take = [&](std::uint64_t deg, std::uint64_t max_deg, std::uint64_t limit,
                    std::vector<std::uint32_t>* out) {
        const std::uint64_t span = padded ? max_deg : deg;
        std::uint64_t seen = 0;
        for (std::uint64_t k = 0; k < span; ++k) {
            const auto t = tokens[pos++];
            if (t == 0) {
                if (k < deg)
                    throw std::invalid_argument("alist: zero inside adjacency list");
                continue;
            }
            if (t > limit)
                throw std::invalid_argument("alist: adjacency index out of range");
            ++seen;
            if (out)
                out->push_back(static_cast<std::uint32_t>(t - 1));
        }
        if (seen != deg)
            throw std::invalid_argument("alist: adjacency does not match declared degree");
    };

    // Column adjacency is consumed for validation only; rows are authoritative.
    for (std::uint64_t j = 0; j < n; ++j)
        take(col_deg[j], max_col_deg, m, nullptr);
    std::vector<std::vector<std::uint32_t>> rows(m);
    for (std::uint64_t i = 0; i < m; ++i)
        take(row_deg[i], max_row_deg, n, &rows[i]);
    return SparseBinaryMatrix(static_cast<std::size_t>(n), std::move(rows));
}

SparseBinaryMatrix read_alist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open alist file: " + path);
    return read_alist(in);
}

void write_alist(const SparseBinaryMatrix& m, std::ostream& out) {
    const std::size_t n = m.num_cols();
    std::vector<std::vector<std::uint32_t>> cols(n);
    for (std::size_t i = 0; i < m.num_rows(); ++i)
        for (auto c : m.row(i))
            cols[c].push_back(static_cast<std::uint32_t>(i));
    std::size_t max_col_deg = 0;
    for (const auto& c : cols)
        max_col_deg = std::max(max_col_deg, c.size());
    const std::size_t max_row_deg = m.max_row_weight();

    out << n << ' ' << m.num_rows() << '\n';
    out << max_col_deg << ' ' << max_row_deg << '\n';
    for (std::size_t j = 0; j < n; ++j)
        out << cols[j].size() << (j + 1 == n ? '\n' : ' ');
    for (std::size_t i = 0; i < m.num_rows(); ++i)
        out << m.row(i).size() << (i + 1 == m.num_rows() ? '\n' : ' ');
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < max_col_deg; ++k)
            out << (k < cols[j].size() ? cols[j][k] + 1 : 0)
                << (k + 1 == max_col_deg ? '\n' : ' ');
    }
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        for (std::size_t k = 0; k < max_row_deg; ++k)
            out << (k < m.row(i).size() ? m.row(i)[k] + 1 : 0)
                << (k + 1 == max_row_deg ? '\n' : ' ');
    }
}

void write_alist_file(const SparseBinaryMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot open file for writing: " + path);
    write_alist(m, out);
}

SparseBinaryMatrix read_dense_text(std::istream& in) {
    std::vector<std::vector<std::uint32_t>> rows;
    std::size_t num_cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::uint32_t> row;
        std::string tok;
        std::size_t col = 0;
        while (ls >> tok) {
            if (tok == "1")
                row.push_back(static_cast<std::uint32_t>(col));
            else if (tok != "0")
                throw std::invalid_argument("dense text: entry must be 0 or 1, got '" + tok + "'");
            ++col;
        }
        if (col == 0)
            continue; // blank line
        if (rows.empty())
            num_cols = col;
        else if (col != num_cols)
            throw std::invalid_argument("dense text: ragged rows");
        rows.push_back(std::move(row));
    }
    return SparseBinaryMatrix(num_cols, std::move(rows));
}

SparseBinaryMatrix read_dense_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open matrix file: " + path);
    return read_dense_text(in);
}

} // namespace qldpc
