// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qldpc {

// Vector over GF(2) stored as the sorted support (positions holding 1).
class BinaryVector {
public:
    BinaryVector() = default;
    explicit BinaryVector(std::size_t length) : length_(length) {}
    // Support may arrive unsorted; duplicates are rejected.
    BinaryVector(std::size_t length, std::vector<std::uint32_t> support);

    static BinaryVector from_bits(const std::vector<std::uint8_t>& bits);

    std::size_t length() const { return length_; }
    const std::vector<std::uint32_t>& support() const { return support_; }
    std::size_t weight() const { return support_.size(); }
    bool is_zero() const { return support_.empty(); }
    bool get(std::size_t pos) const;

    std::vector<std::uint8_t> to_bits() const;

    BinaryVector operator^(const BinaryVector& other) const;
    bool operator==(const BinaryVector& other) const = default;

private:
    std::size_t length_ = 0;
    std::vector<std::uint32_t> support_;
};

// Sparse binary matrix stored row-major as sorted column-index lists.
// Duplicate rows are allowed; duplicate entries within a row are not.
class SparseBinaryMatrix {
public:
    SparseBinaryMatrix() = default;
    SparseBinaryMatrix(std::size_t num_rows, std::size_t num_cols)
        : num_cols_(num_cols), rows_(num_rows) {}
    // Rows may arrive unsorted; within-row duplicates are rejected.
    SparseBinaryMatrix(std::size_t num_cols, std::vector<std::vector<std::uint32_t>> rows);

    static SparseBinaryMatrix identity(std::size_t n);
    static SparseBinaryMatrix from_dense(const std::vector<std::vector<std::uint8_t>>& dense);

    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_cols() const { return num_cols_; }
    const std::vector<std::uint32_t>& row(std::size_t i) const { return rows_[i]; }
    const std::vector<std::vector<std::uint32_t>>& rows() const { return rows_; }
    std::size_t num_entries() const;
    std::size_t max_row_weight() const;

    BinaryVector row_vector(std::size_t i) const;
    std::vector<std::vector<std::uint8_t>> to_dense() const;

    bool operator==(const SparseBinaryMatrix& other) const = default;

private:
    std::size_t num_cols_ = 0;
    std::vector<std::vector<std::uint32_t>> rows_;
};

// s = M * v over GF(2). Throws on dimension mismatch.
BinaryVector mat_vec_mod2(const SparseBinaryMatrix& m, const BinaryVector& v);

// GF(2) rank via dense bit-packed elimination. Input is not modified.
std::size_t rank_mod2(const SparseBinaryMatrix& m);

// True iff v lies in the row space of m, i.e. rank([m; v]) == rank(m).
bool in_row_space(const SparseBinaryMatrix& m, const BinaryVector& v);

// [top; bottom]. Column counts must agree.
SparseBinaryMatrix vertical_stack(const SparseBinaryMatrix& top, const SparseBinaryMatrix& bottom);

// Row-reduced basis of a matrix's row space, for repeated membership queries.
class RowSpaceBasis {
public:
    explicit RowSpaceBasis(const SparseBinaryMatrix& m);

    std::size_t rank() const { return pivot_cols_.size(); }
    bool contains(const BinaryVector& v) const;

private:
    std::size_t num_cols_ = 0;
    std::size_t num_words_ = 0;
    std::vector<std::vector<std::uint64_t>> basis_rows_;
    std::vector<std::uint32_t> pivot_cols_;
};

// alist text format: first line "n m" (columns then rows), then max degrees,
// per-column and per-row degree lists, then 1-based adjacency lists padded
// with zeros to the max degree. Indices are 0-based in memory.
SparseBinaryMatrix read_alist(std::istream& in);
SparseBinaryMatrix read_alist_file(const std::string& path);
void write_alist(const SparseBinaryMatrix& m, std::ostream& out);
void write_alist_file(const SparseBinaryMatrix& m, const std::string& path);

// Dense text: one row per line of space-separated 0/1.
SparseBinaryMatrix read_dense_text(std::istream& in);
SparseBinaryMatrix read_dense_text_file(const std::string& path);

} // namespace qldpc
