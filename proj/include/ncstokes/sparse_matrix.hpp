#pragma once

#include "ncstokes/kernels.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace ncstokes {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed-row matrix. Structural entries are kept even when they sum to zero.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols);

    /// Duplicates are summed in input order, so the result is independent of
    /// how the input was produced as long as the triplet sequence is the same.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Entry (i, j); zero outside the pattern.
    double at(int i, int j) const;

    kernels::CsrView view() const { return {rows_, row_ptr_.data(), col_idx_.data(), values_.data()}; }

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> multiply_transpose(std::span<const double> x) const;
    double bilinear(std::span<const double> x, std::span<const double> y) const;

    SparseMatrix transpose() const;
    SparseMatrix scaled(double factor) const;
    /// Rows/columns kept where the map is >= 0; the map value is the new index.
    SparseMatrix extract(std::span<const int> row_map, int new_rows, std::span<const int> col_map, int new_cols) const;

    /// max |a_ij - a_ji|
    double max_asymmetry() const;
    /// `row col value` per line, 0-based.
    void write_coordinate(std::ostream& out) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

} // namespace ncstokes
