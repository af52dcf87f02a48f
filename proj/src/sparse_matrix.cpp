#include "ncstokes/sparse_matrix.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ncstokes {

SparseMatrix::SparseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::out_of_range("triplet outside matrix bounds");
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row;
        const int c = triplets[i].col;
        double sum = 0.0;
        for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) {
            sum += triplets[i].value;
        }
        m.col_idx_.push_back(c);
        m.values_.push_back(sum);
        ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 1.0});
    }
    return from_triplets(n, n, std::move(t));
}

double SparseMatrix::at(int i, int j) const {
    const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
        throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
    }
    kernels::spmv(view(), x, y);
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(rows_));
    multiply(x, y);
    return y;
}

std::vector<double> SparseMatrix::multiply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rows_) {
        throw std::invalid_argument("SparseMatrix::multiply_transpose: dimension mismatch");
    }
    std::vector<double> y(static_cast<std::size_t>(cols_), 0.0);
    for (int r = 0; r < rows_; ++r) {
        const double xr = x[static_cast<std::size_t>(r)];
        for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
            y[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])] += values_[static_cast<std::size_t>(k)] * xr;
        }
    }
    return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
    const auto ay = multiply(y);
    return kernels::dot(x, ay);
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
            t.push_back({col_idx_[static_cast<std::size_t>(k)], r, values_[static_cast<std::size_t>(k)]});
        }
    }
    return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    SparseMatrix m = *this;
    for (auto& v : m.values_) {
        v *= factor;
    }
    return m;
}

SparseMatrix SparseMatrix::extract(std::span<const int> row_map, int new_rows, std::span<const int> col_map,
                                   int new_cols) const {
    std::vector<Triplet> t;
    for (int r = 0; r < rows_; ++r) {
        const int nr = row_map[static_cast<std::size_t>(r)];
        if (nr < 0) {
            continue;
        }
        for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int nc = col_map[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])];
            if (nc >= 0) {
                t.push_back({nr, nc, values_[static_cast<std::size_t>(k)]});
            }
        }
    }
    return from_triplets(new_rows, new_cols, std::move(t));
}

double SparseMatrix::max_asymmetry() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("max_asymmetry of a non-square matrix");
    }
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = col_idx_[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(k)] - at(c, r)));
        }
    }
    return worst;
}

void SparseMatrix::write_coordinate(std::ostream& out) const {
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
            fmt::print(out, "{} {} {:.17g}\n", r, col_idx_[static_cast<std::size_t>(k)], values_[static_cast<std::size_t>(k)]);
        }
    }
}

} // namespace ncstokes
