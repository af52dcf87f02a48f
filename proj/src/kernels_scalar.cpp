#include "ncstokes/kernels.hpp"

namespace ncstokes::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] + beta * y[i];
    }
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
    for (int r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            s += a.val[k] * x[static_cast<std::size_t>(a.col[k])];
        }
        y[static_cast<std::size_t>(r)] = s;
    }
}

} // namespace ncstokes::kernels::scalar
