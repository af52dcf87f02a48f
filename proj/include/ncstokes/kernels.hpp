#pragma once

// BLAS-1 and CSR kernels used by the iterative solvers. Each operation has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant chosen
// at runtime. The two must agree to rounding; see test_kernels.

#include <span>
#include <string_view>

namespace ncstokes::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best ISA supported by the running CPU and the build.
Isa detected_isa();
Isa active_isa();
/// Throws std::invalid_argument if `isa` is not available.
void set_active_isa(Isa isa);

struct CsrView {
    int rows = 0;
    const int* row_ptr = nullptr;
    const int* col = nullptr;
    const double* val = nullptr;
};

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
/// y = A x
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
} // namespace scalar

#if defined(NCSTOKES_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
} // namespace avx2
#endif

} // namespace ncstokes::kernels
