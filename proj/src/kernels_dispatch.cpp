#include "ncstokes/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace ncstokes::kernels {

namespace {

Isa probe() {
#if defined(NCSTOKES_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Isa::Avx2;
    }
#endif
    return Isa::Scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

} // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
    static const Isa isa = probe();
    return isa;
}

Isa active_isa() {
    return active().load(std::memory_order_relaxed);
}

void set_active_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
        throw std::invalid_argument("AVX2 kernels are not available on this machine");
    }
    active().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(NCSTOKES_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        return avx2::dot(a, b);
    }
#endif
    return scalar::dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
#if defined(NCSTOKES_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        return avx2::axpy(alpha, x, y);
    }
#endif
    scalar::axpy(alpha, x, y);
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
#if defined(NCSTOKES_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        return avx2::xpby(x, beta, y);
    }
#endif
    scalar::xpby(x, beta, y);
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
#if defined(NCSTOKES_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        return avx2::spmv(a, x, y);
    }
#endif
    scalar::spmv(a, x, y);
}

} // namespace ncstokes::kernels
