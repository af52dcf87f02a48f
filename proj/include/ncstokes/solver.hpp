#pragma once

#include "ncstokes/assembly.hpp"
#include "ncstokes/femspace.hpp"
#include "ncstokes/sparse_matrix.hpp"

#include <memory>
#include <span>
#include <vector>

namespace ncstokes {

/// Sparse factorization of a square matrix. Solves are const and may be
/// issued concurrently from several threads.
class Factorization {
public:
    /// General sparse LU with partial pivoting; used for the indefinite
    /// augmented saddle matrix. Throws SingularSystem on breakdown.
    static Factorization indefinite(const SparseMatrix& matrix);
    /// Sparse Cholesky. Throws NotPositiveDefinite on a nonpositive or
    /// vanishing pivot.
    static Factorization spd(const SparseMatrix& matrix);

    int size() const;
    bool is_spd() const;

    /// Solve with up to three steps of iterative refinement until
    /// ||K x - b|| <= tolerance ||b||. Throws SingularSystem (indefinite) or
    /// NotPositiveDefinite (spd) if the result is not finite or the target is
    /// missed.
    std::vector<double> solve(std::span<const double> b, double tolerance = 1e-10) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

enum class SaddleMethod { Direct, Uzawa };

struct SaddleOptions {
    SaddleMethod method = SaddleMethod::Direct;
    /// Relative residual target. Direct: augmented system. Uzawa: pressure
    /// Schur complement in the M^-1 norm.
    double tolerance = 1e-10;
    int max_iterations = 2000;
};

struct SolutionField {
    FieldCoefficients u;
    FieldCoefficients p;
    /// Lagrange multipliers in the order of ReducedSystem::constraints. The
    /// first belongs to the mean-value constraint.
    std::vector<double> multipliers;
    int iterations = 0;

    double multiplier() const { return multipliers.empty() ? 0.0 : multipliers.front(); }
};

/// Solve the reduced saddle system; boundary velocity values are re-injected.
SolutionField solve_saddle(const ReducedSystem& system, const SaddleOptions& opts = {});

/// Relative residual ||K x - b|| / ||b|| of the augmented system for a full
/// solution; 0 when b = 0 and x = 0.
double augmented_residual(const ReducedSystem& system, const SolutionField& solution);

enum class SpdMethod { Direct, ConjugateGradient };

struct SpdOptions {
    SpdMethod method = SpdMethod::Direct;
    /// Direct: residual target after refinement. CG: relative residual stop.
    double tolerance = 1e-12;
    int max_iterations = 10000;
};

/// Solve A x = b for symmetric positive definite A. The CG path is
/// Jacobi-preconditioned and runs on the active SIMD kernels. Throws
/// NotPositiveDefinite, or IterationDivergence when CG does not converge.
std::vector<double> solve_spd(const SparseMatrix& A, std::span<const double> b, const SpdOptions& opts = {});

} // namespace ncstokes
