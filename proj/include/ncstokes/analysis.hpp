#pragma once

#include "ncstokes/assembly.hpp"
#include "ncstokes/discretization.hpp"
#include "ncstokes/femspace.hpp"
#include "ncstokes/mesh.hpp"
#include "ncstokes/problems.hpp"
#include "ncstokes/solver.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ncstokes {

/// Absolute errors and their ratios to the exact-solution norms
/// ||u||_0, |u|_1 and ||p||_0.
struct ErrorReport {
    double l2_u = 0.0;
    double h1h_u = 0.0;
    double l2_p = 0.0;
    double rel_l2_u = 0.0;
    double rel_h1h_u = 0.0;
    double rel_l2_p = 0.0;
};

/// Element-wise degree-6 quadrature; the H1 part is the broken seminorm.
ErrorReport error_norms(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure, const SolutionField& solution,
                        const ExactSolution& exact);

struct ConvergenceRecord {
    int n = 0;
    double h = 0.0;
    ErrorReport errors;
    /// Rates of the relative errors against the previous record; empty on
    /// the first one.
    std::optional<double> rate_l2;
    std::optional<double> rate_h1;
    std::optional<double> rate_p;
};

/// rate = log(e_prev / e_cur) / log(h_prev / h_cur). Throws EmptySequence for
/// no records and std::invalid_argument unless h strictly decreases.
std::vector<ConvergenceRecord> convergence_rates(std::vector<ConvergenceRecord> records);

/// Element-wise constant field whose value on K is the sum of q over the
/// three vertices of K.
FieldCoefficients ih_projection(std::span<const double> q, const Mesh& mesh, const DofMap& pressure);

struct InfSupOptions {
    /// Stiffness viscosity. The estimate is rescaled so it does not depend on it.
    double nu = 1.0;
    int block_size = 6;
    int max_iterations = 200;
    /// Relative change of the smallest Ritz value between two iterations.
    double tolerance = 1e-13;
    std::uint32_t seed = 20240611;
    AssemblyOptions assembly;
};

struct InfSupEstimate {
    /// Mesh parameter when known (structured meshes), else 0.
    int n = 0;
    double h = 0.0;
    /// sqrt of the smallest eigenvalue of B A^-1 B^T q = lambda M q over
    /// mean-zero pressures. Zero when the pair has spurious pressure modes.
    double beta_h = 0.0;
    /// Same quantity on the M-orthogonal complement of all spurious modes.
    double beta_reduced = 0.0;
    int spurious_modes = 0;
    int iterations = 0;
};

/// Block inverse iteration with Rayleigh-Ritz on the pressure Schur
/// complement, using a factorization of the augmented saddle matrix. The
/// velocity space must be NCP1; the stabilization switch of `scheme` is
/// ignored because the estimate concerns B alone. Throws EigenNonConvergence.
InfSupEstimate estimate_infsup(const Mesh& mesh, const Scheme& scheme, const InfSupOptions& opts = {});
InfSupEstimate estimate_infsup(int n, MeshPattern pattern, const Scheme& scheme, const InfSupOptions& opts = {});

/// sqrt(r^T A^-1 r) for r_j = a_h(u, psi_j) - d_h(psi_j, p) - (f, psi_j) over
/// the interior NCP1 dofs, A the unit-viscosity reduced stiffness. Requires an
/// exact solution.
double consistency_error(const Mesh& mesh, const ProblemSpec& problem);

} // namespace ncstokes
