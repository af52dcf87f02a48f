#pragma once

#include "ncstokes/femspace.hpp"
#include "ncstokes/mesh.hpp"
#include "ncstokes/sparse_matrix.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ncstokes {

struct AssemblyOptions {
    /// Worker threads for the element loop. Results are bitwise identical for
    /// any thread count: per-element contributions are merged in element order.
    int threads = 1;
};

/// nu * sum_K int_K grad psi_i : grad psi_j
SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& velocity, double nu, const AssemblyOptions& opts = {});

/// Row q, column v: sum_K int_K (div psi_v) phi_q.
SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
                                 const AssemblyOptions& opts = {});

SparseMatrix assemble_pressure_mass(const Mesh& mesh, const DofMap& pressure, const AssemblyOptions& opts = {});

/// sum_K int_K (p - P0 p)(q - P0 q) with P0 the element mean. P1 pressure only.
SparseMatrix assemble_stabilization(const Mesh& mesh, const DofMap& pressure, const AssemblyOptions& opts = {});

/// sum_K int_K f . psi_j with the degree-6 rule.
std::vector<double> assemble_load(const Mesh& mesh, const DofMap& velocity, const VectorField& f,
                                  const AssemblyOptions& opts = {});

/// Prescribed values for boundary velocity dofs.
struct DirichletBC {
    std::map<int, double> values;
};

/// Boundary data evaluated at the dof sites (edge midpoints for NCP1).
DirichletBC interpolate_dirichlet(const Mesh& mesh, const DofMap& velocity, const VectorField& g);

/// Pressure vectors q, other than constants, with B^T q = 0 (and G q = 0 when
/// stabilized). For NCP1 velocity and P1 pressure, B^T q = 0 exactly when the
/// vertex sum of q is the same on every triangle, because
/// d_h(v, q) = 1/3 d_h(v, I_h q) and the NCP1-P0 pair only has constants in its
/// kernel. The vertex-sum condition propagates across every interior edge as
/// "opposite vertices carry equal values", so the kernel is computed on the
/// resulting vertex classes. Returned vectors are M-orthonormal and
/// M-orthogonal to constants.
std::vector<std::vector<double>> spurious_pressure_modes(const Mesh& mesh, const DofMap& velocity,
                                                         const DofMap& pressure, bool stabilized,
                                                         const SparseMatrix& pressure_mass);

/// Unreduced blocks of a_h(u,v) - d_h(v,p) - d_h(u,q) - G(p,q).
struct SaddleSystem {
    SpaceKind velocity_space = SpaceKind::NCP1_vector;
    SpaceKind pressure_space = SpaceKind::P1_scalar;
    SparseMatrix A;
    SparseMatrix B;
    std::optional<SparseMatrix> G;
    /// Pressure mass matrix; used for the mean and kernel constraints.
    SparseMatrix M;
    /// c_q = int phi_q
    std::vector<double> c;
    std::vector<double> rhs_u;
    std::vector<std::vector<double>> spurious_modes;
};

SaddleSystem assemble_saddle(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure, double nu,
                             const VectorField& f, bool stabilized, const AssemblyOptions& opts = {});

/// Boundary velocity dofs eliminated, pressure constrained by Lagrange rows.
struct ReducedSystem {
    SpaceKind velocity_space = SpaceKind::NCP1_vector;
    SpaceKind pressure_space = SpaceKind::P1_scalar;
    SparseMatrix A;
    SparseMatrix B;
    std::optional<SparseMatrix> G;
    /// First entry is the mean functional c; further entries are M z for each
    /// spurious mode z.
    std::vector<std::vector<double>> constraints;
    /// w with constraints[k] = M w: the constant vector, then the spurious modes.
    std::vector<std::vector<double>> constraint_modes;
    SparseMatrix M;
    std::vector<double> rhs_u;
    std::vector<double> rhs_p;
    std::vector<int> free_dofs;
    std::vector<int> full_to_free;
    DirichletBC bc;
    int n_u_full = 0;

    int n_free() const { return static_cast<int>(free_dofs.size()); }
    int n_p() const { return B.rows(); }
    int n_constraints() const { return static_cast<int>(constraints.size()); }
    int augmented_size() const { return n_free() + n_p() + n_constraints(); }

    /// [[A, -B^T, 0], [-B, -G, C], [0, C^T, 0]]
    SparseMatrix augmented() const;
    std::vector<double> augmented_rhs() const;
};

/// Throws InconsistentBC when a value is prescribed on an interior dof or a
/// boundary dof is left without a value.
ReducedSystem apply_constraints(const SaddleSystem& system, const DirichletBC& bc, const DofMap& velocity);

} // namespace ncstokes
