#pragma once

// Dense reference computations for small systems.

#include "ncstokes/assembly.hpp"
#include "ncstokes/sparse_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace ncstokes::oracle {

inline Eigen::MatrixXd to_dense(const SparseMatrix& m) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r) {
        for (int k = m.row_ptr()[static_cast<std::size_t>(r)]; k < m.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
            d(r, m.col_idx()[static_cast<std::size_t>(k)]) += m.values()[static_cast<std::size_t>(k)];
        }
    }
    return d;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Ascending eigenvalues of B A^-1 B^T q = lambda M q on the M-orthogonal
/// complement of the constants, by explicit Schur complement and a dense
/// generalized eigensolver.
inline Eigen::VectorXd dense_schur_spectrum(const ReducedSystem& s) {
    const Eigen::MatrixXd A = to_dense(s.A);
    const Eigen::MatrixXd B = to_dense(s.B);
    const Eigen::MatrixXd M = to_dense(s.M);
    const Eigen::MatrixXd S = B * A.llt().solve(B.transpose());
    const Eigen::VectorXd c = M * Eigen::VectorXd::Ones(M.rows());
    // Orthonormal (Euclidean) basis of {q : c^T q = 0}.
    Eigen::MatrixXd cm(M.rows(), 1);
    cm.col(0) = c;
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(cm);
    const Eigen::MatrixXd Qfull = qr.householderQ();
    const Eigen::MatrixXd Q = Qfull.rightCols(M.rows() - 1);
    const Eigen::MatrixXd Sq = Q.transpose() * S * Q;
    const Eigen::MatrixXd Mq = Q.transpose() * M * Q;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (Sq + Sq.transpose()),
                                                                  0.5 * (Mq + Mq.transpose()));
    return eig.eigenvalues();
}

/// Dense solve of the augmented saddle system.
inline Eigen::VectorXd dense_saddle_solve(const ReducedSystem& s) {
    const Eigen::MatrixXd K = to_dense(s.augmented());
    const Eigen::VectorXd b = to_eigen(s.augmented_rhs());
    return K.fullPivLu().solve(b);
}

} // namespace ncstokes::oracle
