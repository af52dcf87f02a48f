#include "ncstokes/solver.hpp"

#include "ncstokes/errors.hpp"
#include "ncstokes/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <optional>

namespace ncstokes {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const SparseMatrix& m) {
    const Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> view(
        m.rows(), m.cols(), m.nnz(), m.row_ptr().data(), m.col_idx().data(), m.values().data());
    EigenSparse out = view;
    out.makeCompressed();
    return out;
}

double norm2(std::span<const double> x) {
    return std::sqrt(kernels::dot(x, x));
}

bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> residual(const SparseMatrix& K, std::span<const double> x, std::span<const double> b) {
    std::vector<double> r(b.begin(), b.end());
    const auto kx = K.multiply(x);
    kernels::axpy(-1.0, kx, r);
    return r;
}

} // namespace

struct Factorization::Impl {
    SparseMatrix matrix;
    bool spd = false;
    std::optional<Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>>> lu;
    std::optional<Eigen::SimplicialLLT<EigenSparse>> llt;

    Eigen::VectorXd apply(const Eigen::VectorXd& b) const {
        if (spd) {
            return llt->solve(b);
        }
        return lu->solve(b);
    }

    [[noreturn]] void fail(const std::string& what) const {
        if (spd) {
            throw NotPositiveDefinite(what);
        }
        throw SingularSystem(what);
    }
};

Factorization Factorization::indefinite(const SparseMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("factorization of a non-square matrix");
    }
    auto impl = std::make_shared<Impl>();
    impl->matrix = matrix;
    const EigenSparse k = to_eigen(matrix);
    impl->lu.emplace();
    impl->lu->analyzePattern(k);
    impl->lu->factorize(k);
    if (impl->lu->info() != Eigen::Success) {
        throw SingularSystem("sparse LU breakdown: " + impl->lu->lastErrorMessage());
    }
    Factorization f;
    f.impl_ = std::move(impl);
    return f;
}

Factorization Factorization::spd(const SparseMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("factorization of a non-square matrix");
    }
    auto impl = std::make_shared<Impl>();
    impl->matrix = matrix;
    impl->spd = true;
    impl->llt.emplace();
    impl->llt->compute(to_eigen(matrix));
    if (impl->llt->info() != Eigen::Success) {
        throw NotPositiveDefinite("Cholesky factorization met a nonpositive pivot");
    }
    if (matrix.rows() > 0) {
        const Eigen::VectorXd d = EigenSparse(impl->llt->matrixL()).diagonal();
        const double lo = d.cwiseAbs2().minCoeff();
        const double hi = d.cwiseAbs2().maxCoeff();
        if (!(lo > 1e-13 * hi)) {
            throw NotPositiveDefinite("Cholesky pivot ratio below 1e-13; matrix is numerically singular");
        }
    }
    Factorization f;
    f.impl_ = std::move(impl);
    return f;
}

int Factorization::size() const {
    return impl_ ? impl_->matrix.rows() : 0;
}

bool Factorization::is_spd() const {
    return impl_ && impl_->spd;
}

std::vector<double> Factorization::solve(std::span<const double> b, double tolerance) const {
    if (!impl_) {
        throw std::logic_error("solve on an empty factorization");
    }
    if (static_cast<int>(b.size()) != size()) {
        throw std::invalid_argument("right-hand side size does not match the factorization");
    }
    const double bnorm = norm2(b);
    std::vector<double> x(b.size(), 0.0);
    if (bnorm == 0.0) {
        return x;
    }
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd xv = impl_->apply(bv);
    std::copy(xv.data(), xv.data() + xv.size(), x.begin());
    if (!all_finite(x)) {
        impl_->fail("factorization produced a non-finite solution");
    }
    auto r = residual(impl_->matrix, x, b);
    for (int step = 0; step < 3 && norm2(r) > tolerance * bnorm; ++step) {
        const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
        const Eigen::VectorXd dx = impl_->apply(rv);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += dx[static_cast<Eigen::Index>(i)];
        }
        r = residual(impl_->matrix, x, b);
    }
    const double rel = norm2(r) / bnorm;
    if (!std::isfinite(rel) || rel > tolerance) {
        impl_->fail("relative residual " + std::to_string(rel) + " above " + std::to_string(tolerance) +
                    " after iterative refinement");
    }
    return x;
}

namespace {

SolutionField assemble_solution(const ReducedSystem& system, std::span<const double> u_free, std::span<const double> p,
                                std::vector<double> multipliers) {
    SolutionField s;
    s.u.space = system.velocity_space;
    s.u.values.assign(static_cast<std::size_t>(system.n_u_full), 0.0);
    for (int i = 0; i < system.n_free(); ++i) {
        s.u.values[static_cast<std::size_t>(system.free_dofs[static_cast<std::size_t>(i)])] = u_free[static_cast<std::size_t>(i)];
    }
    for (const auto& [dof, value] : system.bc.values) {
        s.u.values[static_cast<std::size_t>(dof)] = value;
    }
    s.p.space = system.pressure_space;
    s.p.values.assign(p.begin(), p.end());
    s.multipliers = std::move(multipliers);
    return s;
}

SolutionField solve_direct(const ReducedSystem& system, const SaddleOptions& opts) {
    const auto rhs = system.augmented_rhs();
    const auto fact = Factorization::indefinite(system.augmented());
    const auto x = fact.solve(rhs, opts.tolerance);
    const auto nf = static_cast<std::size_t>(system.n_free());
    const auto np = static_cast<std::size_t>(system.n_p());
    const std::span<const double> xs(x);
    return assemble_solution(system, xs.subspan(0, nf), xs.subspan(nf, np),
                             std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(nf + np), x.end()));
}

// Preconditioned CG on the pressure Schur complement S = B A^-1 B^T + G,
// restricted to pressures satisfying the constraint rows.
SolutionField solve_uzawa(const ReducedSystem& system, const SaddleOptions& opts) {
    const auto a_fact = Factorization::spd(system.A);
    const auto m_fact = Factorization::spd(system.M);
    const int np = system.n_p();
    const int k = system.n_constraints();
    const auto& W = system.constraint_modes;
    const auto& C = system.constraints;

    Eigen::MatrixXd gram(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            gram(i, j) = kernels::dot(W[static_cast<std::size_t>(i)], C[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::LDLT<Eigen::MatrixXd> gram_fact(gram);

    // p <- p - W Gram^-1 C^T p  gives C^T p = 0
    auto project_primal = [&](std::vector<double>& p) {
        Eigen::VectorXd ct(k);
        for (int i = 0; i < k; ++i) {
            ct[i] = kernels::dot(C[static_cast<std::size_t>(i)], p);
        }
        const Eigen::VectorXd c = gram_fact.solve(ct);
        for (int i = 0; i < k; ++i) {
            kernels::axpy(-c[i], W[static_cast<std::size_t>(i)], p);
        }
    };
    // r <- r - C Gram^-1 W^T r  gives W^T r = 0
    auto project_dual = [&](std::vector<double>& r) {
        Eigen::VectorXd wt(k);
        for (int i = 0; i < k; ++i) {
            wt[i] = kernels::dot(W[static_cast<std::size_t>(i)], r);
        }
        const Eigen::VectorXd c = gram_fact.solve(wt);
        for (int i = 0; i < k; ++i) {
            kernels::axpy(-c[i], C[static_cast<std::size_t>(i)], r);
        }
    };
    auto schur = [&](const std::vector<double>& p) {
        const auto v = a_fact.solve(system.B.multiply_transpose(p), 1e-12);
        auto s = system.B.multiply(v);
        if (system.G) {
            kernels::axpy(1.0, system.G->multiply(p), s);
        }
        return s;
    };

    const auto a_inv_f = a_fact.solve(system.rhs_u, 1e-12);
    std::vector<double> b_orig = system.B.multiply(a_inv_f);
    for (int i = 0; i < np; ++i) {
        b_orig[static_cast<std::size_t>(i)] = -system.rhs_p[static_cast<std::size_t>(i)] - b_orig[static_cast<std::size_t>(i)];
    }
    std::vector<double> r = b_orig;
    project_dual(r);

    std::vector<double> p(static_cast<std::size_t>(np), 0.0);
    auto precondition = [&](const std::vector<double>& res) {
        auto z = m_fact.solve(res, 1e-12);
        project_primal(z);
        return z;
    };
    int iterations = 0;
    auto z = precondition(r);
    double rz = kernels::dot(r, z);
    const double rz0 = rz;
    if (rz0 > 0.0) {
        std::vector<double> d = z;
        while (rz > opts.tolerance * opts.tolerance * rz0) {
            if (iterations >= opts.max_iterations) {
                throw IterationDivergence("Uzawa iteration did not reach tolerance in " +
                                          std::to_string(opts.max_iterations) + " steps");
            }
            ++iterations;
            const auto sd = schur(d);
            const double dsd = kernels::dot(d, sd);
            if (!(dsd > 0.0) || !std::isfinite(dsd)) {
                throw IterationDivergence("Schur complement not positive on the constrained pressure space");
            }
            const double alpha = rz / dsd;
            kernels::axpy(alpha, d, p);
            kernels::axpy(-alpha, sd, r);
            z = precondition(r);
            const double rz_new = kernels::dot(r, z);
            kernels::xpby(z, rz_new / rz, d);
            rz = rz_new;
        }
    }

    auto rhs_u = system.rhs_u;
    kernels::axpy(1.0, system.B.multiply_transpose(p), rhs_u);
    const auto u = a_fact.solve(rhs_u, 1e-12);

    // C mu = S p - b
    auto sp = schur(p);
    kernels::axpy(-1.0, b_orig, sp);
    Eigen::VectorXd wt(k);
    for (int i = 0; i < k; ++i) {
        wt[i] = kernels::dot(W[static_cast<std::size_t>(i)], sp);
    }
    const Eigen::VectorXd mu = gram_fact.solve(wt);
    auto s = assemble_solution(system, u, p, std::vector<double>(mu.data(), mu.data() + k));
    s.iterations = iterations;
    return s;
}

} // namespace

SolutionField solve_saddle(const ReducedSystem& system, const SaddleOptions& opts) {
    if (system.n_constraints() < 1) {
        throw std::invalid_argument("reduced system lacks the pressure mean constraint");
    }
    return opts.method == SaddleMethod::Direct ? solve_direct(system, opts) : solve_uzawa(system, opts);
}

double augmented_residual(const ReducedSystem& system, const SolutionField& solution) {
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(system.augmented_size()));
    for (int d : system.free_dofs) {
        x.push_back(solution.u.values[static_cast<std::size_t>(d)]);
    }
    x.insert(x.end(), solution.p.values.begin(), solution.p.values.end());
    x.insert(x.end(), solution.multipliers.begin(), solution.multipliers.end());
    const auto b = system.augmented_rhs();
    const auto r = residual(system.augmented(), x, b);
    const double bn = norm2(b);
    const double rn = norm2(r);
    return bn == 0.0 ? rn : rn / bn;
}

std::vector<double> solve_spd(const SparseMatrix& A, std::span<const double> b, const SpdOptions& opts) {
    if (A.rows() != A.cols() || static_cast<int>(b.size()) != A.rows()) {
        throw std::invalid_argument("solve_spd: dimension mismatch");
    }
    if (opts.method == SpdMethod::Direct) {
        return Factorization::spd(A).solve(b, opts.tolerance);
    }
    const auto n = b.size();
    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = A.at(static_cast<int>(i), static_cast<int>(i));
        if (!(d > 0.0)) {
            throw NotPositiveDefinite("nonpositive diagonal entry " + std::to_string(i));
        }
        inv_diag[i] = 1.0 / d;
    }
    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        return x;
    }
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
    }
    std::vector<double> d = z;
    std::vector<double> ad(n);
    double rz = kernels::dot(r, z);
    for (int it = 0; it < opts.max_iterations; ++it) {
        A.multiply(d, ad);
        const double dad = kernels::dot(d, ad);
        if (!(dad > 0.0)) {
            throw NotPositiveDefinite("conjugate gradient met a nonpositive curvature direction");
        }
        const double alpha = rz / dad;
        kernels::axpy(alpha, d, x);
        kernels::axpy(-alpha, ad, r);
        if (norm2(r) <= opts.tolerance * bnorm) {
            return x;
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_new = kernels::dot(r, z);
        kernels::xpby(z, rz_new / rz, d);
        rz = rz_new;
    }
    throw IterationDivergence("conjugate gradient did not converge in " + std::to_string(opts.max_iterations) +
                              " iterations");
}

} // namespace ncstokes
