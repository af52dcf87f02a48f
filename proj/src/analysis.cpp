#include "ncstokes/analysis.hpp"

#include "ncstokes/errors.hpp"
#include "ncstokes/kernels.hpp"
#include "ncstokes/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace ncstokes {

ErrorReport error_norms(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure, const SolutionField& solution,
                        const ExactSolution& exact) {
    const auto& rule = degree6_rule();
    double eu = 0.0, eh = 0.0, ep = 0.0;
    double nu0 = 0.0, nh = 0.0, np0 = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto geo = element_geometry(mesh, t);
        const Mat2 guh = element_gradient(solution.u.values, velocity, geo, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& bary = rule.points[q];
            const double w = rule.weights[q] * geo.area;
            const Point x = geo.map(bary);
            const Vec2 ue = exact.u(x);
            const Vec2 uh = evaluate_vector(solution.u.values, velocity, t, bary);
            const Mat2 ge = exact.grad_u(x);
            const double pe = exact.p(x);
            const double ph = evaluate_scalar(solution.p.values, pressure, t, bary);
            for (std::size_t c = 0; c < 2; ++c) {
                eu += w * (ue[c] - uh[c]) * (ue[c] - uh[c]);
                nu0 += w * ue[c] * ue[c];
                for (std::size_t d = 0; d < 2; ++d) {
                    eh += w * (ge[c][d] - guh[c][d]) * (ge[c][d] - guh[c][d]);
                    nh += w * ge[c][d] * ge[c][d];
                }
            }
            ep += w * (pe - ph) * (pe - ph);
            np0 += w * pe * pe;
        }
    }
    auto ratio = [](double e, double n) { return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e); };
    ErrorReport r;
    r.l2_u = std::sqrt(eu);
    r.h1h_u = std::sqrt(eh);
    r.l2_p = std::sqrt(ep);
    r.rel_l2_u = ratio(eu, nu0);
    r.rel_h1h_u = ratio(eh, nh);
    r.rel_l2_p = ratio(ep, np0);
    return r;
}

std::vector<ConvergenceRecord> convergence_rates(std::vector<ConvergenceRecord> records) {
    if (records.empty()) {
        throw EmptySequence("convergence_rates needs at least one record");
    }
    records.front().rate_l2.reset();
    records.front().rate_h1.reset();
    records.front().rate_p.reset();
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& prev = records[i - 1];
        auto& cur = records[i];
        if (!(cur.h < prev.h) || !(cur.h > 0.0)) {
            throw std::invalid_argument("mesh sizes must be positive and strictly decreasing");
        }
        const double lh = std::log(prev.h / cur.h);
        auto rate = [lh](double ep, double ec) { return std::log(ep / ec) / lh; };
        cur.rate_l2 = rate(prev.errors.rel_l2_u, cur.errors.rel_l2_u);
        cur.rate_h1 = rate(prev.errors.rel_h1h_u, cur.errors.rel_h1h_u);
        cur.rate_p = rate(prev.errors.rel_l2_p, cur.errors.rel_l2_p);
    }
    return records;
}

FieldCoefficients ih_projection(std::span<const double> q, const Mesh& mesh, const DofMap& pressure) {
    if (pressure.space() != SpaceKind::P1_scalar || static_cast<int>(q.size()) != pressure.n_dofs()) {
        throw std::invalid_argument("ih_projection expects P1 pressure coefficients");
    }
    FieldCoefficients out;
    out.space = SpaceKind::P0_scalar;
    out.values.resize(static_cast<std::size_t>(mesh.num_triangles()));
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            s += q[static_cast<std::size_t>(pressure.node(t, k))];
        }
        out.values[static_cast<std::size_t>(t)] = s;
    }
    return out;
}

InfSupEstimate estimate_infsup(const Mesh& mesh, const Scheme& scheme, const InfSupOptions& opts) {
    if (scheme.velocity != SpaceKind::NCP1_vector) {
        throw std::invalid_argument("inf-sup estimation supports NCP1 velocity only");
    }
    if (!(opts.nu > 0.0) || opts.block_size < 1 || opts.max_iterations < 1) {
        throw std::invalid_argument("invalid inf-sup options");
    }
    const auto velocity = build_dofmap(mesh, scheme.velocity);
    const auto pressure = build_dofmap(mesh, scheme.pressure);
    const VectorField zero = [](Point) -> Vec2 { return {0.0, 0.0}; };
    const auto saddle = assemble_saddle(mesh, velocity, pressure, opts.nu, zero, false, opts.assembly);
    const auto system = apply_constraints(saddle, interpolate_dirichlet(mesh, velocity, zero), velocity);
    const auto fact = Factorization::indefinite(system.augmented());

    const int np = system.n_p();
    const int nf = system.n_free();
    const int nc = system.n_constraints();
    const int block = std::min(opts.block_size, np - nc);
    InfSupEstimate est;
    est.h = mesh.h();
    est.spurious_modes = nc - 1;
    if (block < 1) {
        throw std::invalid_argument("pressure space has no mean-zero functions");
    }

    // Constraint modes are M-orthonormal after the first, which is the
    // constant vector; project with the full Gram matrix to be safe.
    const auto& W = system.constraint_modes;
    const auto& C = system.constraints;
    Eigen::MatrixXd gram(nc, nc);
    for (int i = 0; i < nc; ++i) {
        for (int j = 0; j < nc; ++j) {
            gram(i, j) = kernels::dot(W[static_cast<std::size_t>(i)], C[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::LDLT<Eigen::MatrixXd> gram_fact(gram);
    auto project = [&](Eigen::Ref<Eigen::VectorXd> q) {
        Eigen::VectorXd ct(nc);
        for (int i = 0; i < nc; ++i) {
            ct[i] = Eigen::Map<const Eigen::VectorXd>(C[static_cast<std::size_t>(i)].data(), np).dot(q);
        }
        const Eigen::VectorXd c = gram_fact.solve(ct);
        for (int i = 0; i < nc; ++i) {
            q -= c[i] * Eigen::Map<const Eigen::VectorXd>(W[static_cast<std::size_t>(i)].data(), np);
        }
    };
    auto mass = [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd out(np);
        system.M.multiply(std::span<const double>(q.data(), static_cast<std::size_t>(np)),
                          std::span<double>(out.data(), static_cast<std::size_t>(np)));
        return out;
    };

    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd Q(np, block);
    for (int j = 0; j < block; ++j) {
        for (int i = 0; i < np; ++i) {
            Q(i, j) = dist(rng);
        }
        project(Q.col(j));
    }
    Eigen::MatrixXd MQ(np, block);

    std::vector<double> rhs(static_cast<std::size_t>(system.augmented_size()), 0.0);
    double theta_prev = -1.0;
    int settled = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        for (int j = 0; j < block; ++j) {
            MQ.col(j) = mass(Q.col(j));
        }
        // Solve S p - C mu = M q; mu vanishes because M q annihilates the modes.
        Eigen::MatrixXd P(np, block);
        for (int j = 0; j < block; ++j) {
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (int i = 0; i < np; ++i) {
                rhs[static_cast<std::size_t>(nf + i)] = -MQ(i, j);
            }
            const auto x = fact.solve(rhs);
            for (int i = 0; i < np; ++i) {
                P(i, j) = x[static_cast<std::size_t>(nf + i)];
            }
            project(P.col(j));
        }
        // Rayleigh-Ritz: P^T S P = P^T M Q because C^T P = 0.
        Eigen::MatrixXd MP(np, block);
        for (int j = 0; j < block; ++j) {
            MP.col(j) = mass(P.col(j));
        }
        Eigen::MatrixXd H = P.transpose() * MQ;
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::MatrixXd G = P.transpose() * MP;
        G = 0.5 * (G + G.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(H, G);
        if (ritz.info() != Eigen::Success) {
            throw EigenNonConvergence("Rayleigh-Ritz step failed");
        }
        Q = P * ritz.eigenvectors();
        const double theta = ritz.eigenvalues()[0];
        if (!std::isfinite(theta) || theta <= 0.0) {
            throw EigenNonConvergence("nonpositive Ritz value; pressure space has an undetected kernel");
        }
        settled = (theta_prev > 0.0 && std::abs(theta - theta_prev) <= opts.tolerance * theta) ? settled + 1 : 0;
        theta_prev = theta;
        if (settled >= 2) {
            est.iterations = it;
            est.beta_reduced = std::sqrt(theta * opts.nu);
            est.beta_h = est.spurious_modes > 0 ? 0.0 : est.beta_reduced;
            return est;
        }
    }
    throw EigenNonConvergence("inf-sup estimate did not converge in " + std::to_string(opts.max_iterations) +
                              " iterations");
}

InfSupEstimate estimate_infsup(int n, MeshPattern pattern, const Scheme& scheme, const InfSupOptions& opts) {
    auto est = estimate_infsup(build_structured_mesh(n, pattern), scheme, opts);
    est.n = n;
    return est;
}

double consistency_error(const Mesh& mesh, const ProblemSpec& problem) {
    if (!problem.exact) {
        throw std::invalid_argument("consistency_error needs an exact solution");
    }
    const auto& exact = *problem.exact;
    const auto velocity = build_dofmap(mesh, SpaceKind::NCP1_vector);
    const auto& rule = degree6_rule();
    std::vector<double> r(static_cast<std::size_t>(velocity.n_dofs()), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto geo = element_geometry(mesh, t);
        const auto grad = shape_gradients(SpaceKind::NCP1_vector, geo);
        std::array<double, 6> local{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& bary = rule.points[q];
            const double w = rule.weights[q] * geo.area;
            const Point x = geo.map(bary);
            const Mat2 gu = exact.grad_u(x);
            const double p = exact.p(x);
            const Vec2 f = problem.f(x);
            const auto basis = eval_basis(SpaceKind::NCP1_vector, bary);
            for (std::size_t a = 0; a < 3; ++a) {
                for (std::size_t c = 0; c < 2; ++c) {
                    // psi = basis_a e_c: grad psi has row c equal to grad[a], div psi = grad[a][c]
                    const double a_term = problem.nu * (gu[c][0] * grad[a][0] + gu[c][1] * grad[a][1]);
                    local[2 * a + c] += w * (a_term - p * grad[a][c] - f[c] * basis.values[a]);
                }
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 2; ++c) {
                r[static_cast<std::size_t>(velocity.dof(t, a, c))] += local[static_cast<std::size_t>(2 * a + c)];
            }
        }
    }
    std::vector<int> full_to_free(static_cast<std::size_t>(velocity.n_dofs()), -1);
    std::vector<double> r_free;
    for (int d = 0; d < velocity.n_dofs(); ++d) {
        if (!velocity.is_boundary(d)) {
            full_to_free[static_cast<std::size_t>(d)] = static_cast<int>(r_free.size());
            r_free.push_back(r[static_cast<std::size_t>(d)]);
        }
    }
    const int nf = static_cast<int>(r_free.size());
    const auto A = assemble_stiffness(mesh, velocity, 1.0).extract(full_to_free, nf, full_to_free, nf);
    const auto z = solve_spd(A, r_free);
    return std::sqrt(std::max(0.0, kernels::dot(r_free, z)));
}

} // namespace ncstokes
