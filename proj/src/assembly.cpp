#include "ncstokes/assembly.hpp"

#include "ncstokes/errors.hpp"
#include "ncstokes/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <thread>

namespace ncstokes {

namespace {

// Runs `body(t, out)` for every triangle and concatenates the per-element
// output in element order.
template <class T, class Body>
std::vector<T> element_loop(int n_elements, int threads, Body&& body) {
    const int workers = std::clamp(threads, 1, std::max(1, n_elements));
    if (workers == 1) {
        std::vector<T> out;
        for (int t = 0; t < n_elements; ++t) {
            body(t, out);
        }
        return out;
    }
    std::vector<std::vector<T>> parts(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const int chunk = (n_elements + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const int begin = w * chunk;
                const int end = std::min(n_elements, begin + chunk);
                for (int t = begin; t < end; ++t) {
                    body(t, parts[static_cast<std::size_t>(w)]);
                }
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<T> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

void require_matching(const Mesh& mesh, const DofMap& dofs) {
    if (dofs.n_cells() != mesh.num_triangles()) {
        throw std::invalid_argument("dof map does not match mesh");
    }
}

} // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& velocity, double nu, const AssemblyOptions& opts) {
    require_matching(mesh, velocity);
    if (velocity.space() == SpaceKind::P0_scalar) {
        throw std::invalid_argument("stiffness needs a P1 or NCP1 space");
    }
    const int nc = velocity.components();
    auto triplets = element_loop<Triplet>(mesh.num_triangles(), opts.threads, [&](int t, std::vector<Triplet>& out) {
        const auto geo = element_geometry(mesh, t);
        const auto grad = shape_gradients(velocity.space(), geo);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const auto& ga = grad[static_cast<std::size_t>(a)];
                const auto& gb = grad[static_cast<std::size_t>(b)];
                const double k = nu * geo.area * (ga[0] * gb[0] + ga[1] * gb[1]);
                for (int c = 0; c < nc; ++c) {
                    out.push_back({velocity.dof(t, a, c), velocity.dof(t, b, c), k});
                }
            }
        }
    });
    return SparseMatrix::from_triplets(velocity.n_dofs(), velocity.n_dofs(), std::move(triplets));
}

SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
                                 const AssemblyOptions& opts) {
    require_matching(mesh, velocity);
    require_matching(mesh, pressure);
    if (velocity.components() != 2 || pressure.components() != 1) {
        throw std::invalid_argument("divergence needs a vector velocity and a scalar pressure space");
    }
    const auto& rule = midpoint_rule();
    auto triplets = element_loop<Triplet>(mesh.num_triangles(), opts.threads, [&](int t, std::vector<Triplet>& out) {
        const auto geo = element_geometry(mesh, t);
        const auto grad = shape_gradients(velocity.space(), geo);
        // int_K phi_q for each local pressure node
        std::array<double, 3> phi_int{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto basis = eval_basis(pressure.space(), rule.points[q]);
            for (int i = 0; i < basis.count; ++i) {
                phi_int[static_cast<std::size_t>(i)] += rule.weights[q] * geo.area * basis.values[static_cast<std::size_t>(i)];
            }
        }
        for (int i = 0; i < pressure.local_nodes(); ++i) {
            for (int a = 0; a < 3; ++a) {
                for (int c = 0; c < 2; ++c) {
                    out.push_back({pressure.dof(t, i, 0), velocity.dof(t, a, c),
                                   phi_int[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]});
                }
            }
        }
    });
    return SparseMatrix::from_triplets(pressure.n_dofs(), velocity.n_dofs(), std::move(triplets));
}

SparseMatrix assemble_pressure_mass(const Mesh& mesh, const DofMap& pressure, const AssemblyOptions& opts) {
    require_matching(mesh, pressure);
    const auto& rule = midpoint_rule();
    auto triplets = element_loop<Triplet>(mesh.num_triangles(), opts.threads, [&](int t, std::vector<Triplet>& out) {
        const auto geo = element_geometry(mesh, t);
        const int nl = pressure.local_nodes();
        std::array<std::array<double, 3>, 3> m{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto basis = eval_basis(pressure.space(), rule.points[q]);
            for (int i = 0; i < nl; ++i) {
                for (int j = 0; j < nl; ++j) {
                    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        rule.weights[q] * geo.area * basis.values[static_cast<std::size_t>(i)] * basis.values[static_cast<std::size_t>(j)];
                }
            }
        }
        for (int i = 0; i < nl; ++i) {
            for (int j = 0; j < nl; ++j) {
                out.push_back({pressure.dof(t, i, 0), pressure.dof(t, j, 0), m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
            }
        }
    });
    return SparseMatrix::from_triplets(pressure.n_dofs(), pressure.n_dofs(), std::move(triplets));
}

SparseMatrix assemble_stabilization(const Mesh& mesh, const DofMap& pressure, const AssemblyOptions& opts) {
    require_matching(mesh, pressure);
    if (pressure.space() != SpaceKind::P1_scalar) {
        throw std::invalid_argument("projection stabilization is defined for P1 pressure");
    }
    const auto& rule = midpoint_rule();
    auto triplets = element_loop<Triplet>(mesh.num_triangles(), opts.threads, [&](int t, std::vector<Triplet>& out) {
        const auto geo = element_geometry(mesh, t);
        std::array<std::array<double, 3>, 3> g{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto basis = eval_basis(SpaceKind::P1_scalar, rule.points[q]);
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) {
                    // element mean of each P1 basis function is 1/3
                    g[i][j] += rule.weights[q] * geo.area * (basis.values[i] - 1.0 / 3.0) * (basis.values[j] - 1.0 / 3.0);
                }
            }
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                out.push_back({pressure.dof(t, i, 0), pressure.dof(t, j, 0), g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
            }
        }
    });
    return SparseMatrix::from_triplets(pressure.n_dofs(), pressure.n_dofs(), std::move(triplets));
}

std::vector<double> assemble_load(const Mesh& mesh, const DofMap& velocity, const VectorField& f,
                                  const AssemblyOptions& opts) {
    require_matching(mesh, velocity);
    const auto& rule = degree6_rule();
    struct Entry {
        int dof;
        double value;
    };
    const auto entries = element_loop<Entry>(mesh.num_triangles(), opts.threads, [&](int t, std::vector<Entry>& out) {
        const auto geo = element_geometry(mesh, t);
        std::array<double, 6> local{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto basis = eval_basis(velocity.space(), rule.points[q]);
            const Vec2 fv = f(geo.map(rule.points[q]));
            const double w = rule.weights[q] * geo.area;
            for (std::size_t a = 0; a < 3; ++a) {
                local[2 * a] += w * fv[0] * basis.values[a];
                local[2 * a + 1] += w * fv[1] * basis.values[a];
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 2; ++c) {
                out.push_back({velocity.dof(t, a, c), local[static_cast<std::size_t>(2 * a + c)]});
            }
        }
    });
    std::vector<double> rhs(static_cast<std::size_t>(velocity.n_dofs()), 0.0);
    for (const auto& e : entries) {
        rhs[static_cast<std::size_t>(e.dof)] += e.value;
    }
    return rhs;
}

DirichletBC interpolate_dirichlet(const Mesh& mesh, const DofMap& velocity, const VectorField& g) {
    DirichletBC bc;
    for (int dof : velocity.boundary_dofs()) {
        const int node = dof / velocity.components();
        const int comp = dof % velocity.components();
        const Vec2 v = g(node_location(mesh, velocity.space(), node));
        bc.values[dof] = v[static_cast<std::size_t>(comp)];
    }
    return bc;
}

namespace {

int find_root(std::vector<int>& parent, int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
        parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        v = parent[static_cast<std::size_t>(v)];
    }
    return v;
}

double m_inner(const SparseMatrix& M, const std::vector<double>& a, const std::vector<double>& b) {
    return M.bilinear(a, b);
}

} // namespace

std::vector<std::vector<double>> spurious_pressure_modes(const Mesh& mesh, const DofMap& velocity,
                                                         const DofMap& pressure, bool stabilized,
                                                         const SparseMatrix& pressure_mass) {
    // Projection stabilization and piecewise constant pressure leave only
    // constants in the kernel.
    if (stabilized || velocity.space() != SpaceKind::NCP1_vector || pressure.space() != SpaceKind::P1_scalar) {
        return {};
    }
    const int nv = mesh.num_vertices();
    std::vector<int> parent(static_cast<std::size_t>(nv));
    std::iota(parent.begin(), parent.end(), 0);
    auto opposite = [&](int t, int e) {
        for (int k = 0; k < 3; ++k) {
            if (mesh.triangle_edge(t, k) == e) {
                return mesh.triangle(t).v[static_cast<std::size_t>(k)];
            }
        }
        throw std::logic_error("edge not found in adjacent triangle");
    };
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto& edge = mesh.edge(e);
        if (edge.boundary) {
            continue;
        }
        const int a = find_root(parent, opposite(edge.adjacent[0], e));
        const int b = find_root(parent, opposite(edge.adjacent[1], e));
        if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }
    std::vector<int> cls(static_cast<std::size_t>(nv), -1);
    std::vector<int> root_class(static_cast<std::size_t>(nv), -1);
    int n_classes = 0;
    for (int v = 0; v < nv; ++v) {
        const int r = find_root(parent, v);
        if (root_class[static_cast<std::size_t>(r)] < 0) {
            root_class[static_cast<std::size_t>(r)] = n_classes++;
        }
        cls[static_cast<std::size_t>(v)] = root_class[static_cast<std::size_t>(r)];
    }
    if (n_classes == 1) {
        return {};
    }

    // Unknowns: one value per class plus the common vertex sum s.
    std::set<std::vector<int>> rows;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        std::vector<int> row(static_cast<std::size_t>(n_classes) + 1, 0);
        for (int v : mesh.triangle(t).v) {
            ++row[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])];
        }
        row.back() = -1;
        rows.insert(std::move(row));
    }
    Eigen::MatrixXd R(static_cast<Eigen::Index>(rows.size()), n_classes + 1);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        for (int j = 0; j <= n_classes; ++j) {
            R(i, j) = row[static_cast<std::size_t>(j)];
        }
        ++i;
    }
    const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(R).kernel();

    std::vector<std::vector<double>> basis;
    std::vector<double> ones(static_cast<std::size_t>(nv), 1.0);
    const double ones_norm = std::sqrt(m_inner(pressure_mass, ones, ones));
    for (auto& x : ones) {
        x /= ones_norm;
    }
    basis.push_back(ones);
    std::vector<std::vector<double>> modes;
    for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
        std::vector<double> q(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; ++v) {
            q[static_cast<std::size_t>(v)] = kernel(cls[static_cast<std::size_t>(v)], k);
        }
        const double before = std::sqrt(m_inner(pressure_mass, q, q));
        // two passes of Gram-Schmidt for stability
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const double c = m_inner(pressure_mass, q, b);
                for (std::size_t j = 0; j < q.size(); ++j) {
                    q[j] -= c * b[j];
                }
            }
        }
        const double after = std::sqrt(m_inner(pressure_mass, q, q));
        if (after <= 1e-10 * before) {
            continue;
        }
        for (auto& x : q) {
            x /= after;
        }
        basis.push_back(q);
        modes.push_back(std::move(q));
    }
    return modes;
}

SaddleSystem assemble_saddle(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure, double nu,
                             const VectorField& f, bool stabilized, const AssemblyOptions& opts) {
    SaddleSystem s;
    s.velocity_space = velocity.space();
    s.pressure_space = pressure.space();
    s.A = assemble_stiffness(mesh, velocity, nu, opts);
    s.B = assemble_divergence(mesh, velocity, pressure, opts);
    if (stabilized) {
        s.G = assemble_stabilization(mesh, pressure, opts);
    }
    s.M = assemble_pressure_mass(mesh, pressure, opts);
    const std::vector<double> ones(static_cast<std::size_t>(pressure.n_dofs()), 1.0);
    s.c = s.M.multiply(ones);
    s.rhs_u = assemble_load(mesh, velocity, f, opts);
    s.spurious_modes = spurious_pressure_modes(mesh, velocity, pressure, stabilized, s.M);
    return s;
}

ReducedSystem apply_constraints(const SaddleSystem& system, const DirichletBC& bc, const DofMap& velocity) {
    const int nu = system.A.rows();
    if (velocity.n_dofs() != nu) {
        throw std::invalid_argument("velocity dof map does not match the system");
    }
    for (const auto& [dof, value] : bc.values) {
        if (dof < 0 || dof >= nu || !velocity.is_boundary(dof)) {
            throw InconsistentBC("value prescribed for non-boundary dof " + std::to_string(dof));
        }
        if (!std::isfinite(value)) {
            throw InconsistentBC("non-finite boundary value at dof " + std::to_string(dof));
        }
    }
    for (int dof : velocity.boundary_dofs()) {
        if (!bc.values.contains(dof)) {
            throw InconsistentBC("boundary dof " + std::to_string(dof) + " has no prescribed value");
        }
    }

    ReducedSystem r;
    r.velocity_space = system.velocity_space;
    r.pressure_space = system.pressure_space;
    r.M = system.M;
    r.n_u_full = nu;
    r.bc = bc;
    r.full_to_free.assign(static_cast<std::size_t>(nu), -1);
    for (int d = 0; d < nu; ++d) {
        if (!velocity.is_boundary(d)) {
            r.full_to_free[static_cast<std::size_t>(d)] = static_cast<int>(r.free_dofs.size());
            r.free_dofs.push_back(d);
        }
    }
    const int nf = r.n_free();
    const int np = system.B.rows();
    std::vector<int> p_identity(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        p_identity[static_cast<std::size_t>(i)] = i;
    }
    r.A = system.A.extract(r.full_to_free, nf, r.full_to_free, nf);
    r.B = system.B.extract(p_identity, np, r.full_to_free, nf);
    r.G = system.G;

    std::vector<double> lift(static_cast<std::size_t>(nu), 0.0);
    for (const auto& [dof, value] : bc.values) {
        lift[static_cast<std::size_t>(dof)] = value;
    }
    const auto a_lift = system.A.multiply(lift);
    r.rhs_u.resize(static_cast<std::size_t>(nf));
    for (int i = 0; i < nf; ++i) {
        const auto d = static_cast<std::size_t>(r.free_dofs[static_cast<std::size_t>(i)]);
        r.rhs_u[static_cast<std::size_t>(i)] = system.rhs_u[d] - a_lift[d];
    }
    r.rhs_p = system.B.multiply(lift);

    r.constraints.push_back(system.c);
    r.constraint_modes.emplace_back(static_cast<std::size_t>(np), 1.0);
    for (const auto& z : system.spurious_modes) {
        r.constraints.push_back(system.M.multiply(z));
        r.constraint_modes.push_back(z);
    }
    return r;
}

SparseMatrix ReducedSystem::augmented() const {
    const int nf = n_free();
    const int np = n_p();
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(A.nnz() + 2 * B.nnz() + (G ? G->nnz() : 0) + 2 * np * n_constraints()));
    for (int r = 0; r < nf; ++r) {
        for (int k = A.row_ptr()[static_cast<std::size_t>(r)]; k < A.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
            t.push_back({r, A.col_idx()[static_cast<std::size_t>(k)], A.values()[static_cast<std::size_t>(k)]});
        }
    }
    for (int r = 0; r < np; ++r) {
        for (int k = B.row_ptr()[static_cast<std::size_t>(r)]; k < B.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = B.col_idx()[static_cast<std::size_t>(k)];
            const double v = -B.values()[static_cast<std::size_t>(k)];
            t.push_back({nf + r, c, v});
            t.push_back({c, nf + r, v});
        }
    }
    if (G) {
        for (int r = 0; r < np; ++r) {
            for (int k = G->row_ptr()[static_cast<std::size_t>(r)]; k < G->row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
                t.push_back({nf + r, nf + G->col_idx()[static_cast<std::size_t>(k)], -G->values()[static_cast<std::size_t>(k)]});
            }
        }
    }
    for (int j = 0; j < n_constraints(); ++j) {
        const auto& cvec = constraints[static_cast<std::size_t>(j)];
        const int row = nf + np + j;
        for (int i = 0; i < np; ++i) {
            const double v = cvec[static_cast<std::size_t>(i)];
            if (v != 0.0) {
                t.push_back({nf + i, row, v});
                t.push_back({row, nf + i, v});
            }
        }
    }
    const int n = augmented_size();
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

std::vector<double> ReducedSystem::augmented_rhs() const {
    std::vector<double> rhs(static_cast<std::size_t>(augmented_size()), 0.0);
    std::copy(rhs_u.begin(), rhs_u.end(), rhs.begin());
    std::copy(rhs_p.begin(), rhs_p.end(), rhs.begin() + n_free());
    return rhs;
}

} // namespace ncstokes
