#include "ncstokes/output.hpp"

#include "ncstokes/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>

namespace ncstokes {

namespace {

std::string rate_cell(const std::optional<double>& rate) {
    return rate ? fmt::format("{:.4f}", *rate) : std::string();
}

} // namespace

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
    fmt::print(out, "n,h,rel_l2_u,rel_h1_u,rel_l2_p,rate_l2,rate_h1,rate_p\n");
    for (const auto& r : records) {
        fmt::print(out, "{},{:.6g},{:.6g},{:.6g},{:.6g},{},{},{}\n", r.n, r.h, r.errors.rel_l2_u, r.errors.rel_h1h_u,
                   r.errors.rel_l2_p, rate_cell(r.rate_l2), rate_cell(r.rate_h1), rate_cell(r.rate_p));
    }
}

void write_infsup_csv(std::ostream& out, std::span<const InfSupEstimate> estimates) {
    fmt::print(out, "n,h,beta_h\n");
    for (const auto& e : estimates) {
        fmt::print(out, "{},{:.6g},{:.10g}\n", e.n, e.h, e.beta_h);
    }
}

void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
               const SolutionField& solution) {
    const int nv = mesh.num_vertices();
    const int nt = mesh.num_triangles();
    fmt::print(out, "# vtk DataFile Version 3.0\nncstokes {} / {}\nASCII\nDATASET UNSTRUCTURED_GRID\n",
               to_string(velocity.space()), to_string(pressure.space()));
    fmt::print(out, "POINTS {} double\n", nv);
    for (const auto& v : mesh.vertices()) {
        fmt::print(out, "{:.17g} {:.17g} 0\n", v.x, v.y);
    }
    fmt::print(out, "CELLS {} {}\n", nt, 4 * nt);
    for (const auto& t : mesh.triangles()) {
        fmt::print(out, "3 {} {} {}\n", t.v[0], t.v[1], t.v[2]);
    }
    fmt::print(out, "CELL_TYPES {}\n", nt);
    for (int t = 0; t < nt; ++t) {
        fmt::print(out, "5\n");
    }
    constexpr std::array<double, 3> centroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    fmt::print(out, "CELL_DATA {}\nVECTORS velocity double\n", nt);
    for (int t = 0; t < nt; ++t) {
        const Vec2 u = evaluate_vector(solution.u.values, velocity, t, centroid);
        fmt::print(out, "{:.17g} {:.17g} 0\n", u[0], u[1]);
    }
    if (pressure.space() == SpaceKind::P0_scalar) {
        fmt::print(out, "SCALARS pressure double 1\nLOOKUP_TABLE default\n");
        for (double p : solution.p.values) {
            fmt::print(out, "{:.17g}\n", p);
        }
    } else {
        fmt::print(out, "POINT_DATA {}\nSCALARS pressure double 1\nLOOKUP_TABLE default\n", nv);
        for (double p : solution.p.values) {
            fmt::print(out, "{:.17g}\n", p);
        }
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& write) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write(out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace ncstokes
