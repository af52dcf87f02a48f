#include "ncstokes/errors.hpp"
#include "ncstokes/mesh.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

namespace ncstokes {

namespace {

// Returns the next non-empty, comment-stripped line; false at EOF.
bool next_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            return true;
        }
    }
    return false;
}

template <class... T>
void parse_fields(const std::string& line, int lineno, T&... out) {
    std::istringstream ss(line);
    ((ss >> out), ...);
    if (ss.fail()) {
        throw ParseError(lineno, "expected " + std::to_string(sizeof...(T)) + " fields, got '" + line + "'");
    }
    std::string rest;
    if (ss >> rest) {
        throw ParseError(lineno, "trailing content '" + rest + "'");
    }
}

} // namespace

Mesh read_mesh(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!next_line(in, line, lineno)) {
        throw ParseError(lineno, "missing header 'V T'");
    }
    long nv = 0;
    long nt = 0;
    parse_fields(line, lineno, nv, nt);
    if (nv < 3 || nt < 1) {
        throw ParseError(lineno, "need at least 3 vertices and 1 triangle");
    }

    std::vector<Vertex> vertices(static_cast<std::size_t>(nv));
    for (auto& v : vertices) {
        if (!next_line(in, line, lineno)) {
            throw ParseError(lineno, "unexpected end of file in vertex block");
        }
        parse_fields(line, lineno, v.x, v.y);
    }

    std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
    for (auto& t : triangles) {
        if (!next_line(in, line, lineno)) {
            throw ParseError(lineno, "unexpected end of file in triangle block");
        }
        long a = 0, b = 0, c = 0;
        parse_fields(line, lineno, a, b, c);
        for (long idx : {a, b, c}) {
            if (idx < 0 || idx >= nv) {
                throw ParseError(lineno, "vertex index " + std::to_string(idx) + " out of range");
            }
        }
        if (a == b || b == c || a == c) {
            throw ParseError(lineno, "triangle repeats a vertex");
        }
        t.v = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
        const auto& p = vertices[static_cast<std::size_t>(a)];
        const auto& q = vertices[static_cast<std::size_t>(b)];
        const auto& r = vertices[static_cast<std::size_t>(c)];
        const double area2 = (q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y);
        if (area2 == 0.0) {
            throw ParseError(lineno, "degenerate triangle");
        }
        if (area2 < 0.0) {
            std::swap(t.v[1], t.v[2]);
        }
    }
    if (next_line(in, line, lineno)) {
        throw ParseError(lineno, "unexpected content after triangle block");
    }
    try {
        return Mesh(std::move(vertices), std::move(triangles));
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

Mesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mesh file " + path.string());
    }
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    fmt::print(out, "{} {}\n", mesh.num_vertices(), mesh.num_triangles());
    for (const auto& v : mesh.vertices()) {
        fmt::print(out, "{:.17g} {:.17g}\n", v.x, v.y);
    }
    for (const auto& t : mesh.triangles()) {
        fmt::print(out, "{} {} {}\n", t.v[0], t.v[1], t.v[2]);
    }
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_mesh(out, mesh);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace ncstokes
