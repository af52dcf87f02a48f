#include "ncstokes/mesh.hpp"

#include "ncstokes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace ncstokes {

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

} // namespace

EdgeTable build_edge_table(std::span<const Vertex> vertices, std::span<const Triangle> triangles) {
    struct HalfEdge {
        int lo, hi, tri, local;
        bool forward; // traversed lo -> hi in the triangle's orientation
    };
    const int nv = static_cast<int>(vertices.size());
    std::vector<HalfEdge> half;
    half.reserve(3 * triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& v = triangles[t].v;
        for (int k = 0; k < 3; ++k) {
            const int a = v[static_cast<std::size_t>((k + 1) % 3)];
            const int b = v[static_cast<std::size_t>((k + 2) % 3)];
            if (a < 0 || b < 0 || a >= nv || b >= nv) {
                throw InvalidMesh("triangle " + std::to_string(t) + " references a vertex out of range");
            }
            half.push_back({std::min(a, b), std::max(a, b), static_cast<int>(t), k, a < b});
        }
    }
    std::sort(half.begin(), half.end(), [](const HalfEdge& l, const HalfEdge& r) {
        return std::tie(l.lo, l.hi, l.tri, l.local) < std::tie(r.lo, r.hi, r.tri, r.local);
    });

    EdgeTable table;
    table.triangle_edges.assign(triangles.size(), {-1, -1, -1});
    for (std::size_t i = 0; i < half.size();) {
        std::size_t j = i;
        while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) {
            ++j;
        }
        const auto count = j - i;
        if (count > 2) {
            throw NonConforming("edge (" + std::to_string(half[i].lo) + ", " + std::to_string(half[i].hi) +
                                ") is shared by " + std::to_string(count) + " triangles");
        }
        if (count == 2 && half[i].forward == half[i + 1].forward) {
            throw NonConforming("edge (" + std::to_string(half[i].lo) + ", " + std::to_string(half[i].hi) +
                                ") has two neighbours with the same orientation");
        }
        Edge e;
        e.endpoints = {half[i].lo, half[i].hi};
        e.adjacent = {half[i].tri, count == 2 ? half[i + 1].tri : -1};
        e.boundary = count == 1;
        const int id = static_cast<int>(table.edges.size());
        for (std::size_t k = i; k < j; ++k) {
            table.triangle_edges[static_cast<std::size_t>(half[k].tri)][static_cast<std::size_t>(half[k].local)] = id;
        }
        table.edges.push_back(e);
        i = j;
    }
    return table;
}

Mesh::Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y)) {
            throw InvalidMesh("vertex " + std::to_string(i) + " has non-finite coordinates");
        }
    }
    const int nv = num_vertices();
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& v = triangles_[t].v;
        for (int idx : v) {
            if (idx < 0 || idx >= nv) {
                throw InvalidMesh("triangle " + std::to_string(t) + " references a vertex out of range");
            }
        }
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
            throw InvalidMesh("triangle " + std::to_string(t) + " repeats a vertex");
        }
        if (!(signed_area(static_cast<int>(t)) > 0.0)) {
            throw InvalidMesh("triangle " + std::to_string(t) + " is not counterclockwise");
        }
    }
    auto table = build_edge_table(vertices_, triangles_);
    edges_ = std::move(table.edges);
    tri_edges_ = std::move(table.triangle_edges);
    for (int e = 0; e < num_edges(); ++e) {
        h_ = std::max(h_, edge_length(e));
    }
}

std::array<Point, 3> Mesh::corners(int t) const {
    const auto& v = triangle(t).v;
    return {vertex(v[0]), vertex(v[1]), vertex(v[2])};
}

double Mesh::signed_area(int t) const {
    const auto p = corners(t);
    return orient(p[0], p[1], p[2]);
}

Point Mesh::centroid(int t) const {
    const auto p = corners(t);
    return {(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0};
}

Point Mesh::midpoint(int e) const {
    const auto& a = vertex(edge(e).endpoints[0]);
    const auto& b = vertex(edge(e).endpoints[1]);
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

double Mesh::edge_length(int e) const {
    const auto& a = vertex(edge(e).endpoints[0]);
    const auto& b = vertex(edge(e).endpoints[1]);
    return std::hypot(b.x - a.x, b.y - a.y);
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < num_triangles(); ++t) {
        sum += signed_area(t);
    }
    return sum;
}

std::vector<bool> Mesh::boundary_vertices() const {
    std::vector<bool> flag(vertices_.size(), false);
    for (const auto& e : edges_) {
        if (e.boundary) {
            flag[static_cast<std::size_t>(e.endpoints[0])] = true;
            flag[static_cast<std::size_t>(e.endpoints[1])] = true;
        }
    }
    return flag;
}

int Mesh::num_boundary_edges() const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.boundary; }));
}

Mesh build_structured_mesh(int n, MeshPattern pattern) {
    if (n < 1) {
        throw InvalidMesh("structured mesh needs n >= 1");
    }
    const int stride = n + 1;
    std::vector<Vertex> vertices;
    vertices.reserve(static_cast<std::size_t>(stride * stride));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = j * stride + i;
            const int b = a + 1;
            const int c = a + stride + 1;
            const int d = a + stride;
            const bool flip = pattern == MeshPattern::Skew3 && (i + 2 * j) % 3 == 0;
            if (!flip) {
                triangles.push_back({{a, b, c}});
                triangles.push_back({{a, c, d}});
            } else {
                triangles.push_back({{a, b, d}});
                triangles.push_back({{b, c, d}});
            }
        }
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

} // namespace ncstokes
