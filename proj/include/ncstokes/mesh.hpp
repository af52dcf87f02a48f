#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace ncstokes {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Vertex = Point;

/// Counterclockwise vertex triple.
struct Triangle {
    std::array<int, 3> v{};
};

/// Undirected mesh edge. `endpoints` is sorted; `adjacent[1] == -1` on the boundary.
struct Edge {
    std::array<int, 2> endpoints{};
    std::array<int, 2> adjacent{-1, -1};
    bool boundary = false;
};

/// Structured unit-square triangulations. `Diagonal` cuts every square from
/// lower-left to upper-right. `Skew3` flips the diagonal of every square with
/// (i + 2j) % 3 == 0, which breaks the 3-colourability of the vertex graph.
enum class MeshPattern { Diagonal, Skew3 };

/// Conforming triangulation of a polygonal domain. Immutable after construction.
///
/// Local edge k of a triangle is the edge opposite its local vertex k, i.e. the
/// segment from v[(k+1)%3] to v[(k+2)%3].
class Mesh {
public:
    /// Validates orientation and indices, then builds the edge table.
    /// Throws InvalidMesh or NonConforming.
    Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles);

    std::span<const Vertex> vertices() const { return vertices_; }
    std::span<const Triangle> triangles() const { return triangles_; }
    std::span<const Edge> edges() const { return edges_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const Vertex& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    /// Global edge index of local edge k of triangle t.
    int triangle_edge(int t, int k) const { return tri_edges_[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]; }
    const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[static_cast<std::size_t>(t)]; }

    std::array<Point, 3> corners(int t) const;
    double signed_area(int t) const;
    Point centroid(int t) const;
    Point midpoint(int e) const;
    double edge_length(int e) const;

    /// Maximum edge length.
    double h() const { return h_; }
    double total_area() const;
    std::vector<bool> boundary_vertices() const;
    int num_boundary_edges() const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    double h_ = 0.0;
};

struct EdgeTable {
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> triangle_edges;
};

/// Edges sorted lexicographically by endpoints. Throws NonConforming when an
/// edge has more than two neighbours or two neighbours with the same orientation.
EdgeTable build_edge_table(std::span<const Vertex> vertices, std::span<const Triangle> triangles);

/// n x n squares of the unit square, two triangles each.
Mesh build_structured_mesh(int n, MeshPattern pattern = MeshPattern::Diagonal);

// Text format: `V T`, then V lines `x y`, then T lines `i j k` (0-based).
// `#` starts a comment. Clockwise triangles are reoriented on read.
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh);

} // namespace ncstokes
