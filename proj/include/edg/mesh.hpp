#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace edg {

/// Edge of the triangulation.
///
/// `vertices` is sorted ascending; the facet parameter t in [0,1] runs from
/// vertices[0] to vertices[1]. `cells[0]` is the lower-index adjacent cell and
/// `normal` is its outward unit normal, so on interior facets the normal
/// points from cells[0] into cells[1]. Boundary facets have cells[1] == -1.
struct Facet {
  std::array<int, 2> vertices{};
  std::array<int, 2> cells{-1, -1};
  std::array<int, 2> local_index{-1, -1};
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double length = 0.0;

  bool on_boundary() const { return cells[1] < 0; }
  Eigen::Vector2d point(const std::vector<Eigen::Vector2d>& coords, double t) const {
    return (1.0 - t) * coords[vertices[0]] + t * coords[vertices[1]];
  }
};

/// Conforming triangulation of a polygonal domain with facet topology.
///
/// Local facet i of a cell is opposite its local vertex i. Cells are stored
/// with positive orientation.
class Mesh {
 public:
  Mesh(std::vector<Eigen::Vector2d> vertices, std::vector<std::array<int, 3>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return cells_[c]; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const Facet& facet(int f) const { return facets_[f]; }
  const std::vector<Facet>& facets() const { return facets_; }

  /// Global facet index of local facet i of cell c.
  int cell_facet(int c, int i) const { return cell_facets_[c][i]; }
  /// Outward unit normal of cell c on its local facet i.
  Eigen::Vector2d outward_normal(int c, int i) const;
  /// +1 if the stored facet normal is outward for cell c, -1 otherwise.
  double normal_sign(int c, int f) const { return facets_[f].cells[0] == c ? 1.0 : -1.0; }

  bool vertex_on_boundary(int v) const { return boundary_vertex_[v]; }
  int num_interior_facets() const;

  double area(int c) const { return 0.5 * jacobian(c).determinant(); }
  double diameter(int c) const { return diameter_[c]; }
  /// Global mesh size h = max_K h_K.
  double h() const { return h_; }

  /// Affine map x = v0 + J xi from the reference triangle.
  Eigen::Matrix2d jacobian(int c) const;
  Eigen::Vector2d map_to_physical(int c, const Eigen::Vector2d& xi) const;
  Eigen::Vector2d map_to_reference(int c, const Eigen::Vector2d& x) const;

 private:
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> cell_facets_;
  std::vector<double> diameter_;
  std::vector<bool> boundary_vertex_;
  double h_ = 0.0;
};

/// Union of the cells that contain one mesh vertex.
struct VertexPatch {
  int vertex = -1;
  std::vector<int> cells;
  /// Interior facets of the patch: incident to the vertex, shared by two patch cells.
  std::vector<int> interior_facets;
  /// Facets on the patch boundary (includes domain-boundary facets incident to the vertex).
  std::vector<int> boundary_facets;
  /// Domain-boundary facets incident to the vertex (subset of boundary_facets).
  std::vector<int> domain_facets_at_vertex;
  /// Total length of the interior facets.
  double interior_measure = 0.0;
};

/// n x n squares of the unit square, each split along its (0,0)-(1,1) diagonal.
Mesh generate_structured(int n);

/// Red refinement: every triangle is split into four via edge midpoints.
Mesh uniform_refine(const Mesh& mesh);

/// One patch per mesh vertex, in vertex order.
std::vector<VertexPatch> build_patches(const Mesh& mesh);

/// Plain-text mesh: `nv nc`, then nv lines `x y`, then nc lines `i j k`.
/// Negatively oriented cells are flipped on load.
Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace edg
