#include "edg/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace edg {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d e1 = b - a;
  const Eigen::Vector2d e2 = c - a;
  return 0.5 * (e1(0) * e2(1) - e1(1) * e2(0));
}

}  // namespace

Mesh::Mesh(std::vector<Eigen::Vector2d> vertices, std::vector<std::array<int, 3>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  for (const auto& c : cells_) {
    for (int v : c) {
      if (v < 0 || v >= nv) throw std::invalid_argument("mesh: cell vertex index out of range");
    }
    if (signed_area(vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]) <= 0.0) {
      throw std::invalid_argument("mesh: cell with non-positive orientation");
    }
  }

  std::map<std::array<int, 2>, int> lookup;
  cell_facets_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      int a = cells_[c][(i + 1) % 3];
      int b = cells_[c][(i + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = lookup.try_emplace({a, b}, num_facets());
      if (inserted) {
        Facet f;
        f.vertices = {a, b};
        f.cells[0] = c;
        f.local_index[0] = i;
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.cells[1] >= 0) throw std::invalid_argument("mesh: non-conforming facet shared by >2 cells");
        f.cells[1] = c;
        f.local_index[1] = i;
      }
      cell_facets_[c][i] = it->second;
    }
  }

  boundary_vertex_.assign(nv, false);
  for (Facet& f : facets_) {
    // cells[0] < cells[1] holds by construction (cells visited in order).
    f.normal = outward_normal(f.cells[0], f.local_index[0]);
    f.length = (vertices_[f.vertices[1]] - vertices_[f.vertices[0]]).norm();
    if (f.on_boundary()) {
      boundary_vertex_[f.vertices[0]] = true;
      boundary_vertex_[f.vertices[1]] = true;
    }
  }

  diameter_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
      d = std::max(d, (vertices_[cells_[c][i]] - vertices_[cells_[c][(i + 1) % 3]]).norm());
    }
    diameter_[c] = d;
    h_ = std::max(h_, d);
  }
}

Eigen::Vector2d Mesh::outward_normal(int c, int i) const {
  const Eigen::Vector2d& a = vertices_[cells_[c][(i + 1) % 3]];
  const Eigen::Vector2d& b = vertices_[cells_[c][(i + 2) % 3]];
  const Eigen::Vector2d e = b - a;
  // Counter-clockwise cells: the outward normal is the edge rotated clockwise.
  return Eigen::Vector2d(e(1), -e(0)).normalized();
}

int Mesh::num_interior_facets() const {
  return static_cast<int>(std::count_if(facets_.begin(), facets_.end(),
                                        [](const Facet& f) { return !f.on_boundary(); }));
}

Eigen::Matrix2d Mesh::jacobian(int c) const {
  const auto& v = cells_[c];
  Eigen::Matrix2d j;
  j.col(0) = vertices_[v[1]] - vertices_[v[0]];
  j.col(1) = vertices_[v[2]] - vertices_[v[0]];
  return j;
}

Eigen::Vector2d Mesh::map_to_physical(int c, const Eigen::Vector2d& xi) const {
  return vertices_[cells_[c][0]] + jacobian(c) * xi;
}

Eigen::Vector2d Mesh::map_to_reference(int c, const Eigen::Vector2d& x) const {
  return jacobian(c).inverse() * (x - vertices_[cells_[c][0]]);
}

Mesh generate_structured(int n) {
  if (n < 1) throw std::invalid_argument("generate_structured: n must be >= 1");
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * (n + 1) + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + n + 1;
      const int v11 = v01 + 1;
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<Eigen::Vector2d> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  vertices.reserve(nv + mesh.num_facets());
  for (const Facet& f : mesh.facets()) {
    vertices.push_back(0.5 * (mesh.vertex(f.vertices[0]) + mesh.vertex(f.vertices[1])));
  }
  std::vector<std::array<int, 3>> cells;
  cells.reserve(4 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cell(c);
    const int m0 = nv + mesh.cell_facet(c, 0);
    const int m1 = nv + mesh.cell_facet(c, 1);
    const int m2 = nv + mesh.cell_facet(c, 2);
    cells.push_back({v[0], m2, m1});
    cells.push_back({m2, v[1], m0});
    cells.push_back({m1, m0, v[2]});
    cells.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(cells));
}

std::vector<VertexPatch> build_patches(const Mesh& mesh) {
  std::vector<VertexPatch> patches(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) patches[v].vertex = v;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int v : mesh.cell(c)) patches[v].cells.push_back(c);
  }
  for (VertexPatch& p : patches) {
    std::vector<int> facets;
    for (int c : p.cells) {
      for (int i = 0; i < 3; ++i) facets.push_back(mesh.cell_facet(c, i));
    }
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
    for (int f : facets) {
      const Facet& facet = mesh.facet(f);
      const bool incident = facet.vertices[0] == p.vertex || facet.vertices[1] == p.vertex;
      if (incident && !facet.on_boundary()) {
        p.interior_facets.push_back(f);
        p.interior_measure += facet.length;
      } else {
        p.boundary_facets.push_back(f);
        if (incident) p.domain_facets_at_vertex.push_back(f);
      }
    }
  }
  return patches;
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1) throw std::runtime_error("read_mesh: bad header in " + path);
  std::vector<Eigen::Vector2d> vertices(nv);
  for (auto& x : vertices) {
    if (!(in >> x(0) >> x(1))) throw std::runtime_error("read_mesh: truncated vertex list");
  }
  std::vector<std::array<int, 3>> cells(nc);
  for (auto& c : cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) throw std::runtime_error("read_mesh: truncated cell list");
    for (int v : c) {
      if (v < 0 || v >= nv) throw std::runtime_error("read_mesh: vertex index out of range");
    }
    if (signed_area(vertices[c[0]], vertices[c[1]], vertices[c[2]]) < 0.0) std::swap(c[1], c[2]);
  }
  return Mesh(std::move(vertices), std::move(cells));
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (const auto& x : mesh.vertices()) out << x(0) << ' ' << x(1) << '\n';
  for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

}  // namespace edg
