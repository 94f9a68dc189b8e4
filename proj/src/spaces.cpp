#include "edg/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edg/basis.hpp"

namespace edg {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CellVelocity: return "cell-velocity";
    case SpaceKind::CellPressure: return "cell-pressure";
    case SpaceKind::SkeletonVelocity: return "skeleton-velocity";
    case SpaceKind::SkeletonPressure: return "skeleton-pressure";
  }
  return "unknown";
}

DofMap::DofMap(SpaceKind kind, int degree, int components, int size,
               std::vector<std::vector<int>> entity_dofs)
    : kind_(kind),
      degree_(degree),
      components_(components),
      size_(size),
      nodes_per_entity_(entity_dofs.empty() ? 0 : static_cast<int>(entity_dofs.front().size()) / components),
      entity_dofs_(std::move(entity_dofs)) {}

void validate_degrees(int k, int m) {
  if (k < 1 || k > kMaxDegree) throw std::invalid_argument("velocity degree k must be in [1, 4]");
  if (m != k && m != k - 1) throw std::invalid_argument("trace pressure degree m must be k or k-1");
  if (m == k - 1 && k < 2) throw std::invalid_argument("m = k-1 requires k >= 2");
}

namespace {

DofMap build_cell_space(SpaceKind kind, const Mesh& mesh, int degree, int components) {
  const int nloc = triangle_dim(degree);
  std::vector<std::vector<int>> dofs(mesh.num_cells(), std::vector<int>(components * nloc));
  int next = 0;
  for (auto& d : dofs) {
    for (int& i : d) i = next++;
  }
  return DofMap(kind, degree, components, next, std::move(dofs));
}

// Continuous nodal skeleton space: one dof per (non-constrained) vertex and
// degree-1 per facet interior, each replicated over the components.
DofMap build_skeleton_space(SpaceKind kind, const Mesh& mesh, int degree, int components,
                            bool strong_boundary) {
  std::vector<int> vertex_index(mesh.num_vertices(), -1);
  int nscalar = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (strong_boundary && mesh.vertex_on_boundary(v)) continue;
    vertex_index[v] = nscalar++;
  }
  std::vector<int> facet_offset(mesh.num_facets(), -1);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (strong_boundary && mesh.facet(f).on_boundary()) continue;
    facet_offset[f] = nscalar;
    nscalar += degree - 1;
  }
  std::vector<std::vector<int>> dofs(mesh.num_facets(), std::vector<int>(components * (degree + 1), -1));
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facet(f);
    std::vector<int> scalar(degree + 1, -1);
    scalar[0] = vertex_index[facet.vertices[0]];
    scalar[degree] = vertex_index[facet.vertices[1]];
    if (facet_offset[f] >= 0) {
      for (int i = 1; i < degree; ++i) scalar[i] = facet_offset[f] + i - 1;
    }
    for (int c = 0; c < components; ++c) {
      for (int i = 0; i <= degree; ++i) {
        dofs[f][c * (degree + 1) + i] = scalar[i] < 0 ? -1 : components * scalar[i] + c;
      }
    }
  }
  return DofMap(kind, degree, components, components * nscalar, std::move(dofs));
}

}  // namespace

DofMap build_space(SpaceKind kind, const Mesh& mesh, int k, int m) {
  validate_degrees(k, m);
  switch (kind) {
    case SpaceKind::CellVelocity: return build_cell_space(kind, mesh, k, 2);
    case SpaceKind::CellPressure: return build_cell_space(kind, mesh, k - 1, 1);
    case SpaceKind::SkeletonVelocity: return build_skeleton_space(kind, mesh, k, 2, true);
    case SpaceKind::SkeletonPressure: return build_skeleton_space(kind, mesh, m, 1, false);
  }
  throw std::invalid_argument("build_space: unknown space kind");
}

EdgSpaces build_edg_spaces(const Mesh& mesh, int k, int m) {
  return EdgSpaces{k,
                   m,
                   build_space(SpaceKind::CellVelocity, mesh, k, m),
                   build_space(SpaceKind::CellPressure, mesh, k, m),
                   build_space(SpaceKind::SkeletonVelocity, mesh, k, m),
                   build_space(SpaceKind::SkeletonPressure, mesh, k, m)};
}

Eigen::Vector2d koszul(const Eigen::Vector2d& center, const Eigen::Vector2d& x, double a) {
  return Eigen::Vector2d(-(x(1) - center(1)), x(0) - center(0)) * a;
}

int PatchSpaces::cell_sigma_size() const { return 2 * triangle_dim(k); }
int PatchSpaces::sigma_size() const { return static_cast<int>(cells.size()) * cell_sigma_size(); }
int PatchSpaces::normal_constraint_size() const {
  return static_cast<int>(constrained_facets.size()) * (k + 1);
}
int PatchSpaces::cell_pressure_size() const { return static_cast<int>(cells.size()) * triangle_dim(k - 1); }
int PatchSpaces::trace_pressure_size() const { return static_cast<int>(flux_facets.size()) * (k + 1); }

Eigen::Vector2d PatchSpaces::lambda(int j, const Eigen::Vector2d& x) const {
  const auto [a, b] = lambda_exponents[j];
  const Eigen::Vector2d s = (x - center) / scale;
  return koszul(center, x, std::pow(s(0), a) * std::pow(s(1), b)) / scale;
}

PatchSpaces build_patch_spaces(const Mesh& mesh, const VertexPatch& patch, int k, DomainBoundaryFlux flux) {
  if (k < 1 || k > kMaxDegree) throw std::invalid_argument("build_patch_spaces: k must be in [1, 4]");
  PatchSpaces s;
  s.vertex = patch.vertex;
  s.k = k;
  s.center = mesh.vertex(patch.vertex);
  s.cells = patch.cells;
  s.flux_facets = patch.interior_facets;
  for (int f : patch.boundary_facets) {
    const bool at_vertex = std::find(patch.domain_facets_at_vertex.begin(), patch.domain_facets_at_vertex.end(),
                                     f) != patch.domain_facets_at_vertex.end();
    if (at_vertex && flux == DomainBoundaryFlux::Corrected) {
      s.flux_facets.push_back(f);
    } else {
      s.constrained_facets.push_back(f);
    }
  }
  std::sort(s.flux_facets.begin(), s.flux_facets.end());
  for (int f : s.flux_facets) s.flux_measure += mesh.facet(f).length;
  double scale = 0.0;
  for (int c : s.cells) scale = std::max(scale, mesh.diameter(c));
  s.scale = scale;
  if (k >= 3) s.lambda_exponents = monomial_exponents(k - 3);
  return s;
}

DecompositionReport decomposition_check(int k, const Eigen::Vector2d& center) {
  if (k < 2) throw std::invalid_argument("decomposition_check: k must be >= 2");
  DecompositionReport r;
  r.dim_gradients = triangle_dim(k - 1) - 1;
  r.dim_koszul = triangle_dim(k - 3);
  r.dim_target = 2 * triangle_dim(k - 2);

  // Evaluate both families at enough scattered points to expose the rank.
  const int npts = 3 * r.dim_target + 5;
  Eigen::MatrixXd cols(2 * npts, r.dim_gradients + r.dim_koszul);
  const auto grad_exp = monomial_exponents(k - 1);
  const auto kos_exp = k >= 3 ? monomial_exponents(k - 3) : std::vector<std::array<int, 2>>{};
  for (int q = 0; q < npts; ++q) {
    const Eigen::Vector2d x(std::sin(1.3 * q + 0.2), std::cos(2.1 * q + 0.7));
    const Eigen::Vector2d s = x - center;
    int c = 0;
    for (const auto& [a, b] : grad_exp) {
      if (a + b == 0) continue;
      const double gx = a == 0 ? 0.0 : a * std::pow(s(0), a - 1) * std::pow(s(1), b);
      const double gy = b == 0 ? 0.0 : b * std::pow(s(0), a) * std::pow(s(1), b - 1);
      cols(2 * q, c) = gx;
      cols(2 * q + 1, c) = gy;
      ++c;
    }
    for (const auto& [a, b] : kos_exp) {
      const Eigen::Vector2d v = koszul(center, x, std::pow(s(0), a) * std::pow(s(1), b));
      cols(2 * q, c) = v(0);
      cols(2 * q + 1, c) = v(1);
      ++c;
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cols);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = 1e-10 * (sv.size() > 0 ? sv(0) : 1.0);
  r.rank = static_cast<int>((sv.array() > tol).count());
  r.ok = (r.dim_gradients + r.dim_koszul == r.dim_target) && r.rank == r.dim_target;
  return r;
}

}  // namespace edg
