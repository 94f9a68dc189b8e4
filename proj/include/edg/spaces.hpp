#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edg/mesh.hpp"

namespace edg {

enum class SpaceKind {
  CellVelocity,      // [P_k(K)]^2, broken
  CellPressure,      // P_{k-1}(K), broken
  SkeletonVelocity,  // [P_k(F)]^2, continuous on the skeleton, zero on the boundary
  SkeletonPressure,  // P_m(F), continuous on the skeleton
};

std::string to_string(SpaceKind kind);

/// Degree-of-freedom numbering of one discrete space.
///
/// Entities are cells (cell spaces) or facets (skeleton spaces). For each
/// entity the local dofs are listed component-major: all nodes of component
/// 0, then all nodes of component 1. Skeleton nodes follow the facet
/// parameter from vertices[0] to vertices[1]. Constrained (Dirichlet) dofs
/// are -1.
class DofMap {
 public:
  DofMap(SpaceKind kind, int degree, int components, int size,
         std::vector<std::vector<int>> entity_dofs);

  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  int size() const { return size_; }
  int num_entities() const { return static_cast<int>(entity_dofs_.size()); }
  /// Nodes per entity and component.
  int nodes_per_entity() const { return nodes_per_entity_; }
  const std::vector<int>& dofs(int entity) const { return entity_dofs_[entity]; }

 private:
  SpaceKind kind_;
  int degree_;
  int components_;
  int size_;
  int nodes_per_entity_;
  std::vector<std::vector<int>> entity_dofs_;
};

/// Checks k in [1, 4] and m in {k-1, k}, with m = k-1 only for k >= 2.
void validate_degrees(int k, int m);

DofMap build_space(SpaceKind kind, const Mesh& mesh, int k, int m);

/// The four global spaces of the EDG discretization.
struct EdgSpaces {
  int k = 0;
  int m = 0;
  DofMap velocity;
  DofMap pressure;
  DofMap velocity_trace;
  DofMap pressure_trace;
};

EdgSpaces build_edg_spaces(const Mesh& mesh, int k, int m);

/// Koszul operator shifted to `center`: a -> (-(x2 - c2), x1 - c1) a.
Eigen::Vector2d koszul(const Eigen::Vector2d& center, const Eigen::Vector2d& x, double a);

/// Which facets receive trace multipliers in the vertex-patch problems.
enum class DomainBoundaryFlux {
  /// Domain-boundary facets incident to the patch vertex carry a multiplier,
  /// so the reconstructed field has zero normal trace on the boundary.
  Corrected,
  /// Only interior patch facets carry multipliers; every patch-boundary
  /// facet, including those on the domain boundary, has zero normal trace.
  Ignored,
};

/// Local spaces of one vertex patch.
///
/// Sigma is broken [P_k]^2 on the patch cells (same cell basis as the global
/// velocity). Its zero normal trace on `constrained_facets` is imposed by
/// k+1 moment multipliers per facet. The pressure pair lives on the cells
/// (P_{k-1}) and on `flux_facets` (broken P_k) modulo constants. Lambda is
/// spanned by Koszul images of shifted, scaled monomials of degree <= k-3.
struct PatchSpaces {
  int vertex = -1;
  int k = 0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double scale = 1.0;  // monomial scaling length for the Lambda basis
  std::vector<int> cells;
  std::vector<int> flux_facets;
  std::vector<int> constrained_facets;
  double flux_measure = 0.0;
  std::vector<std::array<int, 2>> lambda_exponents;

  int cell_sigma_size() const;  // 2 * dim P_k
  int sigma_size() const;
  int normal_constraint_size() const;
  int cell_pressure_size() const;
  int trace_pressure_size() const;
  int lambda_size() const { return static_cast<int>(lambda_exponents.size()); }

  /// Lambda basis function j evaluated at x.
  Eigen::Vector2d lambda(int j, const Eigen::Vector2d& x) const;
};

PatchSpaces build_patch_spaces(const Mesh& mesh, const VertexPatch& patch, int k,
                               DomainBoundaryFlux flux = DomainBoundaryFlux::Corrected);

/// Direct-sum check of [P_{k-2}]^2 = grad P_{k-1} + koszul(P_{k-3}).
struct DecompositionReport {
  int dim_gradients = 0;
  int dim_koszul = 0;
  int dim_target = 0;
  int rank = 0;
  bool ok = false;
};

DecompositionReport decomposition_check(int k, const Eigen::Vector2d& center = Eigen::Vector2d(0.3, 0.6));

}  // namespace edg
