#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "edg/basis.hpp"
#include "edg/fe_values.hpp"
#include "edg/mesh.hpp"

using namespace edg;

TEST_CASE("monomial exponents are ordered by total degree") {
  const auto e = monomial_exponents(2);
  REQUIRE(e.size() == 6);
  CHECK(e[0] == std::array<int, 2>{0, 0});
  CHECK(e[1] == std::array<int, 2>{1, 0});
  CHECK(e[2] == std::array<int, 2>{0, 1});
  CHECK(e[3] == std::array<int, 2>{2, 0});
  CHECK(triangle_dim(4) == 15);
  CHECK(triangle_dim(-1) == 0);
}

TEST_CASE("cell basis is nodal and a partition of unity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k <= kMaxDegree; ++k) {
    const CellBasis& b = cell_basis(k);
    CHECK(b.size() == triangle_dim(k));
    for (int i = 0; i < b.size(); ++i) {
      const Eigen::VectorXd v = b.values(b.nodes().col(i));
      for (int j = 0; j < b.size(); ++j) CHECK(std::abs(v(j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::Vector2d xi(u(rng) * 0.5, u(rng) * 0.5);
      // Rounding here repeats on every cell, so it must stay at a few ulp.
      CHECK(std::abs(b.values(xi).sum() - 1.0) <= 4e-15);
      CHECK(b.gradients(xi).colwise().sum().norm() <= 4e-14);
    }
  }
}

TEST_CASE("linear basis is barycentric") {
  const Eigen::VectorXd v = cell_basis(1).values(Eigen::Vector2d(0.2, 0.3));
  CHECK(v(0) == doctest::Approx(0.5));
  CHECK(v(1) == doctest::Approx(0.2));
  CHECK(v(2) == doctest::Approx(0.3));
}

TEST_CASE("reference gradients match central differences") {
  const double step = 1e-5;
  const Eigen::Vector2d xi(0.21, 0.37);
  for (int k = 1; k <= kMaxDegree; ++k) {
    const CellBasis& b = cell_basis(k);
    const Eigen::MatrixX2d g = b.gradients(xi);
    for (int d = 0; d < 2; ++d) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e(d) = step;
      const Eigen::VectorXd fd = (b.values(xi + e) - b.values(xi - e)) / (2 * step);
      CHECK((fd - g.col(d)).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
}

TEST_CASE("physical gradients match central differences on a distorted cell") {
  const Mesh mesh({{0.1, 0.0}, {1.3, 0.2}, {0.4, 0.9}}, {{0, 1, 2}});
  const int k = 3;
  const CellValues cv = cell_values(mesh, 0, k, 4);
  const CellBasis& b = cell_basis(k);
  const double step = 1e-5;
  for (int p = 0; p < cv.weights.size(); ++p) {
    const Eigen::Vector2d x = cv.points.col(p);
    for (int d = 0; d < 2; ++d) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e(d) = step;
      const Eigen::VectorXd fd = (b.values(mesh.map_to_reference(0, x + e)) -
                                  b.values(mesh.map_to_reference(0, x - e))) / (2 * step);
      const Eigen::VectorXd exact = d == 0 ? Eigen::VectorXd(cv.dphi_dx.col(p)) : Eigen::VectorXd(cv.dphi_dy.col(p));
      CHECK((fd - exact).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
  CHECK(cv.weights.sum() == doctest::Approx(mesh.area(0)).epsilon(1e-14));
}

TEST_CASE("facet values sit on the facet with the outward normal") {
  const Mesh mesh = generate_structured(2);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const int f = mesh.cell_facet(c, i);
      const FacetValues fv = facet_values(mesh, c, f, 2, 5);
      CHECK(fv.weights.sum() == doctest::Approx(mesh.facet(f).length).epsilon(1e-14));
      CHECK((fv.normal - mesh.outward_normal(c, i)).norm() <= 1e-15);
      for (int p = 0; p < fv.t.size(); ++p)
        CHECK((fv.points.col(p) - mesh.facet(f).point(mesh.vertices(), fv.t(p))).norm() <= 1e-14);
      // The opposite vertex's basis function vanishes on the facet (k = 1).
      const FacetValues f1 = facet_values(mesh, c, f, 1, 3);
      CHECK(f1.phi.row(i).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
  }
}

TEST_CASE("facet Lagrange basis") {
  for (int m = 0; m <= kMaxDegree; ++m) {
    for (int i = 0; i <= m; ++i) {
      const Eigen::VectorXd v = eval_facet_lagrange(m, facet_node(m, i));
      for (int j = 0; j <= m; ++j) CHECK(std::abs(v(j) - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
    CHECK(eval_facet_lagrange(m, 0.377).sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(facet_lagrange_integrals(m).sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(facet_lagrange_integrals(2)(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("unsupported degrees are rejected") {
  CHECK_THROWS_AS(CellBasis(-1), std::invalid_argument);
  CHECK_THROWS_AS(CellBasis(kMaxDegree + 1), std::invalid_argument);
  CHECK_THROWS_AS(eval_facet_lagrange(5, 0.3), std::invalid_argument);
}
