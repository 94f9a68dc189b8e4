#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "edg/experiments.hpp"
#include "edg/fe_values.hpp"
#include "edg/manufactured.hpp"
#include "edg/quadrature.hpp"
#include "edg/table.hpp"

using namespace edg;

TEST_CASE("manufactured solution values") {
  const ManufacturedCase mc = manufactured_case_2d(1.0);
  CHECK(mc.u({0.5, 0.5}).norm() == 0.0);
  for (double t : {0.0, 0.3, 0.8, 1.0}) {
    CHECK(mc.u({t, 0.0}).norm() == 0.0);
    CHECK(mc.u({t, 1.0}).norm() == 0.0);
    CHECK(mc.u({0.0, t}).norm() == 0.0);
    CHECK(mc.u({1.0, t}).norm() == 0.0);
  }
  CHECK_THROWS_AS(manufactured_case_2d(0.0), std::invalid_argument);
}

TEST_CASE("manufactured pressure has zero mean and the velocity is solenoidal") {
  const ManufacturedCase mc = manufactured_case_2d(1.0);
  const Mesh mesh = generate_structured(4);
  double mean = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, 0, 10);
    double div2 = 0.0;
    for (int p = 0; p < cv.weights.size(); ++p) {
      mean += cv.weights(p) * mc.p(cv.points.col(p));
      div2 += cv.weights(p) * std::pow(mc.grad_u(cv.points.col(p)).trace(), 2);
    }
    CHECK(div2 <= 1e-20);
  }
  CHECK(std::abs(mean) <= 1e-15);
}

TEST_CASE("gradient and body force match finite differences") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (double nu : {1.0, 0.37}) {
    const ManufacturedCase mc = manufactured_case_2d(nu);
    const double h = 1e-4;
    const Eigen::Vector2d ex(h, 0.0), ey(0.0, h);
    for (int s = 0; s < 50; ++s) {
      const Eigen::Vector2d x(d(rng), d(rng));
      const Eigen::Vector2d lap =
          (mc.u(x + ex) + mc.u(x - ex) + mc.u(x + ey) + mc.u(x - ey) - 4.0 * mc.u(x)) / (h * h);
      const Eigen::Vector2d gp((mc.p(x + ex) - mc.p(x - ex)) / (2 * h), (mc.p(x + ey) - mc.p(x - ey)) / (2 * h));
      CHECK((mc.f(x) - (-nu * lap + gp)).lpNorm<Eigen::Infinity>() <= 1e-5);
      Eigen::Matrix2d g;
      g.col(0) = (mc.u(x + ex) - mc.u(x - ex)) / (2 * h);
      g.col(1) = (mc.u(x + ey) - mc.u(x - ey)) / (2 * h);
      CHECK((g - mc.grad_u(x)).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
  const VectorField gpsi = default_psi_gradient();
  const ScalarField psi = default_psi();
  const Eigen::Vector2d x(0.31, 0.72);
  const double h = 1e-5;
  CHECK(gpsi(x)(0) == doctest::Approx((psi({x(0) + h, x(1)}) - psi({x(0) - h, x(1)})) / (2 * h)).epsilon(1e-8));
  CHECK(gpsi(x)(1) == doctest::Approx((psi({x(0), x(1) + h}) - psi({x(0), x(1) - h})) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("table round trip") {
  const std::string path = "test_table_roundtrip.txt";
  Table t;
  t.kind = TableKind::Sweep;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-30.0, 5.0);
  for (int i = 0; i < 40; ++i) t.rows.push_back({std::pow(10.0, d(rng)), 242, std::exp(d(rng)), 1.0 / 3.0 + i});
  emit_table(t, path);
  const Table back = parse_table(path);
  CHECK(back.kind == TableKind::Sweep);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);
  std::remove(path.c_str());

  Table c;
  c.rows.push_back({3, 2048, 0.5, 0.125});
  const std::string text = format_table(c);
  CHECK(text.rfind("# level nelems h1semi l2\n", 0) == 0);
  CHECK(text.find("3 2048 5.0000000000000000e-01 1.2500000000000000e-01") != std::string::npos);
  CHECK(parse_table_text(text).rows[0] == c.rows[0]);
}

TEST_CASE("empty or malformed tables are errors") {
  const std::string path = "test_table_empty.txt";
  std::remove(path.c_str());
  CHECK_THROWS(emit_table(Table{}, path));
  CHECK_FALSE(std::filesystem::exists(path));
  CHECK_THROWS(parse_table_text("# x y\n1 2 3 4\n"));
  CHECK_THROWS(parse_table_text("# level nelems h1semi l2\n1 2 3\n"));
  CHECK_THROWS(parse_table_text("# level nelems h1semi l2\n1 2 3 4 5\n"));
  Table t;
  t.rows.push_back({0, 1, 1.0, 1.0});
  CHECK_THROWS(emit_table(t, "/nonexistent_dir/table.txt"));
}

TEST_CASE("observed orders and slopes") {
  const auto o = observed_orders({1.0, 0.25, 0.0625});
  REQUIRE(o.size() == 2u);
  CHECK(o[0] == doctest::Approx(2.0));
  SweepResult s;
  for (int e = 0; e <= 5; ++e) {
    s.nu.push_back(std::pow(10.0, -e));
    s.errors.push_back({3.0 * std::pow(10.0, e), 2.0 * std::pow(10.0, e)});
  }
  CHECK(sweep_slope(s, 1e-2) == doctest::Approx(1.0));
  CHECK_THROWS(sweep_slope(s, 1e-9));
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.penalty() == 36.0);
  cfg.m = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.m = 2;
  cfg.nu = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.nu = 1.0;
  cfg.levels = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("small convergence study is deterministic and converges") {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.m = 1;
  cfg.nu = 1.0;
  cfg.n0 = 2;
  cfg.levels = 3;
  const ConvergenceResult a = run_convergence(cfg, true);
  const ConvergenceResult b = run_convergence(cfg, true);
  CHECK(format_table(a.table()) == format_table(b.table()));
  CHECK(a.h1_orders().back() > 0.8);
  CHECK(a.l2_orders().back() > 1.8);
  for (const auto& l : a.levels) CHECK(l.residual <= 1e-10);
}

TEST_CASE("benign viscosity: both pipelines agree within a factor 3") {
  ExperimentConfig cfg;
  cfg.k = 2;
  cfg.m = 2;
  cfg.nu = 1.0;
  cfg.n0 = 4;
  cfg.levels = 1;
  const ConvergenceResult plain = run_convergence(cfg, false);
  const ConvergenceResult rec = run_convergence(cfg, true);
  for (std::size_t i = 0; i < plain.levels.size(); ++i) {
    const double r = plain.levels[i].errors.h1_semi / rec.levels[i].errors.h1_semi;
    CHECK(r < 3.0);
    CHECK(r > 1.0 / 3.0);
  }
}

TEST_CASE("constant potential leaves both velocities unchanged") {
  ExperimentConfig cfg;
  cfg.n0 = 4;
  const InvarianceReport r =
      run_invariance(cfg, [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); });
  CHECK(r.plain == 0.0);
  CHECK(r.reconstructed == 0.0);
}

TEST_CASE("imported meshes are refined uniformly") {
  const std::string path = "test_harness_mesh.txt";
  write_mesh(generate_structured(2), path);
  ExperimentConfig cfg;
  cfg.mesh_path = path;
  CHECK(level_mesh(cfg, 2).num_cells() == 128);
  CHECK(initial_mesh(cfg).num_cells() == 8);
  std::remove(path.c_str());
}
