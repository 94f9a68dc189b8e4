#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edg/experiments.hpp"
#include "edg/manufactured.hpp"
#include "edg/table.hpp"

namespace {

struct Options {
  edg::ExperimentConfig cfg;
  std::string m = "k";
  std::string reconstruct = "on";
  bool n0_given = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--k", o.cfg.k, "velocity degree")->check(CLI::Range(1, 4));
  cmd->add_option("--m", o.m, "trace-pressure degree: k or k-1")->check(CLI::IsMember({"k", "k-1"}));
  cmd->add_option("--nu", o.cfg.nu, "viscosity")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.cfg.alpha, "penalty (default 4(k+1)^2)")->check(CLI::PositiveNumber);
  cmd->add_option_function<int>(
      "--n0",
      [&o](int n) {
        o.cfg.n0 = n;
        o.n0_given = true;
      },
      "initial structured resolution (default 4; 11 for nusweep and invariance)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--levels", o.cfg.levels, "number of uniform refinements")->check(CLI::NonNegativeNumber);
  cmd->add_option("--reconstruct", o.reconstruct, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
  cmd->add_option("--mesh", o.cfg.mesh_path, "initial mesh file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.cfg.out, "output table path");
}

void finalize(Options& o, int default_n0, int default_levels, bool levels_given) {
  o.cfg.m = o.m == "k" ? o.cfg.k : o.cfg.k - 1;
  o.cfg.reconstruct = o.reconstruct == "on"    ? edg::ReconstructMode::On
                      : o.reconstruct == "off" ? edg::ReconstructMode::Off
                                               : edg::ReconstructMode::Both;
  if (!o.n0_given) o.cfg.n0 = default_n0;
  if (!levels_given) o.cfg.levels = default_levels;
  o.cfg.validate();
}

std::vector<bool> variants(edg::ReconstructMode mode) {
  switch (mode) {
    case edg::ReconstructMode::On: return {true};
    case edg::ReconstructMode::Off: return {false};
    case edg::ReconstructMode::Both: return {false, true};
  }
  return {};
}

// With both variants the output name gets a _std / _rec suffix before the extension.
std::string variant_path(const std::string& path, bool reconstructed, bool both) {
  if (path.empty() || !both) return path;
  const std::string tag = reconstructed ? "_rec" : "_std";
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

void print_orders(const char* label, const std::vector<double>& orders) {
  std::printf("# %s orders:", label);
  for (double r : orders) std::printf(" %.3f", r);
  std::printf("\n");
}

int run_convergence(Options& o) {
  const bool both = o.cfg.reconstruct == edg::ReconstructMode::Both;
  for (bool rec : variants(o.cfg.reconstruct)) {
    const edg::ConvergenceResult res = edg::run_convergence(o.cfg, rec);
    const edg::Table table = res.table();
    std::printf("# %s k=%d m=%d nu=%g\n", rec ? "reconstructed" : "standard", o.cfg.k, o.cfg.m, o.cfg.nu);
    std::cout << edg::format_table(table);
    print_orders("h1semi", res.h1_orders());
    print_orders("l2", res.l2_orders());
    const std::string path = variant_path(o.cfg.out, rec, both);
    if (!path.empty()) edg::emit_table(table, path);
  }
  return 0;
}

int run_sweep(Options& o) {
  const bool both = o.cfg.reconstruct == edg::ReconstructMode::Both;
  const auto sweeps = edg::run_nu_sweep(o.cfg, edg::default_viscosities(), variants(o.cfg.reconstruct));
  for (const auto& s : sweeps) {
    const edg::Table table = s.table();
    std::printf("# %s k=%d m=%d\n", s.reconstructed ? "reconstructed" : "standard", o.cfg.k, o.cfg.m);
    std::cout << edg::format_table(table);
    std::printf("# slope vs 1/nu (nu <= 1e-3): %.3f\n", edg::sweep_slope(s, 1e-3));
    const std::string path = variant_path(o.cfg.out, s.reconstructed, both);
    if (!path.empty()) edg::emit_table(table, path);
  }
  return 0;
}

int run_invariance(Options& o) {
  const edg::InvarianceReport r = edg::run_invariance(o.cfg, edg::default_psi_gradient());
  std::printf("nelems %d\nstandard relative change %.6e\nreconstructed relative change %.6e\n", r.nelems, r.plain,
              r.reconstructed);
  if (o.cfg.reconstruct != edg::ReconstructMode::Off && !(r.reconstructed <= 1e-8)) {
    std::fprintf(stderr, "error: reconstructed velocity changed by %.3e > 1e-8\n", r.reconstructed);
    return 1;
  }
  return 0;
}

int run_patch_check(Options& o) {
  const auto levels = edg::run_patch_check(o.cfg);
  std::printf("# n nelems patches residual const_rhs orthogonality orthogonality_smooth bubble stability max_patch_stability\n");
  bool ok = true;
  for (const auto& l : levels) {
    std::printf("%d %d %d %.3e %.3e %.3e %.3e %.3e %.4f %.4f\n", l.n, l.nelems, l.patches, l.max_residual,
                l.max_constant_rhs, l.max_orthogonality, l.max_orthogonality_smooth, l.bubble_identity, l.stability_ratio,
                l.max_patch_stability);
    if (!(l.max_residual <= 1e-12)) {
      std::fprintf(stderr, "error: n=%d patch residual %.3e > 1e-12\n", l.n, l.max_residual);
      ok = false;
    }
    if (!(l.max_constant_rhs <= 1e-13)) {
      std::fprintf(stderr, "error: n=%d G^V((c,c)) %.3e > 1e-13\n", l.n, l.max_constant_rhs);
      ok = false;
    }
    if (!(l.max_orthogonality <= 1e-12)) {
      std::fprintf(stderr, "error: n=%d orthogonality defect %.3e > 1e-12\n", l.n, l.max_orthogonality);
      ok = false;
    }
    if (!(l.bubble_identity <= 1e-14)) {
      std::fprintf(stderr, "error: bubble identity defect %.3e\n", l.bubble_identity);
      ok = false;
    }
  }
  if (levels.size() > 1 && !(levels.back().stability_ratio <= 2.0 * levels.front().stability_ratio)) {
    std::fprintf(stderr, "error: stability ratio grows from %.4f to %.4f\n", levels.front().stability_ratio,
                 levels.back().stability_ratio);
    ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EDG Stokes discretization with a pressure-robust reconstruction"};
  app.require_subcommand(1);
  Options o;
  auto* conv = app.add_subcommand("convergence", "refinement study with the manufactured solution");
  auto* sweep = app.add_subcommand("nusweep", "viscosity sweep nu = 1 ... 1e-9 on a fixed mesh");
  auto* inv = app.add_subcommand("invariance", "change of the velocity under f -> f + grad psi");
  auto* patch = app.add_subcommand("patch-check", "local patch-problem invariants across refinements");
  for (auto* cmd : {conv, sweep, inv, patch}) add_common(cmd, o);
  CLI11_PARSE(app, argc, argv);

  try {
    auto levels_given = [](CLI::App* cmd) { return cmd->count("--levels") > 0; };
    if (conv->parsed()) {
      finalize(o, 4, 4, levels_given(conv));
      return run_convergence(o);
    }
    if (sweep->parsed()) {
      finalize(o, 11, 0, true);
      if (o.reconstruct == "on" && sweep->count("--reconstruct") == 0) o.cfg.reconstruct = edg::ReconstructMode::Both;
      return run_sweep(o);
    }
    if (inv->parsed()) {
      finalize(o, 11, 0, true);
      return run_invariance(o);
    }
    finalize(o, 4, 2, levels_given(patch));
    return run_patch_check(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
