#pragma once

#include <string>

#include "edg/stokes.hpp"

namespace edg {

/// Closed-form Stokes solution on the unit square.
struct ManufacturedCase {
  std::string name;
  double nu = 1.0;
  VectorField u;
  TensorField grad_u;  // (grad u)_{ij} = d u_i / d x_j
  ScalarField p;
  VectorField f;       // -nu lap u + grad p
};

/// u = curl(xi) with xi = x^2 (x-1)^2 y^2 (y-1)^2 and p = x^5 + y^5 - 1/3.
ManufacturedCase manufactured_case_2d(double nu);

/// Default gradient perturbation psi = cos(pi x) cos(pi y) (zero mean on the unit square).
ScalarField default_psi();
VectorField default_psi_gradient();

}  // namespace edg
