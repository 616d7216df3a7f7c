#pragma once

namespace qbundle {

// Physical constants shared by Hamiltonian builders and the continuum
// trajectory code. Defaults give the dimensionless setup used in most tests.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double spacing = 1.0;  // lattice constant; must match the box it is used with
};

}
