#pragma once
// Correspondence between sections of a line bundle over the quotient graph
// and (anti)symmetric functions on the ordered graph. A trivializing frame of
// the pulled-back bundle supplies the per-vertex phase; the 1/sqrt(N!) factor
// makes the correspondence unitary because every collision-free quotient
// vertex carries exactly N! ordered representatives. Vertex measures carry a
// common factor spacing^{N*d} on both sides, so plain l2 norms already agree.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qbundle/bundle.hpp"
#include "qbundle/confspace.hpp"

namespace qbundle {

// (1/N!) sum over sigma of sign(sigma)*f(sigma . v) (anti) or the unsigned
// average (sym). Idempotent; each kind annihilates the other's image.
Eigen::VectorXcd symmetrize(const ConfigGraphPair& pair, const Eigen::VectorXcd& f,
                            Symmetry kind);

// Pullback of a quotient bundle together with the parallel frame grown from
// ordered vertex 0. Vertex 0 holds the lexicographically first configuration,
// which is sorted, so the frame phase is +1 on its canonical representative.
struct PullbackFrame {
  DiscreteBundle bundle;  // lives on the ordered graph
  Frame frame;
};
PullbackFrame canonical_pullback_frame(const DiscreteBundle& on_quotient,
                                       const ConfigGraphPair& pair, double tol = 1e-12);

// f(v) = (1/sqrt(N!)) * conj(frame_phase(v)) * section(projection(v)): the
// coefficient of the pulled-back section in the parallel frame. Rank-1
// bundles only; the frame must be parallel on every ordered edge
// (FrameError otherwise). Norm-preserving; antisymmetric when the frame
// carries the sign character, symmetric when it is constant.
Eigen::VectorXcd lift_to_ordered(const Eigen::VectorXcd& section, const DiscreteBundle& pullback,
                                 const Frame& frame, const ConfigGraphPair& pair);

// Inverse of lift_to_ordered: section(q) = sqrt(N!) * frame_phase(rep) *
// f(rep) for any representative rep of q. The value is computed from every
// representative and must agree across the fiber (SymmetryError otherwise),
// which is exactly the requirement that f has the frame's exchange symmetry.
Eigen::VectorXcd restrict_to_section(const Eigen::VectorXcd& f, const DiscreteBundle& pullback,
                                     const Frame& frame, const ConfigGraphPair& pair);

// The same correspondence as an explicit sparse matrix with one nonzero per
// ordered vertex, so conjugation identities become matrix algebra.
Eigen::SparseMatrix<std::complex<double>> lift_matrix(const DiscreteBundle& pullback,
                                                      const Frame& frame,
                                                      const ConfigGraphPair& pair);

// Unitary witness between the bundle triple and the subspace triple obtained
// by expressing the lift in the subspace basis: W = B^dagger * L. Square and
// unitary whenever the basis spans the lift's image.
Eigen::MatrixXcd triple_unitary(const Eigen::MatrixXcd& subspace_basis,
                                const Eigen::SparseMatrix<std::complex<double>>& lift);

// Largest deviation from the exchange law frame(sigma . v) =
// character(sigma) * frame(v), with character = sign for anti and 1 for sym.
double frame_exchange_residual(const ConfigGraphPair& pair, const Frame& frame, Symmetry kind);

}  // namespace qbundle
