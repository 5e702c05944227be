#pragma once

#include "fbreg/grid.hpp"
#include "fbreg/nonlinearity.hpp"

namespace fbreg {

// Forward-difference Dirichlet form plus nodal rectangle rule for F(|u|):
//   E_h(u) = sum_edges h^{n-2} |u(x+h e_a) - u(x)|^2 + sum_nodes h^n F(|u(x)|)
// restricted to edges touching at least one free node and to nodes that are
// free or adjacent to a free node. The F term is separable per node, which is
// what makes the proximal step exact.
double discrete_energy(const VectorField& u, const Nonlinearity& N);

// Gradient of the Dirichlet sum only: 2 h^{n-2} (graph Laplacian u), written
// into out (same shape as u); zero on masked nodes.
void dirichlet_gradient(const VectorField& u, VectorField& out);

// argmin_v 1/2 |v - w|^2 + tau F(|v|). Returns 0 when |w| <= tau F'(0),
// otherwise s * w/|w| with s + tau F'(s) = |w| (unique root, phi strictly
// increasing since F'' >= 0). Safeguarded Newton/bisection to
// 1e-12 * max(1, |w|).
VecM prox_pointwise(const VecM& w, double tau, const Nonlinearity& N);

// Radial part of the prox: the root s for a given |w|.
double prox_radial(double wnorm, double tau, const Nonlinearity& N);

// Certified upper bound 8 n h^{n-2} on the Lipschitz constant of the
// Dirichlet-part gradient (spectral bound on the graph Laplacian).
double lipschitz_bound(const Grid& g);

}  // namespace fbreg
