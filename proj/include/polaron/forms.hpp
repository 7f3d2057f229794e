#pragma once

#include <vector>

#include "polaron/gaussian_measure.hpp"
#include "polaron/lattice.hpp"

namespace polaron {

// Discretized double-integral fluctuation form on unit interval i:
//   Q_i(x) = eta^2 * sum_{t,s in G_i} ||B_t - B_s||^2,
// with G_i the half-open grid {i, i+eta, ..., i+1-eta} (m points).
// Equals 2 * eta * sum_{t in G_i} ||B_t - Bbar_i||^2 with the left-endpoint
// average Bbar_i. Shift invariant; exact value (1 - eta^2)/6 on the linear
// path B_t = t.
QuadraticForm intra_interval_form(const Lattice& lat, int i);

// Cross-interval coupling between unit intervals i and i+1:
//   C_i(x) = eta^2 * sum_{t in G_i, s in G_{i+1}} ||B_t - B_s||^2.
// Shift invariant.
QuadraticForm adjacent_coupling_form(const Lattice& lat, int i);

// Fluctuation form over a whole window [a, b] of unit intervals:
//   eta^2 * sum over the half-open grid of [a, b).
QuadraticForm window_form(const Lattice& lat, int a, int b);

// Trapezoid-rule time average of the path over unit interval i, as a linear
// functional in increment coordinates.
LinearFunctional interval_average(const Lattice& lat, int i);

// Left-endpoint Riemann average over unit interval i: eta * sum over G_i.
// The exact discrete decomposition identities hold in this convention.
LinearFunctional riemann_average(const Lattice& lat, int i);

// Evaluator of the path at a grid time t = k * eta.
LinearFunctional endpoint_functional(const Lattice& lat, int k);

// Squared difference of two Riemann interval averages,
// ||Bbar_i - Bbar_j||^2, as a quadratic form.
QuadraticForm mean_difference_form(const Lattice& lat, int i, int j);

// Centered second-moment form eta * sum_{t in G_i} ||B_t - Bbar_i||^2
// (Riemann average). Equals Q_i / 2 as a matrix identity.
QuadraticForm centered_form(const Lattice& lat, int i);

// Brownian motion confined by beta * (sum of the listed intra-interval forms
// plus the listed adjacent couplings). `intervals` holds interval indices i in
// [0, T); `couplings` holds indices i meaning the pair (i, i+1).
GaussianPathMeasure confined_measure(const Lattice& lat, double beta,
                                     const std::vector<int>& intervals,
                                     const std::vector<int>& couplings);

// Convenience: confinement over the full window, all T intervals and all
// T-1 adjacent couplings.
GaussianPathMeasure confined_measure_full(const Lattice& lat, double beta);

// Single-interval confinement BM^{<beta Q_i>}.
GaussianPathMeasure tilde_measure(const Lattice& lat, double beta, int i);

}  // namespace polaron
