#pragma once

#include "spincorr/halfint.hpp"
#include "spincorr/operator.hpp"

namespace spincorr {

// Coefficients coupling |l, m -+ 1/2> x |+-1/2> into total spin l +- 1/2:
// a = sqrt((l + 1/2 + m) / (2l + 1)), b = sqrt((l + 1/2 - m) / (2l + 1)).
// Positive square roots throughout (Condon-Shortley convention).
struct CGPair {
    double a = 0.0;
    double b = 0.0;
};

CGPair cg_coefficients(HalfInt l, HalfInt m);

// |l, j, m> expressed in the uncoupled product basis of one spin-l site and
// the spin-1/2 ancilla. j must be l+1/2 or l-1/2; layout is [2l+1, 2] with
// the ancilla slot last.
StateVector coupled_basis_vector(HalfInt l, HalfInt j, HalfInt m);

// exp(-i lambda S_site . S_anc) assembled from its coupled-basis spectrum:
// eigenvalue exp(-i lambda [j(j+1) - l(l+1) - 3/4] / 2) on each j-multiplet.
Operator coupling_unitary_coupled_diag(HalfInt l, double lambda);

// Amplitude blocks of a full system+ancilla state, resolved by the total
// magnetization m = m_l + m_s at one site: plus blocks pair m_l = m - 1/2
// with ancilla up, minus blocks pair m_l = m + 1/2 with ancilla down. Each
// block is a vector over the remaining tensor slots. The m grid runs from
// -l-1/2 to l+1/2; blocks outside a branch's range are identically zero.
struct GammaTable {
    HalfInt l;
    std::vector<HalfInt> m_values;
    std::vector<CVec> plus_blocks;
    std::vector<CVec> minus_blocks;

    int rest_dim() const { return plus_blocks.empty() ? 0 : static_cast<int>(plus_blocks.front().size()); }
};

GammaTable gamma_coefficients(const StateVector& psi, int site);

// Sum of squared block norms over both branches; 1 for a normalized state.
double gamma_completeness(const GammaTable& g);

// max_m ||gamma_{m+1} - gamma_m|| / (max_m ||gamma_m|| + eps) over the
// plus-branch blocks, with zero padding past both ends of the grid. A flat
// profile inside the multiplet still scores 1 from the edge jumps, so
// interior_only drops the two edge m values from the difference scan (the
// normalizer keeps the full range).
double slow_variation_metric(const GammaTable& g, bool interior_only = false);

struct JPopulations {
    HalfInt j_upper, j_lower;
    double p_upper = 0.0;
    double p_lower = 0.0;
};

// Weight of the state in the two total-spin multiplets of site (x) ancilla.
JPopulations coupled_j_populations(const StateVector& psi, int site);

}  // namespace spincorr
