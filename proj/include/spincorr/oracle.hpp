#pragma once

#include "spincorr/operator.hpp"

namespace spincorr {

// <psi| S_i^z(t1) S_j^z(t2) |psi> with A(t) = e^{iHt} A e^{-iHt}, on the
// system space (no ancilla). Cost after the cached diagonalization of h is
// a few dense matvecs per call.
cplx exact_two_time(const StateVector& psi, const Operator& h, int site_i, int site_j, double t1, double t2);

// Two-site benchmark correlator C(t1, t2) / l^2.
cplx normalized_correlation(const StateVector& psi, const Operator& h, double t1, double t2, HalfInt l);

// Closed-form ancilla correlator for exp(-i lambda S_i^z (x) S^z) coupling:
// each ancilla z-component s just imprints the site-i phase e^{-i lambda s
// S_i^z}, so the correlator is the s-weighted average of ordinary
// expectation values. psi_with_ancilla is the t=0 product state; its
// ancilla part must be the balanced superposition (|down>+|up>)/sqrt(2).
double ising_zz_closed_form(const StateVector& psi_with_ancilla, const Operator& h, int site_i, int site_j, double t1,
                            double t2, double lambda);

// Same for exp(-i lambda S_i^x (x) S^x) coupling. In the ancilla x-basis the
// coupling is diagonal and the z-readout only sees the cross term between
// the two x-components, which carries phases e^{i lambda (a~ + a)/2} over
// the site-i x-eigenvalues (cosine-type kernel). The balanced-superposition
// ancilla is exactly the +x eigenstate, so its minus-x weight, and with it
// the whole correlator, vanishes.
double ising_xx_closed_form(const StateVector& psi_with_ancilla, const Operator& h, int site_i, int site_j, double t1,
                            double t2, double lambda);

struct DeviationRow {
    double t2 = 0.0;
    double exact = 0.0;
    double estimate = 0.0;
};

struct DeviationReport {
    double max_abs_dev = 0.0;
    double mean_abs_dev = 0.0;
    std::vector<DeviationRow> grid;
};

// Pointwise |exact - estimate| summary over a shared t2 grid.
DeviationReport systematic_deviation(const std::vector<std::pair<double, double>>& exact_series,
                                     const std::vector<std::pair<double, double>>& estimate_series);

}  // namespace spincorr
