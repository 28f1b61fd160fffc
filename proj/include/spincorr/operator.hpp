#pragma once

#include "spincorr/errors.hpp"
#include "spincorr/layout.hpp"
#include "spincorr/linalg.hpp"

namespace spincorr {

// Dense operator tied to a tensor-product layout.
struct Operator {
    SiteLayout layout;
    CMat entries;

    Operator() = default;
    Operator(SiteLayout lay, CMat m) : layout(std::move(lay)), entries(std::move(m)) {
        if (!entries.is_square() || entries.rows != layout.total_dim())
            throw std::invalid_argument("Operator: matrix does not match layout dimension");
    }

    int dim() const { return entries.rows; }

    static Operator identity(const SiteLayout& lay) { return Operator(lay, CMat::identity(lay.total_dim())); }
};

struct StateVector {
    SiteLayout layout;
    CVec amplitudes;

    StateVector() = default;
    StateVector(SiteLayout lay, CVec amps) : layout(std::move(lay)), amplitudes(std::move(amps)) {
        if (static_cast<int>(amplitudes.size()) != layout.total_dim())
            throw std::invalid_argument("StateVector: amplitude count does not match layout dimension");
    }

    int dim() const { return static_cast<int>(amplitudes.size()); }
};

// max|A - A+| over all entries.
double hermiticity_defect(const CMat& m);
// max|U+U - 1| over all entries.
double unitarity_defect(const CMat& m);

bool is_hermitian(const CMat& m, double rel_tol = 1e-12);
void require_hermitian(const CMat& m, double rel_tol = 1e-12);
void require_unitary(const CMat& m, double abs_tol = 1e-10);

double state_norm(const StateVector& psi);
void require_normalized(const StateVector& psi, double tol = 1e-12);
// Divides by the norm; a numerically null vector is a contract violation.
StateVector normalized(StateVector psi);

Operator kron(const Operator& a, const Operator& b);
StateVector kron(const StateVector& a, const StateVector& b);

// op acts on one slot, identity everywhere else.
Operator tensor_embed(const Operator& op, int site_index, const SiteLayout& layout);

// op acts on an ordered pair of distinct slots (rows indexed slot_a-major),
// identity everywhere else. Materializes the full matrix; meant for modest
// dimensions, the kernels provide the matrix-free route.
Operator tensor_embed_pair(const CMat& op, int slot_a, int slot_b, const SiteLayout& layout);

// May return an unnormalized state (projections).
StateVector apply(const Operator& op, const StateVector& psi);
cplx expectation(const StateVector& psi, const Operator& op);

}  // namespace spincorr
