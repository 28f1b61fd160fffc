#pragma once

#include <memory>

#include "spincorr/operator.hpp"

namespace spincorr {

// Hermitian eigendecomposition h = V diag(e) V+, eigenvalues ascending,
// eigenvectors stored as the columns of V.
struct Eigensystem {
    std::vector<double> eigenvalues;
    CMat eigenvectors;
};

// Uncached decomposition. Throws ContractViolation on non-Hermitian input.
Eigensystem decompose_hermitian(const CMat& h);

// Content-addressed process cache: repeated requests for the same matrix
// (same dimensions and bytes) share one decomposition. Thread-safe; readers
// get immutable shared snapshots.
std::shared_ptr<const Eigensystem> hermitian_eigensystem(const CMat& h);
void spectral_cache_clear();
std::size_t spectral_cache_size();

// U(t) = V diag(exp(-i e_k t)) V+
CMat evolution_matrix(const Eigensystem& es, double t);
Operator evolution_unitary(const Operator& h, double t);

// Cheap repeated evolution under one Hamiltonian: diagonalize once, then
// each time point costs two dense matvecs plus a phase scaling.
class Propagator {
  public:
    explicit Propagator(const Operator& h);

    const SiteLayout& layout() const { return layout_; }
    const Eigensystem& eigensystem() const { return *es_; }

    // e^{-iHt} applied to raw amplitudes (layout already checked by caller).
    CVec evolve_raw(const CVec& amps, double t) const;
    StateVector evolve(const StateVector& psi, double t) const;
    Operator unitary(double t) const;

    // Coordinates of amps in the eigenbasis (V+ amps), and back.
    CVec to_eigenbasis(const CVec& amps) const;
    CVec from_eigenbasis(const CVec& coords) const;
    // Phase factors exp(-i e_k t) applied in-place to eigenbasis coordinates.
    void phase_in_eigenbasis(CVec& coords, double t) const;

  private:
    SiteLayout layout_;
    std::shared_ptr<const Eigensystem> es_;
};

}  // namespace spincorr
