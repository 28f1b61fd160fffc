#pragma once

#include <map>
#include <string>

#include "spincorr/operator.hpp"
#include "spincorr/spin_ops.hpp"

namespace spincorr {

enum class HamiltonianKind { HeisenbergTwoSpin, OneAxisTwisting, CustomMatrix };

struct ModelSpec {
    std::vector<HalfInt> spins;
    HamiltonianKind kind = HamiltonianKind::HeisenbergTwoSpin;
    std::map<std::string, double> parameters;  // e.g. "chi"
    CMat custom_matrix;                        // system-space matrix for CustomMatrix

    void validate() const;
};

// S1.S2 on the two-site system space (no ancilla slot).
Operator heisenberg_two_spin_system(HalfInt l);
// Same coupling extended by the identity on the ancilla: (S1.S2) (x) 1_A.
Operator heisenberg_two_spin(HalfInt l);

// chi (Sz)^2 on a single site.
Operator one_axis_twisting(double chi, HalfInt l);

// System Hamiltonian described by a ModelSpec, on the system-only layout.
Operator system_hamiltonian(const ModelSpec& spec);

// Two-site initial states, all normalized, no ancilla slot.
StateVector uniform_state(HalfInt l);
StateVector maximally_magnetized_state(HalfInt l);
StateVector ramp_state(HalfInt l);

StateVector state_by_name(const std::string& name, HalfInt l);

// Appends the ancilla slot in (|down> + |up>)/sqrt(2).
StateVector with_ancilla(const StateVector& psi_system);

// The bare ancilla amplitudes, index 0 = m_s = -1/2.
CVec ancilla_amplitudes();

}  // namespace spincorr
