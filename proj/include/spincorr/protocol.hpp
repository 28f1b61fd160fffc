#pragma once

#include <map>

#include "spincorr/coupled_basis.hpp"
#include "spincorr/model.hpp"
#include "spincorr/spectral.hpp"

namespace spincorr {

enum class CouplingKind { Heisenberg, IsingZZ, IsingXX };

CouplingKind coupling_by_name(const std::string& name);
std::string coupling_name(CouplingKind kind);

// System-ancilla coupling on the pair space of one spin-l site and the
// ancilla: heisenberg is exp(-i lambda S_site . S_anc), the ising variants
// couple a single component each.
Operator coupling_unitary(CouplingKind kind, HalfInt l, double lambda);

struct ProtocolConfig {
    int site_i = 0;
    int site_j = 1;
    double t1 = 0.0;
    double t2 = 0.0;
    double lambda = 0.0;
    CouplingKind coupling = CouplingKind::Heisenberg;
    Operator hamiltonian;       // system space, no ancilla slot
    StateVector initial_state;  // system space, normalized

    void validate() const;
};

// Exact joint outcome statistics of one protocol run: ancilla branch
// probabilities and the conditional magnetization distribution at site j.
// Conditionals are indexed by ascending m. A branch whose probability falls
// below the reuse threshold keeps a flat placeholder conditional and is
// flagged unused; it contributes nothing downstream.
struct OutcomeDistribution {
    HalfInt l_j;
    double p_plus = 0.0;
    double p_minus = 0.0;
    std::vector<double> p_m_given_plus;
    std::vector<double> p_m_given_minus;
    bool plus_used = true;
    bool minus_used = true;

    // Clamps rounding-level negatives to 0 and checks completeness.
    void validate();
};

// Probability below which an ancilla branch is not renormalized.
constexpr double kBranchThreshold = 1e-14;

OutcomeDistribution run_protocol(const ProtocolConfig& config);

// Correlator between the measured ancilla outcome and the site-j
// magnetization: sum_m m (P_{m|+}P_+ - P_{m|-}P_-), the two outcomes
// entering with weights +-1.
double script_c_from_distribution(const OutcomeDistribution& dist);

// The same quantity as a single Heisenberg-picture expectation value of
// U^dag (S_j^z(t2-t1) x 2 S^z_anc) U, evaluated without any projection or
// renormalization. Independent path used to cross-check run_protocol.
double script_c_direct(const ProtocolConfig& config);

enum class ExtractionMethod { TwoPointLambda, Fourier };

ExtractionMethod extraction_by_name(const std::string& name);
std::string extraction_name(ExtractionMethod method);

struct CorrelationEstimate {
    std::map<double, double> script_c_values;  // lambda -> correlator
    double re_c = 0.0;
    double im_c = 0.0;
    ExtractionMethod method = ExtractionMethod::TwoPointLambda;
    bool refined = true;
};

// Inverts the response model
//   correlator(lambda) = (1/L) sin^2(lambda L / 2) Re C - (1/L) sin(lambda L) Im C,
// calibrated against the exact oracle on the bundled states, for (Re C,
// Im C). two_point_lambda solves exactly from the values at lambda l = pi and
// lambda l = pi/2; fourier least-squares fits >= 4 points. refined uses
// L = l + 1/2 in place of L = l (default); with L = l the two-point solve
// reduces to Re C = l c(pi/l), Im C = Re C / 2 - l c(pi/2l).
CorrelationEstimate extract_correlation(const std::map<double, double>& script_c, HalfInt l, ExtractionMethod method,
                                        bool refined = true);

// The two lambda values (lambda l = pi/2 and pi) the two-point scheme needs.
std::pair<double, double> two_point_lambdas(HalfInt l);

}  // namespace spincorr
