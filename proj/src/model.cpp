#include "spincorr/model.hpp"

#include "spincorr/kernels.hpp"

namespace spincorr {

void ModelSpec::validate() const {
    for (HalfInt l : spins) require_valid_spin(l);
    switch (kind) {
        case HamiltonianKind::HeisenbergTwoSpin:
            if (spins.size() != 2 || spins[0] != spins[1])
                throw std::invalid_argument("heisenberg_two_spin requires exactly two sites with equal l");
            break;
        case HamiltonianKind::OneAxisTwisting:
            if (spins.size() != 1) throw std::invalid_argument("one_axis_twisting is a single-site model");
            break;
        case HamiltonianKind::CustomMatrix: {
            int dim = 1;
            for (HalfInt l : spins) dim *= multiplet_dim(l);
            if (!custom_matrix.is_square() || custom_matrix.rows != dim)
                throw std::invalid_argument("custom Hamiltonian dimension does not match the site layout");
            break;
        }
    }
}

Operator heisenberg_two_spin_system(HalfInt l) {
    const SpinOps ops = spin_operators(l);
    const SiteLayout lay = SiteLayout::sites({l, l});
    const Operator sx1 = tensor_embed(ops.sx, 0, lay);
    const Operator sx2 = tensor_embed(ops.sx, 1, lay);
    const Operator sy1 = tensor_embed(ops.sy, 0, lay);
    const Operator sy2 = tensor_embed(ops.sy, 1, lay);
    const Operator sz1 = tensor_embed(ops.sz, 0, lay);
    const Operator sz2 = tensor_embed(ops.sz, 1, lay);
    CMat h = kernels::matmul(sx1.entries, sx2.entries) + kernels::matmul(sy1.entries, sy2.entries) +
             kernels::matmul(sz1.entries, sz2.entries);
    return Operator(lay, std::move(h));
}

Operator heisenberg_two_spin(HalfInt l) {
    const Operator h_sys = heisenberg_two_spin_system(l);
    const SiteLayout full = h_sys.layout.with_ancilla();
    return Operator(full, kernels::kron(h_sys.entries, CMat::identity(2)));
}

Operator one_axis_twisting(double chi, HalfInt l) {
    const SpinOps ops = spin_operators(l);
    CMat h = kernels::matmul(ops.sz.entries, ops.sz.entries);
    for (auto& v : h.a) v *= chi;
    return Operator(ops.sz.layout, std::move(h));
}

Operator system_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case HamiltonianKind::HeisenbergTwoSpin:
            return heisenberg_two_spin_system(spec.spins[0]);
        case HamiltonianKind::OneAxisTwisting: {
            const auto it = spec.parameters.find("chi");
            const double chi = it == spec.parameters.end() ? 1.0 : it->second;
            return one_axis_twisting(chi, spec.spins[0]);
        }
        case HamiltonianKind::CustomMatrix: {
            require_hermitian(spec.custom_matrix);
            return Operator(SiteLayout::sites(spec.spins), spec.custom_matrix);
        }
    }
    throw std::invalid_argument("unknown Hamiltonian kind");
}

StateVector uniform_state(HalfInt l) {
    require_valid_spin(l);
    const SiteLayout lay = SiteLayout::sites({l, l});
    const double amp = 1.0 / multiplet_dim(l);
    CVec amps(static_cast<size_t>(lay.total_dim()), cplx(amp, 0.0));
    return StateVector(lay, std::move(amps));
}

StateVector maximally_magnetized_state(HalfInt l) {
    require_valid_spin(l);
    const SiteLayout lay = SiteLayout::sites({l, l});
    CVec amps(static_cast<size_t>(lay.total_dim()), cplx(0.0, 0.0));
    const int top = m_index(l, l);
    amps[static_cast<size_t>(top * multiplet_dim(l) + top)] = 1.0;
    return StateVector(lay, std::move(amps));
}

StateVector ramp_state(HalfInt l) {
    require_valid_spin(l);
    const SiteLayout lay = SiteLayout::sites({l, l});
    const int d = multiplet_dim(l);
    CVec amps(static_cast<size_t>(lay.total_dim()), cplx(0.0, 0.0));
    const int top = m_index(l, l);
    for (int k = 0; k < d; ++k) {
        const double w = l.value() - m_of_index(l, k).value();
        amps[static_cast<size_t>(k * d + top)] = w;
    }
    return normalized(StateVector(lay, std::move(amps)));
}

StateVector state_by_name(const std::string& name, HalfInt l) {
    if (name == "uniform") return uniform_state(l);
    if (name == "maxmag") return maximally_magnetized_state(l);
    if (name == "ramp") return ramp_state(l);
    throw std::invalid_argument("unknown state name '" + name + "' (expected uniform, maxmag, or ramp)");
}

CVec ancilla_amplitudes() {
    const double r = 1.0 / std::sqrt(2.0);
    return {cplx(r, 0.0), cplx(r, 0.0)};
}

StateVector with_ancilla(const StateVector& psi_system) {
    if (psi_system.layout.has_ancilla) throw std::invalid_argument("with_ancilla: state already has an ancilla slot");
    const SiteLayout full = psi_system.layout.with_ancilla();
    const CVec phi = ancilla_amplitudes();
    CVec amps(static_cast<size_t>(full.total_dim()));
    for (int i = 0; i < psi_system.dim(); ++i) {
        amps[static_cast<size_t>(2 * i)] = psi_system.amplitudes[i] * phi[0];
        amps[static_cast<size_t>(2 * i + 1)] = psi_system.amplitudes[i] * phi[1];
    }
    return StateVector(full, std::move(amps));
}

}  // namespace spincorr
