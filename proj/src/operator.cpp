#include "spincorr/operator.hpp"

#include "spincorr/kernels.hpp"

namespace spincorr {

double hermiticity_defect(const CMat& m) {
    double mx = 0.0;
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) mx = std::max(mx, std::abs(m(r, c) - std::conj(m(c, r))));
    return mx;
}

double unitarity_defect(const CMat& m) {
    const CMat prod = kernels::matmul(adjoint(m), m);
    return max_abs_diff(prod, CMat::identity(m.rows));
}

bool is_hermitian(const CMat& m, double rel_tol) {
    if (!m.is_square()) return false;
    return hermiticity_defect(m) <= rel_tol * std::max(max_abs(m), 1.0e-300);
}

void require_hermitian(const CMat& m, double rel_tol) {
    if (!is_hermitian(m, rel_tol)) throw ContractViolation("operator is not Hermitian within tolerance");
}

void require_unitary(const CMat& m, double abs_tol) {
    if (!m.is_square() || unitarity_defect(m) > abs_tol)
        throw ContractViolation("operator is not unitary within tolerance");
}

double state_norm(const StateVector& psi) { return norm(psi.amplitudes); }

void require_normalized(const StateVector& psi, double tol) {
    if (std::abs(state_norm(psi) - 1.0) > tol) throw ContractViolation("state vector is not normalized");
}

StateVector normalized(StateVector psi) {
    const double n = state_norm(psi);
    if (n < 1e-14) throw ContractViolation("cannot normalize a numerically null state");
    scale(psi.amplitudes, 1.0 / n);
    return psi;
}

Operator kron(const Operator& a, const Operator& b) {
    SiteLayout lay;
    lay.local_dims = a.layout.local_dims;
    lay.local_dims.insert(lay.local_dims.end(), b.layout.local_dims.begin(), b.layout.local_dims.end());
    lay.has_ancilla = b.layout.has_ancilla;
    if (a.layout.has_ancilla) throw std::invalid_argument("kron: left factor must not carry the ancilla slot");
    return Operator(lay, kernels::kron(a.entries, b.entries));
}

StateVector kron(const StateVector& a, const StateVector& b) {
    SiteLayout lay;
    lay.local_dims = a.layout.local_dims;
    lay.local_dims.insert(lay.local_dims.end(), b.layout.local_dims.begin(), b.layout.local_dims.end());
    lay.has_ancilla = b.layout.has_ancilla;
    if (a.layout.has_ancilla) throw std::invalid_argument("kron: left factor must not carry the ancilla slot");
    CVec amps(static_cast<size_t>(a.dim()) * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int k = 0; k < b.dim(); ++k) amps[static_cast<size_t>(i) * b.dim() + k] = a.amplitudes[i] * b.amplitudes[k];
    return StateVector(lay, std::move(amps));
}

Operator tensor_embed(const Operator& op, int site_index, const SiteLayout& layout) {
    require_valid_slot(layout, site_index, "tensor_embed");
    const int d = layout.local_dims[site_index];
    if (op.dim() != d) throw std::invalid_argument("tensor_embed: operator dimension does not match slot");
    const int n = layout.total_dim();
    const int stride = layout.stride(site_index);
    CMat out(n, n);
    for (int i = 0; i < n; ++i) {
        const int r = (i / stride) % d;
        const int base = i - r * stride;
        for (int c = 0; c < d; ++c) {
            const cplx v = op.entries(r, c);
            if (v != cplx(0.0, 0.0)) out(i, base + c * stride) = v;
        }
    }
    return Operator(layout, std::move(out));
}

Operator tensor_embed_pair(const CMat& op, int slot_a, int slot_b, const SiteLayout& layout) {
    require_valid_slot(layout, slot_a, "tensor_embed_pair");
    require_valid_slot(layout, slot_b, "tensor_embed_pair");
    if (slot_a == slot_b) throw std::invalid_argument("tensor_embed_pair: slots must differ");
    const int da = layout.local_dims[slot_a];
    const int db = layout.local_dims[slot_b];
    if (!op.is_square() || op.rows != da * db)
        throw std::invalid_argument("tensor_embed_pair: operator dimension does not match the slot pair");
    const int sa = layout.stride(slot_a);
    const int sb = layout.stride(slot_b);
    const int n = layout.total_dim();
    CMat out(n, n);
    for (int i = 0; i < n; ++i) {
        const int ra = (i / sa) % da;
        const int rb = (i / sb) % db;
        const int base = i - ra * sa - rb * sb;
        const int row = ra * db + rb;
        for (int ca = 0; ca < da; ++ca)
            for (int cb = 0; cb < db; ++cb) {
                const cplx v = op(row, ca * db + cb);
                if (v != cplx(0.0, 0.0)) out(i, base + ca * sa + cb * sb) = v;
            }
    }
    return Operator(layout, std::move(out));
}

StateVector apply(const Operator& op, const StateVector& psi) {
    require_same_layout(op.layout, psi.layout, "apply");
    return StateVector(psi.layout, kernels::matvec(op.entries, psi.amplitudes));
}

cplx expectation(const StateVector& psi, const Operator& op) {
    require_same_layout(op.layout, psi.layout, "expectation");
    return dot(psi.amplitudes, kernels::matvec(op.entries, psi.amplitudes));
}

}  // namespace spincorr
