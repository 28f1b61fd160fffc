#include "spincorr/coupled_basis.hpp"

namespace spincorr {

namespace {

constexpr double kNormFloor = 1e-30;

SiteLayout pair_layout(HalfInt l) { return SiteLayout::of_dims({multiplet_dim(l)}, false).with_ancilla(); }

// Ancilla basis order: index 0 is m_s = -1/2, index 1 is m_s = +1/2.
constexpr int kAncDown = 0;
constexpr int kAncUp = 1;

}  // namespace

CGPair cg_coefficients(HalfInt l, HalfInt m) {
    require_valid_spin(l);
    const HalfInt j_max = l + one_half;
    if (m.twice() > j_max.twice() || (-m).twice() > j_max.twice())
        throw std::invalid_argument("cg_coefficients: |m| exceeds l + 1/2");
    if ((m.twice() - j_max.twice()) % 2 != 0)
        throw std::invalid_argument("cg_coefficients: m has wrong parity for spin l + 1/2");
    const double denom = 2.0 * l.value() + 1.0;
    // At |m| = l + 1/2 one numerator is exactly 0; clamp so rounding noise
    // cannot turn it into a negative sqrt argument.
    const double num_a = std::max(0.0, l.value() + 0.5 + m.value());
    const double num_b = std::max(0.0, l.value() + 0.5 - m.value());
    return {std::sqrt(num_a / denom), std::sqrt(num_b / denom)};
}

StateVector coupled_basis_vector(HalfInt l, HalfInt j, HalfInt m) {
    require_valid_spin(l);
    const bool upper = (j == l + one_half);
    const bool lower = (j == l - one_half);
    if (!upper && !lower) throw std::invalid_argument("coupled_basis_vector: j must be l +- 1/2");
    if (!is_valid_m(j, m)) throw std::invalid_argument("coupled_basis_vector: invalid m for multiplet j");

    const SiteLayout lay = pair_layout(l);
    CVec amps(static_cast<size_t>(lay.total_dim()), cplx(0.0, 0.0));
    const CGPair cg = cg_coefficients(l, m);
    const HalfInt m_up = m - one_half;   // site m_l paired with ancilla up
    const HalfInt m_down = m + one_half; // site m_l paired with ancilla down

    if (upper) {
        // |l, l+1/2, m> = a |l, m-1/2>|up> + b |l, m+1/2>|down>
        if (is_valid_m(l, m_up)) amps[static_cast<size_t>(2 * m_index(l, m_up) + kAncUp)] = cg.a;
        if (is_valid_m(l, m_down)) amps[static_cast<size_t>(2 * m_index(l, m_down) + kAncDown)] = cg.b;
    } else {
        // |l, l-1/2, m> = a |l, m+1/2>|down> - b |l, m-1/2>|up>
        if (is_valid_m(l, m_down)) amps[static_cast<size_t>(2 * m_index(l, m_down) + kAncDown)] = cg.a;
        if (is_valid_m(l, m_up)) amps[static_cast<size_t>(2 * m_index(l, m_up) + kAncUp)] = -cg.b;
    }
    return StateVector(lay, std::move(amps));
}

Operator coupling_unitary_coupled_diag(HalfInt l, double lambda) {
    require_valid_spin(l);
    const SiteLayout lay = pair_layout(l);
    const int n = lay.total_dim();
    CMat u(n, n);

    auto add_multiplet = [&](HalfInt j) {
        // j(j+1) - l(l+1) - s(s+1) with s = 1/2
        const double shift = casimir(j) - casimir(l) - 0.75;
        const cplx phase = std::exp(cplx(0.0, -0.5 * lambda * shift));
        for (HalfInt m : m_range(j)) {
            const StateVector v = coupled_basis_vector(l, j, m);
            for (int r = 0; r < n; ++r) {
                const cplx vr = v.amplitudes[r];
                if (vr == cplx(0.0, 0.0)) continue;
                for (int c = 0; c < n; ++c) u(r, c) += phase * vr * std::conj(v.amplitudes[c]);
            }
        }
    };

    add_multiplet(l + one_half);
    if (l.twice() > 0) add_multiplet(l - one_half);
    return Operator(lay, std::move(u));
}

GammaTable gamma_coefficients(const StateVector& psi, int site) {
    const SiteLayout& lay = psi.layout;
    if (!lay.has_ancilla) throw std::invalid_argument("gamma_coefficients: state has no ancilla slot");
    if (site < 0 || site >= lay.num_system_sites())
        throw std::invalid_argument("gamma_coefficients: site index out of range");

    const HalfInt l = lay.spin_at(site);
    const int d_site = lay.local_dims[site];
    const int site_stride = lay.stride(site);
    const int n = lay.total_dim();
    const int rest_dim = n / (2 * d_site);

    GammaTable g;
    g.l = l;
    const int grid = d_site + 1;  // m from -l-1/2 to +l+1/2
    g.m_values.reserve(static_cast<size_t>(grid));
    for (int k = 0; k < grid; ++k) g.m_values.push_back(-l - one_half + HalfInt::whole(k));
    g.plus_blocks.assign(static_cast<size_t>(grid), CVec(static_cast<size_t>(rest_dim), cplx(0.0, 0.0)));
    g.minus_blocks.assign(static_cast<size_t>(grid), CVec(static_cast<size_t>(rest_dim), cplx(0.0, 0.0)));

    // Walk the full state once; the rest index is the flat index with the
    // site and ancilla digits removed.
    for (int i = 0; i < n; ++i) {
        const int k_site = (i / site_stride) % d_site;
        const int k_anc = i % 2;
        int rest = 0;
        for (int slot = 0; slot < lay.num_slots(); ++slot) {
            if (slot == site || slot == lay.ancilla_slot()) continue;
            rest = rest * lay.local_dims[slot] + (i / lay.stride(slot)) % lay.local_dims[slot];
        }
        const cplx amp = psi.amplitudes[i];
        if (k_anc == kAncUp) {
            // m = m_l + 1/2: grid position k_site + 1
            g.plus_blocks[static_cast<size_t>(k_site + 1)][static_cast<size_t>(rest)] = amp;
        } else {
            // m = m_l - 1/2: grid position k_site
            g.minus_blocks[static_cast<size_t>(k_site)][static_cast<size_t>(rest)] = amp;
        }
    }
    return g;
}

double gamma_completeness(const GammaTable& g) {
    double total = 0.0;
    for (size_t k = 0; k < g.m_values.size(); ++k) {
        for (const cplx& v : g.plus_blocks[k]) total += std::norm(v);
        for (const cplx& v : g.minus_blocks[k]) total += std::norm(v);
    }
    return total;
}

double slow_variation_metric(const GammaTable& g, bool interior_only) {
    const auto& blocks = g.plus_blocks;
    const int grid = static_cast<int>(blocks.size());
    if (grid == 0) return 0.0;
    const size_t rest = blocks.front().size();

    double max_norm = 0.0;
    for (const CVec& b : blocks) max_norm = std::max(max_norm, norm(b));

    auto diff_norm = [&](const CVec* lo, const CVec* hi) {
        double s = 0.0;
        for (size_t r = 0; r < rest; ++r) {
            const cplx a = lo ? (*lo)[r] : cplx(0.0, 0.0);
            const cplx b = hi ? (*hi)[r] : cplx(0.0, 0.0);
            s += std::norm(b - a);
        }
        return std::sqrt(s);
    };

    double max_diff = 0.0;
    if (interior_only) {
        // Plus blocks live on grid positions 1..grid-1; drop both edge m
        // values and scan differences strictly inside.
        for (int k = 2; k + 1 <= grid - 2; ++k) max_diff = std::max(max_diff, diff_norm(&blocks[k], &blocks[k + 1]));
    } else {
        for (int k = 0; k + 1 < grid; ++k) max_diff = std::max(max_diff, diff_norm(&blocks[k], &blocks[k + 1]));
        max_diff = std::max(max_diff, diff_norm(&blocks[grid - 1], nullptr));
    }
    return max_diff / (max_norm + kNormFloor);
}

JPopulations coupled_j_populations(const StateVector& psi, int site) {
    const GammaTable g = gamma_coefficients(psi, site);
    JPopulations pops;
    pops.j_upper = g.l + one_half;
    pops.j_lower = g.l - one_half;

    const size_t rest = static_cast<size_t>(g.rest_dim());
    for (size_t k = 0; k < g.m_values.size(); ++k) {
        const HalfInt m = g.m_values[k];
        const CGPair cg = cg_coefficients(g.l, m);
        double w_upper = 0.0;
        double w_lower = 0.0;
        for (size_t r = 0; r < rest; ++r) {
            const cplx up = cg.a * g.plus_blocks[k][r] + cg.b * g.minus_blocks[k][r];
            const cplx lo = cg.a * g.minus_blocks[k][r] - cg.b * g.plus_blocks[k][r];
            w_upper += std::norm(up);
            w_lower += std::norm(lo);
        }
        pops.p_upper += w_upper;
        if (is_valid_m(pops.j_lower, m)) pops.p_lower += w_lower;
    }
    return pops;
}

}  // namespace spincorr
