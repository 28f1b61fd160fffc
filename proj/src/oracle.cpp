#include "spincorr/oracle.hpp"

#include <cmath>

#include "spincorr/kernels.hpp"
#include "spincorr/spectral.hpp"
#include "spincorr/spin_ops.hpp"

namespace spincorr {

namespace {

void require_sites(const SiteLayout& lay, int site_i, int site_j) {
    require_valid_slot(lay, site_i, "correlation site_i");
    require_valid_slot(lay, site_j, "correlation site_j");
}

// In-place S_site^z on a system vector (diagonal in the fixed basis).
void scale_by_site_m(const SiteLayout& lay, int site, CVec& amps) {
    const int d = lay.local_dims[site];
    const int stride = lay.stride(site);
    const HalfInt l = lay.spin_at(site);
    for (size_t i = 0; i < amps.size(); ++i)
        amps[i] *= m_of_index(l, (static_cast<int>(i) / stride) % d).value();
}

// Splits a verified product state into the system vector and checks that
// the ancilla factor is the balanced superposition of Eq.-type (both
// z-components equal).
CVec strip_balanced_ancilla(const StateVector& psi_with_ancilla) {
    const SiteLayout& lay = psi_with_ancilla.layout;
    if (!lay.has_ancilla) throw std::invalid_argument("expected a state with an ancilla slot");
    const int d_sys = lay.total_dim() / 2;
    CVec sys(static_cast<size_t>(d_sys));
    const double sqrt2 = std::sqrt(2.0);
    for (int i = 0; i < d_sys; ++i) {
        const cplx lo = psi_with_ancilla.amplitudes[static_cast<size_t>(2 * i)];
        const cplx hi = psi_with_ancilla.amplitudes[static_cast<size_t>(2 * i + 1)];
        if (std::abs(lo - hi) > 1e-12)
            throw std::invalid_argument("ancilla is not in the balanced (|down>+|up>)/sqrt(2) superposition");
        sys[static_cast<size_t>(i)] = lo * sqrt2;
    }
    return sys;
}

}  // namespace

cplx exact_two_time(const StateVector& psi, const Operator& h, int site_i, int site_j, double t1, double t2) {
    const SiteLayout& lay = psi.layout;
    if (lay.has_ancilla) throw std::invalid_argument("exact_two_time operates on the bare system state");
    require_same_layout(lay, h.layout, "exact_two_time");
    require_sites(lay, site_i, site_j);

    const Propagator prop(h);
    // <psi(t1)| S_i^z e^{iH(t2-t1)} S_j^z |psi(t2)>
    const CVec left = prop.evolve_raw(psi.amplitudes, t1);
    CVec right = prop.evolve_raw(psi.amplitudes, t2);
    scale_by_site_m(lay, site_j, right);
    right = prop.evolve_raw(right, t1 - t2);
    scale_by_site_m(lay, site_i, right);
    return dot(left, right);
}

cplx normalized_correlation(const StateVector& psi, const Operator& h, double t1, double t2, HalfInt l) {
    const double l2 = l.value() * l.value();
    if (l2 == 0.0) throw std::invalid_argument("normalized correlation requires l > 0");
    return exact_two_time(psi, h, 0, 1, t1, t2) / l2;
}

double ising_zz_closed_form(const StateVector& psi_with_ancilla, const Operator& h, int site_i, int site_j, double t1,
                            double t2, double lambda) {
    const SiteLayout sys_lay = psi_with_ancilla.layout.without_ancilla();
    require_same_layout(sys_lay, h.layout, "ising_zz_closed_form");
    require_sites(sys_lay, site_i, site_j);
    const CVec sys = strip_balanced_ancilla(psi_with_ancilla);

    const Propagator prop(h);
    const CVec psi_t1 = prop.evolve_raw(sys, t1);
    const int d_i = sys_lay.local_dims[site_i];
    const int stride_i = sys_lay.stride(site_i);
    const HalfInt l_i = sys_lay.spin_at(site_i);
    const double dt = t2 - t1;

    // Difference of branch expectations <e^{+i lambda s S_i^z} S_j^z(dt)
    // e^{-i lambda s S_i^z}> over the ancilla components s = +-1/2, each
    // occurring with probability 1/2 and entering the correlator with
    // weight +-1.
    auto branch_expectation = [&](double s) {
        CVec v = psi_t1;
        for (size_t k = 0; k < v.size(); ++k) {
            const double m_i = m_of_index(l_i, (static_cast<int>(k) / stride_i) % d_i).value();
            v[k] *= std::exp(cplx(0.0, -lambda * s * m_i));
        }
        const CVec evolved = prop.evolve_raw(v, dt);
        double acc = 0.0;
        const int d_j = sys_lay.local_dims[site_j];
        const int stride_j = sys_lay.stride(site_j);
        const HalfInt l_j = sys_lay.spin_at(site_j);
        for (size_t k = 0; k < evolved.size(); ++k)
            acc += std::norm(evolved[k]) * m_of_index(l_j, (static_cast<int>(k) / stride_j) % d_j).value();
        return acc;
    };

    return 0.5 * (branch_expectation(0.5) - branch_expectation(-0.5));
}

double ising_xx_closed_form(const StateVector& psi_with_ancilla, const Operator& h, int site_i, int site_j, double t1,
                            double t2, double lambda) {
    const SiteLayout sys_lay = psi_with_ancilla.layout.without_ancilla();
    require_same_layout(sys_lay, h.layout, "ising_xx_closed_form");
    require_sites(sys_lay, site_i, site_j);
    const CVec sys = strip_balanced_ancilla(psi_with_ancilla);

    // Recover the ancilla x-components from the verified balanced state:
    // alpha_plus = (phi_up + phi_down)/sqrt(2), alpha_minus = (phi_up -
    // phi_down)/sqrt(2). The balanced ancilla has alpha_minus = 0, which is
    // what makes this correlator vanish.
    int i0 = 0;
    double best = -1.0;
    for (size_t i = 0; i < sys.size(); ++i) {
        if (std::abs(sys[i]) > best) {
            best = std::abs(sys[i]);
            i0 = static_cast<int>(i);
        }
    }
    const cplx phi_down = psi_with_ancilla.amplitudes[static_cast<size_t>(2 * i0)] / sys[static_cast<size_t>(i0)];
    const cplx phi_up = psi_with_ancilla.amplitudes[static_cast<size_t>(2 * i0 + 1)] / sys[static_cast<size_t>(i0)];
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx alpha_plus = (phi_up + phi_down) * inv_sqrt2;
    const cplx alpha_minus = (phi_up - phi_down) * inv_sqrt2;

    const Propagator prop(h);
    const CVec psi_t1 = prop.evolve_raw(sys, t1);
    const double dt = t2 - t1;

    // chi_s = e^{-i lambda s S_i^x} psi(t1), built from the spectral form of
    // the single-site S^x so the phases attach to its eigenvalues a: the
    // cross term <chi_+|S_j^z(dt)|chi_-> is the double sum over (a~, a) with
    // kernel e^{i lambda (a~ + a)/2}.
    const SpinOps ops = spin_operators(sys_lay.spin_at(site_i));
    const auto sx_eig = hermitian_eigensystem(ops.sx.entries);
    auto chi = [&](double s) {
        const int d_i = sys_lay.local_dims[site_i];
        CMat u(d_i, d_i);
        for (int r = 0; r < d_i; ++r)
            for (int c = 0; c < d_i; ++c) {
                cplx acc(0.0, 0.0);
                for (int k = 0; k < d_i; ++k)
                    acc += sx_eig->eigenvectors(r, k) * std::exp(cplx(0.0, -lambda * s * sx_eig->eigenvalues[k])) *
                           std::conj(sx_eig->eigenvectors(c, k));
                u(r, c) = acc;
            }
        const Operator embedded = tensor_embed(Operator(SiteLayout::of_dims({d_i}), std::move(u)), site_i, sys_lay);
        return kernels::matvec(embedded.entries, psi_t1);
    };

    CVec chi_plus = prop.evolve_raw(chi(0.5), dt);
    CVec chi_minus = prop.evolve_raw(chi(-0.5), dt);
    scale_by_site_m(sys_lay, site_j, chi_minus);
    const cplx cross = dot(chi_plus, chi_minus);

    // The z-measured branches are (alpha_plus chi_plus +- alpha_minus
    // chi_minus)/sqrt(2); their +-1-weighted S_j^z difference leaves only
    // the cross term.
    return 2.0 * std::real(std::conj(alpha_plus) * alpha_minus * cross);
}

DeviationReport systematic_deviation(const std::vector<std::pair<double, double>>& exact_series,
                                     const std::vector<std::pair<double, double>>& estimate_series) {
    if (exact_series.size() != estimate_series.size())
        throw std::invalid_argument("systematic_deviation: series lengths differ");
    DeviationReport report;
    report.grid.reserve(exact_series.size());
    double total = 0.0;
    for (size_t k = 0; k < exact_series.size(); ++k) {
        const auto& [t_exact, v_exact] = exact_series[k];
        const auto& [t_est, v_est] = estimate_series[k];
        if (std::abs(t_exact - t_est) > 1e-9) throw std::invalid_argument("systematic_deviation: t2 grids differ");
        const double dev = std::abs(v_exact - v_est);
        report.grid.push_back({t_exact, v_exact, v_est});
        report.max_abs_dev = std::max(report.max_abs_dev, dev);
        total += dev;
    }
    report.mean_abs_dev = exact_series.empty() ? 0.0 : total / static_cast<double>(exact_series.size());
    return report;
}

}  // namespace spincorr
