#include "spincorr/spin_ops.hpp"

#include "spincorr/kernels.hpp"

namespace spincorr {

SpinOps spin_operators(HalfInt l) {
    require_valid_spin(l);
    const int d = multiplet_dim(l);
    const SiteLayout lay = SiteLayout::sites({l});
    const double ll = casimir(l);

    CMat sz(d, d), sp(d, d), sm(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = m_of_index(l, k).value();
        sz(k, k) = m;
        // <l,m+1|S+|l,m> = sqrt(l(l+1) - m(m+1)), ascending-m indices
        if (k + 1 < d) sp(k + 1, k) = std::sqrt(ll - m * (m + 1.0));
        if (k > 0) sm(k - 1, k) = std::sqrt(ll - m * (m - 1.0));
    }

    CMat sx(d, d), sy(d, d);
    for (size_t i = 0; i < sx.a.size(); ++i) {
        sx.a[i] = 0.5 * (sp.a[i] + sm.a[i]);
        sy.a[i] = cplx(0.0, -0.5) * (sp.a[i] - sm.a[i]);
    }

    CMat s2 = kernels::serial::matmul(sx, sx) + kernels::serial::matmul(sy, sy) + kernels::serial::matmul(sz, sz);

    SpinOps ops;
    ops.l = l;
    ops.sx = Operator(lay, std::move(sx));
    ops.sy = Operator(lay, std::move(sy));
    ops.sz = Operator(lay, std::move(sz));
    ops.s_plus = Operator(lay, std::move(sp));
    ops.s_minus = Operator(lay, std::move(sm));
    ops.s_squared = Operator(lay, std::move(s2));
    return ops;
}

}  // namespace spincorr
