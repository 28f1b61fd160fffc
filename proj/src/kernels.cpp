#include "spincorr/kernels.hpp"

#include <atomic>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spincorr::kernels {

namespace {

std::atomic<Backend> g_backend{
#ifdef _OPENMP
    Backend::OpenMP
#else
    Backend::Serial
#endif
};

// Per-row bodies shared by both backends. The OpenMP kernels split work
// across output rows only, so every row is accumulated in the same order
// as the serial reference and the results match bitwise.

inline cplx matvec_row(const CMat& m, const cplx* x, int r) {
    const cplx* row = m.a.data() + static_cast<size_t>(r) * m.cols;
    cplx acc(0.0, 0.0);
    for (int c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    return acc;
}

inline cplx matvec_adj_row(const CMat& m, const cplx* x, int c) {
    cplx acc(0.0, 0.0);
    for (int r = 0; r < m.rows; ++r) acc += std::conj(m(r, c)) * x[r];
    return acc;
}

inline void matmul_row(const CMat& x, const CMat& y, CMat& out, int r) {
    cplx* orow = out.a.data() + static_cast<size_t>(r) * out.cols;
    const cplx* xrow = x.a.data() + static_cast<size_t>(r) * x.cols;
    for (int k = 0; k < x.cols; ++k) {
        const cplx xv = xrow[k];
        if (xv == cplx(0.0, 0.0)) continue;
        const cplx* yrow = y.a.data() + static_cast<size_t>(k) * y.cols;
        for (int c = 0; c < y.cols; ++c) orow[c] += xv * yrow[c];
    }
}

inline void kron_row(const CMat& x, const CMat& y, CMat& out, int r) {
    const int r1 = r / y.rows;
    const int r2 = r % y.rows;
    cplx* orow = out.a.data() + static_cast<size_t>(r) * out.cols;
    for (int c1 = 0; c1 < x.cols; ++c1) {
        const cplx xv = x(r1, c1);
        for (int c2 = 0; c2 < y.cols; ++c2) orow[static_cast<size_t>(c1) * y.cols + c2] = xv * y(r2, c2);
    }
}

inline cplx two_site_element(const CMat& op, const cplx* psi, int i, int dim_a, int stride_a, int dim_b,
                             int stride_b) {
    const int ia = (i / stride_a) % dim_a;
    const int ib = (i / stride_b) % dim_b;
    const int base = i - ia * stride_a - ib * stride_b;
    const cplx* row = op.a.data() + static_cast<size_t>(ia * dim_b + ib) * op.cols;
    cplx acc(0.0, 0.0);
    for (int a2 = 0; a2 < dim_a; ++a2)
        for (int b2 = 0; b2 < dim_b; ++b2) acc += row[a2 * dim_b + b2] * psi[base + a2 * stride_a + b2 * stride_b];
    return acc;
}

void check_matvec(const CMat& m, int xlen) {
    if (m.cols != xlen) throw std::invalid_argument("matvec: dimension mismatch");
}

void check_two_site(const CMat& op, int n, int dim_a, int stride_a, int dim_b, int stride_b) {
    if (!op.is_square() || op.rows != dim_a * dim_b) throw std::invalid_argument("apply_two_site: operator shape");
    if (dim_a < 1 || dim_b < 1 || stride_a < 1 || stride_b < 1 || n < dim_a * dim_b)
        throw std::invalid_argument("apply_two_site: bad layout");
    if (stride_a == stride_b) throw std::invalid_argument("apply_two_site: slots must differ");
}

}  // namespace

Backend default_backend() { return g_backend.load(); }
void set_default_backend(Backend b) { g_backend.store(b); }

namespace serial {

void matvec(const CMat& m, const cplx* x, cplx* y) {
    for (int r = 0; r < m.rows; ++r) y[r] = matvec_row(m, x, r);
}

void matvec_adj(const CMat& m, const cplx* x, cplx* y) {
    for (int c = 0; c < m.cols; ++c) y[c] = matvec_adj_row(m, x, c);
}

CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    CMat out(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r) matmul_row(x, y, out, r);
    return out;
}

CMat kron(const CMat& x, const CMat& y) {
    CMat out(x.rows * y.rows, x.cols * y.cols);
    for (int r = 0; r < out.rows; ++r) kron_row(x, y, out, r);
    return out;
}

void apply_two_site(const CMat& op, const cplx* psi, cplx* out, int n, int dim_a, int stride_a, int dim_b,
                    int stride_b) {
    check_two_site(op, n, dim_a, stride_a, dim_b, stride_b);
    for (int i = 0; i < n; ++i) out[i] = two_site_element(op, psi, i, dim_a, stride_a, dim_b, stride_b);
}

}  // namespace serial

namespace omp {

void matvec(const CMat& m, const cplx* x, cplx* y) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < m.rows; ++r) y[r] = matvec_row(m, x, r);
}

void matvec_adj(const CMat& m, const cplx* x, cplx* y) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < m.cols; ++c) y[c] = matvec_adj_row(m, x, c);
}

CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    CMat out(x.rows, y.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < x.rows; ++r) matmul_row(x, y, out, r);
    return out;
}

CMat kron(const CMat& x, const CMat& y) {
    CMat out(x.rows * y.rows, x.cols * y.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < out.rows; ++r) kron_row(x, y, out, r);
    return out;
}

void apply_two_site(const CMat& op, const cplx* psi, cplx* out, int n, int dim_a, int stride_a, int dim_b,
                    int stride_b) {
    check_two_site(op, n, dim_a, stride_a, dim_b, stride_b);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = two_site_element(op, psi, i, dim_a, stride_a, dim_b, stride_b);
}

}  // namespace omp

CVec matvec(const CMat& m, const CVec& x) {
    check_matvec(m, static_cast<int>(x.size()));
    CVec y(m.rows);
    if (default_backend() == Backend::OpenMP)
        omp::matvec(m, x.data(), y.data());
    else
        serial::matvec(m, x.data(), y.data());
    return y;
}

CVec matvec_adj(const CMat& m, const CVec& x) {
    if (m.rows != static_cast<int>(x.size())) throw std::invalid_argument("matvec_adj: dimension mismatch");
    CVec y(m.cols);
    if (default_backend() == Backend::OpenMP)
        omp::matvec_adj(m, x.data(), y.data());
    else
        serial::matvec_adj(m, x.data(), y.data());
    return y;
}

CMat matmul(const CMat& x, const CMat& y) {
    return default_backend() == Backend::OpenMP ? omp::matmul(x, y) : serial::matmul(x, y);
}

CMat kron(const CMat& x, const CMat& y) {
    return default_backend() == Backend::OpenMP ? omp::kron(x, y) : serial::kron(x, y);
}

CVec apply_two_site(const CMat& op, const CVec& psi, int dim_a, int stride_a, int dim_b, int stride_b) {
    CVec out(psi.size());
    const int n = static_cast<int>(psi.size());
    if (default_backend() == Backend::OpenMP)
        omp::apply_two_site(op, psi.data(), out.data(), n, dim_a, stride_a, dim_b, stride_b);
    else
        serial::apply_two_site(op, psi.data(), out.data(), n, dim_a, stride_a, dim_b, stride_b);
    return out;
}

}  // namespace spincorr::kernels
