#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spincorr {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Dense complex matrix, row-major.
struct CMat {
    int rows = 0;
    int cols = 0;
    CVec a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c), cplx(0.0, 0.0)) {}

    cplx& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMat diagonal(const std::vector<double>& d) {
        CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m.a[i * d.size() + i] = d[i];
        return m;
    }

    static CMat diagonal(const CVec& d) {
        CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m.a[i * d.size() + i] = d[i];
        return m;
    }

    bool is_square() const { return rows == cols; }
};

inline CMat adjoint(const CMat& m) {
    CMat out(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

inline CMat operator+(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix addition: shape mismatch");
    CMat out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
    return out;
}

inline CMat operator-(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix subtraction: shape mismatch");
    CMat out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
    return out;
}

inline CMat operator*(cplx s, const CMat& m) {
    CMat out = m;
    for (auto& v : out.a) v *= s;
    return out;
}

inline double max_abs(const CMat& m) {
    double mx = 0.0;
    for (const cplx& v : m.a) mx = std::max(mx, std::abs(v));
    return mx;
}

inline double max_abs_diff(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double mx = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) mx = std::max(mx, std::abs(x.a[i] - y.a[i]));
    return mx;
}

// <x|y> with the left factor conjugated.
inline cplx dot(const CVec& x, const CVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
    cplx s(0.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline double norm(const CVec& x) { return std::sqrt(std::real(dot(x, x))); }

inline void scale(CVec& x, cplx s) {
    for (auto& v : x) v *= s;
}

inline double max_abs_diff(const CVec& x, const CVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
    double mx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) mx = std::max(mx, std::abs(x[i] - y[i]));
    return mx;
}

}  // namespace spincorr
