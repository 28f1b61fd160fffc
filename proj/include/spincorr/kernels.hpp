#pragma once

#include "spincorr/linalg.hpp"

namespace spincorr::kernels {

// Execution backend for the dense kernels. Serial is the reference
// implementation; OpenMP parallelizes over output rows with identical
// per-row arithmetic, so both backends produce bitwise-equal results.
enum class Backend { Serial, OpenMP };

Backend default_backend();
void set_default_backend(Backend b);

namespace serial {
void matvec(const CMat& m, const cplx* x, cplx* y);
void matvec_adj(const CMat& m, const cplx* x, cplx* y);
CMat matmul(const CMat& x, const CMat& y);
CMat kron(const CMat& x, const CMat& y);
// Applies a d_a*d_b square matrix to the (slot_a, slot_b) pair of a
// tensor-product state without materializing the full-space operator.
// stride/dim describe the flat row-major layout of psi.
void apply_two_site(const CMat& op, const cplx* psi, cplx* out, int n, int dim_a, int stride_a, int dim_b,
                    int stride_b);
}  // namespace serial

namespace omp {
void matvec(const CMat& m, const cplx* x, cplx* y);
void matvec_adj(const CMat& m, const cplx* x, cplx* y);
CMat matmul(const CMat& x, const CMat& y);
CMat kron(const CMat& x, const CMat& y);
void apply_two_site(const CMat& op, const cplx* psi, cplx* out, int n, int dim_a, int stride_a, int dim_b,
                    int stride_b);
}  // namespace omp

// Dispatch through the process-wide default backend.
CVec matvec(const CMat& m, const CVec& x);
CVec matvec_adj(const CMat& m, const CVec& x);
CMat matmul(const CMat& x, const CMat& y);
CMat kron(const CMat& x, const CMat& y);
CVec apply_two_site(const CMat& op, const CVec& psi, int dim_a, int stride_a, int dim_b, int stride_b);

}  // namespace spincorr::kernels
