#pragma once

#include "spincorr/halfint.hpp"
#include "spincorr/operator.hpp"

namespace spincorr {

// Single-site spin-l matrices in the ascending-m basis (m = -l first).
struct SpinOps {
    HalfInt l;
    Operator sx, sy, sz, s_plus, s_minus, s_squared;
};

SpinOps spin_operators(HalfInt l);

}  // namespace spincorr
