#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "spincorr/halfint.hpp"

namespace spincorr {

// Tensor factorization of a Hilbert space: one slot per lattice site, in
// lattice order, with the spin-1/2 ancilla (when present) always in the
// final slot. Flat indices are row-major, i.e. the last slot varies fastest.
struct SiteLayout {
    std::vector<int> local_dims;
    bool has_ancilla = false;

    SiteLayout() = default;

    static SiteLayout sites(const std::vector<HalfInt>& spins) {
        SiteLayout ly;
        ly.local_dims.reserve(spins.size());
        for (HalfInt l : spins) {
            require_valid_spin(l);
            ly.local_dims.push_back(multiplet_dim(l));
        }
        return ly;
    }

    static SiteLayout of_dims(std::vector<int> dims, bool ancilla = false) {
        for (int d : dims) {
            if (d <= 0) throw std::invalid_argument("site layout requires positive local dimensions");
        }
        SiteLayout ly;
        ly.local_dims = std::move(dims);
        ly.has_ancilla = ancilla;
        return ly;
    }

    SiteLayout with_ancilla() const {
        if (has_ancilla) throw std::invalid_argument("layout already has an ancilla slot");
        SiteLayout ly = *this;
        ly.local_dims.push_back(2);
        ly.has_ancilla = true;
        return ly;
    }

    SiteLayout without_ancilla() const {
        if (!has_ancilla) throw std::invalid_argument("layout has no ancilla slot");
        SiteLayout ly = *this;
        ly.local_dims.pop_back();
        ly.has_ancilla = false;
        return ly;
    }

    int num_slots() const { return static_cast<int>(local_dims.size()); }
    int num_system_sites() const { return num_slots() - (has_ancilla ? 1 : 0); }
    int ancilla_slot() const {
        if (!has_ancilla) throw std::invalid_argument("layout has no ancilla slot");
        return num_slots() - 1;
    }

    int total_dim() const {
        int d = 1;
        for (int n : local_dims) d *= n;
        return d;
    }

    // Distance between consecutive values of slot k in the flat index.
    int stride(int slot) const {
        int s = 1;
        for (int k = slot + 1; k < num_slots(); ++k) s *= local_dims[k];
        return s;
    }

    HalfInt spin_at(int slot) const { return HalfInt::from_twice(local_dims.at(static_cast<size_t>(slot)) - 1); }

    bool operator==(const SiteLayout& o) const {
        return local_dims == o.local_dims && has_ancilla == o.has_ancilla;
    }
    bool operator!=(const SiteLayout& o) const { return !(*this == o); }
};

inline void require_same_layout(const SiteLayout& a, const SiteLayout& b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": site layouts do not match");
}

inline void require_valid_slot(const SiteLayout& ly, int slot, const char* what) {
    if (slot < 0 || slot >= ly.num_slots()) {
        throw std::invalid_argument(std::string(what) + ": site index " + std::to_string(slot) + " out of range");
    }
}

}  // namespace spincorr
