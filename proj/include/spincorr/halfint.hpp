#pragma once

#include <cmath>
#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace spincorr {

// Exact half-integer arithmetic for angular momentum quantum numbers.
// Stores twice the value, so l = 1/2, m = -7/2 etc. never touch floating
// point until a matrix element is actually evaluated.
class HalfInt {
  public:
    constexpr HalfInt() = default;

    static constexpr HalfInt from_twice(int twice_value) { return HalfInt(twice_value); }
    static constexpr HalfInt whole(int value) { return HalfInt(2 * value); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * static_cast<double>(twice_); }
    constexpr bool is_whole() const { return (twice_ % 2) == 0; }

    constexpr HalfInt operator-() const { return HalfInt(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

    std::string str() const {
        if (is_whole()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

  private:
    constexpr explicit HalfInt(int twice_value) : twice_(twice_value) {}
    int twice_ = 0;
};

constexpr HalfInt one_half = HalfInt::from_twice(1);

// Dimension 2l+1 of the spin-l multiplet.
inline int multiplet_dim(HalfInt l) { return l.twice() + 1; }

// l(l+1)
inline double casimir(HalfInt l) { return l.value() * (l.value() + 1.0); }

inline void require_valid_spin(HalfInt l) {
    if (l.twice() < 0) {
        throw std::invalid_argument("invalid spin quantum number l = " + l.str());
    }
}

inline bool is_valid_m(HalfInt l, HalfInt m) {
    return std::abs(m.twice()) <= l.twice() && ((m.twice() - l.twice()) % 2 == 0);
}

inline void require_valid_m(HalfInt l, HalfInt m) {
    if (!is_valid_m(l, m)) {
        throw std::invalid_argument("m = " + m.str() + " is not a magnetic quantum number of spin l = " + l.str());
    }
}

// m = -l, -l+1, ..., +l in the fixed ascending basis order.
inline std::vector<HalfInt> m_range(HalfInt l) {
    require_valid_spin(l);
    std::vector<HalfInt> out;
    out.reserve(static_cast<size_t>(multiplet_dim(l)));
    for (int t = -l.twice(); t <= l.twice(); t += 2) out.push_back(HalfInt::from_twice(t));
    return out;
}

// Basis index of |l, m> under ascending-m ordering.
inline int m_index(HalfInt l, HalfInt m) {
    require_valid_m(l, m);
    return (m.twice() + l.twice()) / 2;
}

// Inverse of m_index.
inline HalfInt m_of_index(HalfInt l, int index) {
    return HalfInt::from_twice(-l.twice() + 2 * index);
}

}  // namespace spincorr
