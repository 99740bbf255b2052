#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>

namespace torusflux {

/// Integer wavevector alpha in Z^2 for the Fourier basis e^{2 pi i alpha.x}
/// on the unit torus. (0,0) is the mean mode.
struct Wavevector {
    int a1 = 0;
    int a2 = 0;

    friend auto operator<=>(const Wavevector&, const Wavevector&) = default;

    Wavevector operator+(Wavevector o) const { return {a1 + o.a1, a2 + o.a2}; }
    Wavevector operator-() const { return {-a1, -a2}; }
    Wavevector operator-(Wavevector o) const { return {a1 - o.a1, a2 - o.a2}; }

    double norm() const { return std::hypot(double(a1), double(a2)); }
    double norm_sq() const { return double(a1) * a1 + double(a2) * a2; }
    int norm_inf() const { return std::max(std::abs(a1), std::abs(a2)); }
    bool is_zero() const { return a1 == 0 && a2 == 0; }
};

struct WavevectorHash {
    std::size_t operator()(Wavevector k) const {
        std::uint64_t v = (std::uint64_t(std::uint32_t(k.a1)) << 32) | std::uint32_t(k.a2);
        // splitmix64 finalizer
        v += 0x9e3779b97f4a7c15ull;
        v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
        v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
        return std::size_t(v ^ (v >> 31));
    }
};

}  // namespace torusflux
