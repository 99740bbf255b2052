#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "torusflux/error.hpp"
#include "torusflux/sparse_field.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

// ------------------------------------------------------------ skeleton

struct SkeletonSpec {
    std::vector<int> q_list;
};

inline void check_gap_rule(const std::vector<int>& q_list) {
    if (q_list.empty()) throw validation_error("empty-q-list", "need at least one active scale");
    for (std::size_t j = 0; j < q_list.size(); ++j) {
        if (q_list[j] < 2) throw validation_error("q-too-small", "active scales need q >= 2");
        if (j > 0 && !(q_list[j - 1] + 1 < q_list[j] - 1))
            throw validation_error("gap-rule-violation", "need q_{j-1} + 1 < q_j - 1 at j=" + std::to_string(j));
    }
}

/// Six-mode interaction triple u_q = v_{q-1} + w_q straddling the cutoff
/// lambda_q. Real, divergence-free, exact rational/cbrt coefficients.
inline VelocityField skeleton_triple(int q) {
    if (q < 2) throw validation_error("q-too-small", "skeleton triple needs q >= 2");
    double lam = std::ldexp(1.0, q), lam_prev = 0.5 * lam;
    int l = 1 << q, lp = l / 2;
    double av = std::pow(lam_prev, -1.0 / 3.0);
    double aw = std::pow(lam, -1.0 / 3.0);
    VelocityField u;
    u.set({0, lp}, {Complex(0.0, av), 0.0});
    u.set({0, -lp}, {Complex(0.0, -av), 0.0});
    u.set({l, 0}, {0.0, aw});
    u.set({-l, 0}, {0.0, aw});
    u.set({l, lp}, {-aw, 2.0 * aw});
    u.set({-l, -lp}, {-aw, 2.0 * aw});
    return u;
}

/// Superposition over the active scales; spectral supports stay disjoint
/// under the gap rule.
inline VelocityField skeleton_field(const SkeletonSpec& spec) {
    check_gap_rule(spec.q_list);
    VelocityField u;
    for (int q : spec.q_list)
        for (const auto& [k, c] : skeleton_triple(q).coeffs()) u.add(k, c);
    return u;
}

// ------------------------------------------------------------- lattice

struct LatticeSpec {
    std::vector<int> q_list;
    double eps = 1.0 / 16.0;
};

/// Dense box of modes carrier + {|beta|_inf <= h}; data is row-major with
/// index (b1+h)*(2h+1) + (b2+h).
struct Block {
    Wavevector carrier;
    int h = 0;
    std::vector<CoeffVec<2>> data;

    int side() const { return 2 * h + 1; }
    std::size_t index(int b1, int b2) const { return std::size_t(b1 + h) * side() + (b2 + h); }
    bool contains(Wavevector k) const {
        return std::abs(k.a1 - carrier.a1) <= h && std::abs(k.a2 - carrier.a2) <= h;
    }
};

struct BlockField {
    std::vector<Block> blocks;  // mirrors included explicitly

    std::size_t mode_count() const {
        std::size_t m = 0;
        for (const auto& b : blocks) m += b.data.size();
        return m;
    }
};

namespace detail {

inline Block make_block(Wavevector carrier, int h, CoeffVec<2> amp) {
    Block b{carrier, h, {}};
    b.data.assign(std::size_t(b.side()) * b.side(), CoeffVec<2>{});
    for (int b1 = -h; b1 <= h; ++b1)
        for (int b2 = -h; b2 <= h; ++b2) {
            Wavevector k = carrier + Wavevector{b1, b2};
            if (k.is_zero()) throw validation_error("block-overlap", "lattice block touches the origin");
            // per-mode Leray projection of the constant block direction
            double n2 = k.norm_sq();
            Complex dot = (double(k.a1) * amp[0] + double(k.a2) * amp[1]) / n2;
            b.data[b.index(b1, b2)] = {amp[0] - dot * double(k.a1), amp[1] - dot * double(k.a2)};
        }
    return b;
}

inline Block mirror_block(const Block& b) {
    Block m{-b.carrier, b.h, {}};
    m.data.assign(b.data.size(), CoeffVec<2>{});
    for (int b1 = -b.h; b1 <= b.h; ++b1)
        for (int b2 = -b.h; b2 <= b.h; ++b2) {
            const CoeffVec<2>& c = b.data[b.index(b1, b2)];
            m.data[m.index(-b1, -b2)] = {std::conj(c[0]), std::conj(c[1])};
        }
    return m;
}

inline bool blocks_disjoint(const Block& a, const Block& b) {
    return std::abs(a.carrier.a1 - b.carrier.a1) > a.h + b.h ||
           std::abs(a.carrier.a2 - b.carrier.a2) > a.h + b.h;
}

}  // namespace detail

/// Lattice-block triple: each skeleton mode widened to a box of side
/// 2*floor(eps*lambda)+1 with flat amplitude lambda^{-5/3}, Leray-projected
/// per mode. Degenerates to a rescaled skeleton when floor(eps*lambda) = 0.
inline BlockField lattice_triple_blocks(int q, double eps) {
    if (q < 2) throw validation_error("q-too-small", "lattice triple needs q >= 2");
    if (!(eps > 0.0 && eps <= 0.125)) throw validation_error("eps-out-of-range", "eps must lie in (0, 1/8]");
    double lam = std::ldexp(1.0, q), lam_prev = 0.5 * lam;
    int l = 1 << q, lp = l / 2;
    int hv = int(std::floor(eps * lam_prev));
    int hw = int(std::floor(eps * lam));
    double av = std::pow(lam_prev, -5.0 / 3.0);
    double aw = std::pow(lam, -5.0 / 3.0);
    BlockField f;
    auto push = [&](Block b) {
        f.blocks.push_back(detail::mirror_block(b));
        f.blocks.push_back(std::move(b));
    };
    push(detail::make_block({0, lp}, hv, {Complex(0.0, av), 0.0}));
    push(detail::make_block({l, 0}, hw, {0.0, aw}));
    push(detail::make_block({l, lp}, hw, {-aw, 2.0 * aw}));
    for (std::size_t i = 0; i < f.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < f.blocks.size(); ++j)
            if (!detail::blocks_disjoint(f.blocks[i], f.blocks[j]))
                throw validation_error("block-overlap", "lattice blocks intersect");
    return f;
}

inline BlockField lattice_field_blocks(const LatticeSpec& spec) {
    check_gap_rule(spec.q_list);
    BlockField f;
    for (int q : spec.q_list) {
        BlockField t = lattice_triple_blocks(q, spec.eps);
        for (auto& b : t.blocks) f.blocks.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < f.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < f.blocks.size(); ++j)
            if (!detail::blocks_disjoint(f.blocks[i], f.blocks[j]))
                throw validation_error("block-overlap", "lattice blocks intersect across scales");
    return f;
}

inline VelocityField to_sparse(const BlockField& f) {
    VelocityField u;
    for (const auto& b : f.blocks)
        for (int b1 = -b.h; b1 <= b.h; ++b1)
            for (int b2 = -b.h; b2 <= b.h; ++b2)
                u.add(b.carrier + Wavevector{b1, b2}, b.data[b.index(b1, b2)]);
    return u;
}

inline VelocityField lattice_triple(int q, double eps) { return to_sparse(lattice_triple_blocks(q, eps)); }

inline VelocityField lattice_field(const LatticeSpec& spec) { return to_sparse(lattice_field_blocks(spec)); }

// ------------------------------------------------------ comparison fields

/// 1D Dirichlet kernel D_n(x) = sum_{|k|<=n} e^{2 pi i k x} sampled on a
/// uniform grid fine enough for L^p quadrature of |D_n|^p.
inline std::vector<double> dirichlet_kernel(int n, int grid = 0) {
    if (n < 1) throw validation_error("n-too-small", "Dirichlet kernel needs n >= 1");
    if (grid == 0) grid = std::max(4096, 32 * n);
    std::vector<double> s(grid);
    for (int j = 0; j < grid; ++j) {
        double x = double(j) / grid;
        double den = std::sin(std::numbers::pi * x);
        s[j] = den == 0.0 ? double(2 * n + 1)
                          : std::sin((2.0 * n + 1.0) * std::numbers::pi * x) / den;
    }
    return s;
}

inline double lp_norm_1d(const std::vector<double>& s, double p) {
    double acc = 0.0;
    for (double v : s) acc += std::pow(std::abs(v), p);
    return std::pow(acc / double(s.size()), 1.0 / p);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t v) {
    v += 0x9e3779b97f4a7c15ull;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return v ^ (v >> 31);
}

/// Uniform in [0,1) derived from (seed, mode) alone, so truncating the
/// spectrum never re-shuffles the surviving phases. Explicit 53-bit
/// mapping; no distribution implementation drift.
inline double mode_uniform(std::uint64_t seed, Wavevector k) {
    std::uint64_t packed = (std::uint64_t(std::uint32_t(k.a1)) << 32) | std::uint32_t(k.a2);
    return double(splitmix64(splitmix64(seed) ^ packed) >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Random-phase divergence-free field with |coeffs| ~ |alpha|^{-gamma},
/// deterministic in the seed.
inline VelocityField power_law_field(double gamma, int max_freq, std::uint64_t seed) {
    if (!(gamma > 1.0)) throw validation_error("gamma-out-of-range", "need gamma > 1");
    if (max_freq < 4) throw validation_error("max-freq-too-small", "need max_freq >= 4");
    VelocityField u;
    for (int a1 = -max_freq; a1 <= max_freq; ++a1)
        for (int a2 = 0; a2 <= max_freq; ++a2) {
            if (a2 == 0 && a1 <= 0) continue;  // half lattice; mirror added below
            Wavevector k{a1, a2};
            if (k.norm() > max_freq) continue;
            double amp = std::pow(k.norm(), -gamma);
            double th = two_pi * detail::mode_uniform(seed, k);
            Complex phase = std::polar(amp, th);
            // unit vector orthogonal to alpha: already divergence-free
            double n = k.norm();
            CoeffVec<2> c{phase * (double(k.a2) / n), phase * (-double(k.a1) / n)};
            u.set(k, c);
            u.set(-k, {std::conj(c[0]), std::conj(c[1])});
        }
    return leray_project(u);
}

/// Random-phase scalar with |coeffs| ~ |alpha|^{-gamma}, mean zero;
/// used as rough vorticity data.
inline ScalarField power_law_vorticity(double gamma, int max_freq, std::uint64_t seed) {
    if (max_freq < 1) throw validation_error("max-freq-too-small", "need max_freq >= 1");
    ScalarField w;
    for (int a1 = -max_freq; a1 <= max_freq; ++a1)
        for (int a2 = 0; a2 <= max_freq; ++a2) {
            if (a2 == 0 && a1 <= 0) continue;
            Wavevector k{a1, a2};
            if (k.norm() > max_freq) continue;
            double amp = std::pow(k.norm(), -gamma);
            Complex c = std::polar(amp, two_pi * detail::mode_uniform(seed, k));
            w.set(k, {c});
            w.set(-k, {std::conj(c)});
        }
    return w;
}

/// (f(x_2), 0) from 1D profile coefficients f_hat(k); real by mirroring.
inline VelocityField shear_field(const std::vector<std::pair<int, Complex>>& profile_modes) {
    VelocityField u;
    for (const auto& [k, c] : profile_modes) {
        u.add({0, k}, {c, 0.0});
        if (k != 0) u.add({0, -k}, {std::conj(c), 0.0});
    }
    if (!u.is_real(1e-12)) throw validation_error("conjugate-symmetry", "shear profile not conjugate-symmetric");
    return u;
}

}  // namespace torusflux
