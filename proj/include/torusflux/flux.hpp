#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "torusflux/dyadic.hpp"
#include "torusflux/field_zoo.hpp"
#include "torusflux/grid_field.hpp"
#include "torusflux/lp_profile.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

enum class FluxMethod { SparseExact, Grid, Blocks };

inline const char* to_string(FluxMethod m) {
    switch (m) {
        case FluxMethod::SparseExact: return "sparse-exact";
        case FluxMethod::Grid: return "grid";
        case FluxMethod::Blocks: return "blocks";
    }
    return "?";
}

struct FluxRecord {
    int q = 0;
    double value = 0.0;  // tensor form, int S_q[u (x) u] : grad S_q[u] dx
    FluxMethod method = FluxMethod::SparseExact;
    int resolution = 0;  // grid size, or mode count for exact methods
    double wall_time_ms = 0.0;
};

namespace detail {

struct KahanSum {
    double s = 0.0, c = 0.0;

    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

/// chi(alpha)^2 T_ij(alpha) conj(2 pi i alpha_j u_i(alpha)) for one mode.
inline double flux_term(Wavevector k, const CoeffVec<2>& u, const Complex t[2][2], double chi) {
    if (chi == 0.0) return 0.0;
    Complex acc(0.0, 0.0);
    double a[2] = {double(k.a1), double(k.a2)};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc += t[i][j] * std::conj(Complex(0.0, two_pi * a[j]) * u[i]);
    return chi * chi * acc.real();
}

}  // namespace detail

/// Exact tensor-form flux by sparse convolution:
/// Pi_q = sum_alpha chi_q(alpha)^2 (u(x)u)^(alpha) : conj(2 pi i alpha (x) u(alpha)),
/// summed with compensated accumulation. O(modes^2).
inline double flux_sparse(const VelocityField& u, int q, const LPProfile& prof,
                          const SparseField<3>* tensor = nullptr) {
    SparseField<3> local;
    if (!tensor) {
        local = tensor_product(u);
        tensor = &local;
    }
    double lam = std::ldexp(1.0, q);
    detail::KahanSum sum;
    for (const auto& [k, c] : u.coeffs()) {
        double chi = prof.chi(k.norm() / lam);
        if (chi == 0.0) continue;
        CoeffVec<3> t3 = tensor->at(k);
        Complex t[2][2] = {{t3[0], t3[1]}, {t3[1], t3[2]}};
        sum.add(detail::flux_term(k, c, t, chi));
    }
    return sum.s;
}

/// Velocity-form integral int S_q[u] . S_q[(u.grad)u] dx, exact sparse.
/// Integration by parts gives int S_q[u(x)u] : grad S_q[u] = -(this value);
/// the flux convention reported everywhere is the tensor form.
inline double flux_velocity_integral(const VelocityField& u, int q, const LPProfile& prof) {
    VelocityField nl = nonlinear_term(u);
    double lam = std::ldexp(1.0, q);
    detail::KahanSum sum;
    for (const auto& [k, c] : u.coeffs()) {
        double chi = prof.chi(k.norm() / lam);
        if (chi == 0.0) continue;
        CoeffVec<2> n = nl.at(k);
        sum.add(chi * chi * (c[0] * std::conj(n[0]) + c[1] * std::conj(n[1])).real());
    }
    return sum.s;
}

/// Grid tensor-form flux: u (x) u formed pointwise on the n-grid, transformed,
/// and contracted in the half-spectrum. Requires n to resolve the full
/// product (no dealiasing is applied).
inline double flux_grid(const VelocityField& u, int q, const LPProfile& prof, int n) {
    if (n < 4 * u.max_freq()) throw validation_error("aliasing-risk", "grid flux needs n >= 4*max_freq");
    SpectrumData<2> us = embed(u, n);
    GridData<2> ug = to_samples(us);
    double lam = std::ldexp(1.0, q);
    detail::KahanSum sum;
    GridData<1> t(n);
    // stream one tensor component at a time to bound memory at large n
    const int pairs[3][2] = {{0, 0}, {0, 1}, {1, 1}};
    for (const auto& pr : pairs) {
        int i = pr[0], j = pr[1];
        for (std::size_t m = 0; m < t.size(); ++m) t.comp[0][m] = ug.comp[i][m] * ug.comp[j][m];
        SpectrumData<1> ts = to_spectrum(t);
        int half = n / 2;
        for (int k1 = 0; k1 < n; ++k1) {
            double a1 = ts.a1_of(k1);
            for (int k2 = 0; k2 <= half; ++k2) {
                double chi = prof.chi(std::hypot(a1, double(k2)) / lam);
                if (chi == 0.0) continue;
                std::size_t m = ts.index(k1, k2);
                Complex tij = ts.comp[0][m];
                double a[2] = {a1, double(k2)};
                // T_ij contracts with d_j u_i; the off-diagonal component
                // serves both (i,j) = (0,1) and (1,0)
                Complex acc = tij * std::conj(Complex(0.0, two_pi * a[j]) * us.comp[i][m]);
                if (i != j) acc += tij * std::conj(Complex(0.0, two_pi * a[i]) * us.comp[j][m]);
                sum.add(ts.weight(k2) * chi * chi * acc.real());
            }
        }
    }
    return sum.s;
}

/// Exact tensor-form flux for block-structured fields. (u(x)u)^ is assembled
/// on each block of u that the cutoff can see, as a sum of zero-padded FFT
/// convolutions over ordered block pairs whose carrier sum reaches it.
inline double flux_blocks(const BlockField& f, int q, const LPProfile& prof) {
    double lam = std::ldexp(1.0, q);
    // targets: blocks containing at least one mode with chi > 0
    std::vector<std::size_t> targets;
    for (std::size_t t = 0; t < f.blocks.size(); ++t) {
        const Block& b = f.blocks[t];
        double rmin = std::max(0.0, b.carrier.norm() - std::numbers::sqrt2 * b.h);
        if (prof.chi(rmin / lam) > 0.0) targets.push_back(t);
    }
    if (targets.empty()) return 0.0;

    // T[t][i][j] over the target block's box
    std::vector<std::array<std::array<std::vector<Complex>, 2>, 2>> tens(targets.size());
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        std::size_t sz = f.blocks[targets[ti]].data.size();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) tens[ti][i][j].assign(sz, Complex(0.0, 0.0));
    }

    for (const Block& a : f.blocks)
        for (const Block& b : f.blocks) {
            Wavevector cs = a.carrier + b.carrier;
            int hs = a.h + b.h;
            // which targets does the convolution box reach?
            std::vector<std::size_t> hit;
            for (std::size_t ti = 0; ti < targets.size(); ++ti) {
                const Block& tb = f.blocks[targets[ti]];
                if (std::abs(cs.a1 - tb.carrier.a1) <= hs + tb.h && std::abs(cs.a2 - tb.carrier.a2) <= hs + tb.h)
                    hit.push_back(ti);
            }
            if (hit.empty()) continue;

            int L = fft::next_fast_size(2 * hs + 1);
            std::array<std::vector<Complex>, 2> fa, fb;
            auto load = [&](const Block& blk, std::array<std::vector<Complex>, 2>& out) {
                for (int i = 0; i < 2; ++i) {
                    out[i].assign(std::size_t(L) * L, Complex(0.0, 0.0));
                    for (int b1 = -blk.h; b1 <= blk.h; ++b1)
                        for (int b2 = -blk.h; b2 <= blk.h; ++b2)
                            out[i][std::size_t(b1 + blk.h) * L + (b2 + blk.h)] = blk.data[blk.index(b1, b2)][i];
                    fft::c2c_inplace(L, FFTW_FORWARD, out[i].data());
                }
            };
            load(a, fa);
            load(b, fb);
            double norm = 1.0 / (double(L) * L);
            std::vector<Complex> conv(std::size_t(L) * L);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    for (std::size_t m = 0; m < conv.size(); ++m) conv[m] = fa[i][m] * fb[j][m] * norm;
                    fft::c2c_inplace(L, FFTW_BACKWARD, conv.data());
                    // conv index (p1,p2) is the coefficient at cs + (p1-hs, p2-hs)
                    for (std::size_t ti : hit) {
                        const Block& tb = f.blocks[targets[ti]];
                        int d1 = tb.carrier.a1 - cs.a1 + hs, d2 = tb.carrier.a2 - cs.a2 + hs;
                        int p1_lo = std::max(0, d1 - tb.h), p1_hi = std::min(2 * hs, d1 + tb.h);
                        int p2_lo = std::max(0, d2 - tb.h), p2_hi = std::min(2 * hs, d2 + tb.h);
                        for (int p1 = p1_lo; p1 <= p1_hi; ++p1)
                            for (int p2 = p2_lo; p2 <= p2_hi; ++p2)
                                tens[ti][i][j][tb.index(p1 - d1, p2 - d2)] += conv[std::size_t(p1) * L + p2];
                    }
                }
        }

    detail::KahanSum sum;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const Block& tb = f.blocks[targets[ti]];
        for (int b1 = -tb.h; b1 <= tb.h; ++b1)
            for (int b2 = -tb.h; b2 <= tb.h; ++b2) {
                Wavevector k = tb.carrier + Wavevector{b1, b2};
                double chi = prof.chi(k.norm() / lam);
                if (chi == 0.0) continue;
                std::size_t m = tb.index(b1, b2);
                Complex t[2][2] = {{tens[ti][0][0][m], tens[ti][0][1][m]},
                                   {tens[ti][1][0][m], tens[ti][1][1][m]}};
                sum.add(detail::flux_term(k, tb.data[m], t, chi));
            }
    }
    return sum.s;
}

/// | int S_q[u] . (S_q[u].grad) S_q[u] dx |, exact sparse evaluation.
inline double trilinear_check(const VelocityField& u, int q, const LPProfile& prof) {
    VelocityField w = truncate(u, DyadicIndex{q}, prof);
    if (w.empty()) return 0.0;
    VelocityField nl = nonlinear_term(w);
    detail::KahanSum sum;
    for (const auto& [k, c] : w.coeffs()) {
        CoeffVec<2> n = nl.at(k);
        sum.add((c[0] * std::conj(n[0]) + c[1] * std::conj(n[1])).real());
    }
    return std::abs(sum.s);
}

inline FluxRecord flux(const VelocityField& u, int q, const LPProfile& prof,
                       FluxMethod method = FluxMethod::SparseExact, int n = 0) {
    if (!is_divergence_free(u, 1e-10)) throw validation_error("not-divergence-free", "flux needs div u = 0");
    auto t0 = std::chrono::steady_clock::now();
    FluxRecord rec;
    rec.q = q;
    rec.method = method;
    if (method == FluxMethod::Grid) {
        if (n == 0) n = fft::next_fast_size(4 * u.max_freq() + 2);
        rec.value = flux_grid(u, q, prof, n);
        rec.resolution = n;
    } else {
        rec.value = flux_sparse(u, q, prof);
        rec.resolution = int(u.mode_count());
    }
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

/// Per-q records over [q_lo, q_hi]; shares one exact tensor across scales.
inline std::vector<FluxRecord> flux_profile(const VelocityField& u, int q_lo, int q_hi, const LPProfile& prof) {
    if (!is_divergence_free(u, 1e-10)) throw validation_error("not-divergence-free", "flux needs div u = 0");
    SparseField<3> tensor = tensor_product(u);
    std::vector<FluxRecord> out;
    for (int q = q_lo; q <= q_hi; ++q) {
        auto t0 = std::chrono::steady_clock::now();
        FluxRecord rec;
        rec.q = q;
        rec.method = FluxMethod::SparseExact;
        rec.value = flux_sparse(u, q, prof, &tensor);
        rec.resolution = int(u.mode_count());
        rec.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(rec);
    }
    return out;
}

/// max |Pi_q| over the top half of the q range versus the overall max.
struct FluxDecaySummary {
    double overall_max = 0.0;
    double top_half_max = 0.0;
};

inline FluxDecaySummary flux_decay_summary(const std::vector<FluxRecord>& recs) {
    FluxDecaySummary s;
    if (recs.empty()) return s;
    int q_lo = recs.front().q, q_hi = recs.back().q;
    int mid = q_lo + (q_hi - q_lo) / 2;
    for (const auto& r : recs) {
        s.overall_max = std::max(s.overall_max, std::abs(r.value));
        if (r.q > mid) s.top_half_max = std::max(s.top_half_max, std::abs(r.value));
    }
    return s;
}

}  // namespace torusflux
