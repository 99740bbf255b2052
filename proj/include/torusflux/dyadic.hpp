#pragma once

#include <cmath>
#include <vector>

#include "torusflux/grid_field.hpp"
#include "torusflux/lp_profile.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

/// q >= 0 with lambda_q = 2^q.
struct DyadicIndex {
    int q = 0;

    double lambda() const { return std::ldexp(1.0, q); }
};

inline int default_q_max(int max_freq) {
    return max_freq <= 0 ? 0 : int(std::floor(std::log2(double(max_freq)))) + 1;
}

/// S_q: coefficientwise chi(|alpha|/lambda_q); mean mode kept (chi(0)=1).
template <int N>
SparseField<N> truncate(const SparseField<N>& f, DyadicIndex q, const LPProfile& prof) {
    double lam = q.lambda();
    return apply_radial(f, [&](double r) { return prof.chi(r / lam); });
}

/// Delta_q: coefficientwise phi(|alpha|/lambda_q).
template <int N>
SparseField<N> lp_block(const SparseField<N>& f, DyadicIndex q, const LPProfile& prof) {
    if (q.q < 0) throw validation_error("q-negative", "Littlewood-Paley blocks need q >= 0");
    double lam = q.lambda();
    return apply_radial(f, [&](double r) { return prof.phi(r / lam); });
}

template <int N>
void truncate_inplace(SpectrumData<N>& s, DyadicIndex q, const LPProfile& prof) {
    double lam = q.lambda();
    apply_radial_inplace(s, [&](double r) { return prof.chi(r / lam); });
}

template <int N>
void lp_block_inplace(SpectrumData<N>& s, DyadicIndex q, const LPProfile& prof) {
    if (q.q < 0) throw validation_error("q-negative", "Littlewood-Paley blocks need q >= 0");
    double lam = q.lambda();
    apply_radial_inplace(s, [&](double r) { return prof.phi(r / lam); });
}

struct BesovReport {
    double value = 0.0;          // sup_q lambda_q^s ||Delta_q F||_p
    std::vector<double> per_q;   // indexed by q = 0..q_max
};

/// Besov seminorm estimate via grid quadrature of each block's L^p norm.
/// n = 0 picks the smallest resolving grid.
template <int N>
BesovReport besov_seminorm(const SparseField<N>& f, double s, double p, int q_max, const LPProfile& prof,
                           int n = 0) {
    if (p < 1.0) throw validation_error("p-out-of-range", "p must be >= 1");
    BesovReport rep;
    for (int q = 0; q <= q_max; ++q) {
        SparseField<N> blk = lp_block(f, DyadicIndex{q}, prof);
        // integer frequency dilation preserves L^p norms; reducing by the
        // gcd keeps the sampling grid small for sparse high-frequency blocks
        blk = reduce_frequencies(blk, frequency_gcd(blk));
        int nq = n != 0 ? n : std::max(64, 1 << int(std::ceil(std::log2(2.0 * blk.max_freq() + 2.0))));
        double norm = blk.empty() ? 0.0 : lp_norm(to_grid(blk, nq), p);
        double v = std::pow(std::ldexp(1.0, q), s) * norm;
        rep.per_q.push_back(v);
        rep.value = std::max(rep.value, v);
    }
    return rep;
}

}  // namespace torusflux
