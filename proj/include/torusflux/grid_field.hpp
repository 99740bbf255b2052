#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "torusflux/error.hpp"
#include "torusflux/fft.hpp"
#include "torusflux/sparse_field.hpp"
#include "torusflux/wavevector.hpp"

namespace torusflux {

/// Real samples of an N-component field on the uniform n x n grid of the
/// unit torus, component-major; comp[i][j1*n + j2] is the value at
/// x = (j1/n, j2/n).
template <int N>
struct GridData {
    int n = 0;
    std::array<std::vector<double>, N> comp;

    explicit GridData(int n_ = 0) : n(n_) {
        for (auto& c : comp) c.assign(std::size_t(n) * n, 0.0);
    }

    std::size_t size() const { return std::size_t(n) * n; }
};

/// Normalized Fourier coefficients of a real N-component field in FFTW r2c
/// layout: comp[i][k1*(n/2+1) + k2] = f_hat(a1, a2) with a2 = k2 in
/// [0, n/2] and a1 = k1 for k1 <= n/2, else k1 - n. Modes with a2 < 0 are
/// implicit by conjugate symmetry.
template <int N>
struct SpectrumData {
    int n = 0;
    std::array<std::vector<Complex>, N> comp;

    explicit SpectrumData(int n_ = 0) : n(n_) {
        for (auto& c : comp) c.assign(std::size_t(n) * (n / 2 + 1), Complex(0.0, 0.0));
    }

    std::size_t rows() const { return std::size_t(n); }
    std::size_t cols() const { return std::size_t(n / 2 + 1); }
    std::size_t size() const { return rows() * cols(); }

    std::size_t index(int k1, int k2) const { return std::size_t(k1) * cols() + k2; }

    /// First wavevector component encoded by row k1.
    int a1_of(int k1) const { return k1 <= n / 2 ? k1 : k1 - n; }

    /// Plancherel weight of a layout entry: columns 0 < k2 < n/2 stand for
    /// both a2 = +-k2.
    double weight(int k2) const { return (k2 == 0 || 2 * k2 == n) ? 1.0 : 2.0; }

    /// Coefficient at an arbitrary wavevector with |alpha|_inf <= n/2,
    /// resolving a2 < 0 through conjugate symmetry.
    Complex at(Wavevector k, int comp_i) const {
        if (k.norm_inf() > n / 2) return Complex(0.0, 0.0);
        if (k.a2 >= 0) {
            int k1 = k.a1 >= 0 ? k.a1 : k.a1 + n;
            return comp[comp_i][index(k1 % n, k.a2)];
        }
        int k1 = -k.a1 >= 0 ? -k.a1 : -k.a1 + n;
        return std::conj(comp[comp_i][index(k1 % n, -k.a2)]);
    }
};

template <int N>
SpectrumData<N> to_spectrum(const GridData<N>& g) {
    SpectrumData<N> s(g.n);
    for (int i = 0; i < N; ++i) fft::forward(g.n, g.comp[i].data(), s.comp[i].data());
    return s;
}

template <int N>
GridData<N> to_samples(const SpectrumData<N>& s) {
    GridData<N> g(s.n);
    for (int i = 0; i < N; ++i) fft::inverse(s.n, s.comp[i].data(), g.comp[i].data());
    return g;
}

/// Embed an exact sparse field into the r2c layout at resolution n.
/// Requires n >= 2*max_freq + 1 so no distinct modes collide.
template <int N>
SpectrumData<N> embed(const SparseField<N>& f, int n) {
    if (n < 2 * f.max_freq() + 1)
        throw validation_error("resolution-too-small",
                               "n=" + std::to_string(n) + " < 2*max_freq+1=" + std::to_string(2 * f.max_freq() + 1));
    SpectrumData<N> s(n);
    for (const auto& [k, c] : f.coeffs()) {
        if (k.a2 < 0) continue;  // covered by the conjugate of -k
        if (k.a2 == 0 && k.a1 < 0) {
            // column 0 holds both signs of a1 explicitly
            int k1 = k.a1 + n;
            for (int i = 0; i < N; ++i) s.comp[i][s.index(k1, 0)] = c[i];
            continue;
        }
        int k1 = k.a1 >= 0 ? k.a1 : k.a1 + n;
        for (int i = 0; i < N; ++i) s.comp[i][s.index(k1, k.a2)] = c[i];
    }
    return s;
}

template <int N>
GridData<N> to_grid(const SparseField<N>& f, int n) {
    return to_samples(embed(f, n));
}

/// Harvest a sparse field from an r2c spectrum, dropping coefficients with
/// magnitude <= tol. Mirrors each a2 > 0 mode to keep conjugate symmetry
/// explicit in the map.
template <int N>
SparseField<N> to_sparse(const SpectrumData<N>& s, double tol = 0.0) {
    SparseField<N> f;
    int half = s.n / 2;
    for (int k1 = 0; k1 < s.n; ++k1) {
        int a1 = s.a1_of(k1);
        for (int k2 = 0; k2 <= half; ++k2) {
            CoeffVec<N> c{};
            double m = 0.0;
            for (int i = 0; i < N; ++i) {
                c[i] = s.comp[i][s.index(k1, k2)];
                m = std::max(m, std::abs(c[i]));
            }
            if (m <= tol) continue;
            f.set({a1, k2}, c);
            if (k2 > 0 && 2 * k2 != s.n) {
                CoeffVec<N> cc{};
                for (int i = 0; i < N; ++i) cc[i] = std::conj(c[i]);
                f.set({-a1, -k2}, cc);
            }
        }
    }
    return f;
}

/// Uniform-grid quadrature of the L^p norm of the pointwise Euclidean
/// magnitude, (n^{-2} sum |F(x_j)|^p)^{1/p}.
template <int N>
double lp_norm(const GridData<N>& g, double p) {
    if (p < 1.0) throw validation_error("p-out-of-range", "p must be >= 1");
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double m2 = 0.0;
        for (int i = 0; i < N; ++i) m2 += g.comp[i][j] * g.comp[i][j];
        s += std::pow(m2, 0.5 * p);
    }
    return std::pow(s / double(g.size()), 1.0 / p);
}

template <int N>
double linf_norm(const GridData<N>& g) {
    double m2max = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double m2 = 0.0;
        for (int i = 0; i < N; ++i) m2 += g.comp[i][j] * g.comp[i][j];
        m2max = std::max(m2max, m2);
    }
    return std::sqrt(m2max);
}

/// n^{-2} sum_j f(x_j) . g(x_j), the quadrature of the torus integral.
template <int N>
double inner(const GridData<N>& a, const GridData<N>& b) {
    if (a.n != b.n) throw validation_error("grid-mismatch", "inner product of different resolutions");
    double s = 0.0, comp_err = 0.0;  // Kahan
    for (int i = 0; i < N; ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            double term = a.comp[i][j] * b.comp[i][j] - comp_err;
            double t = s + term;
            comp_err = (t - s) - term;
            s = t;
        }
    return s / double(a.size());
}

/// Plancherel L2 norm straight from the half-spectrum.
template <int N>
double l2_norm(const SpectrumData<N>& s) {
    double acc = 0.0;
    int half = s.n / 2;
    for (int k1 = 0; k1 < s.n; ++k1)
        for (int k2 = 0; k2 <= half; ++k2) {
            double w = s.weight(k2);
            for (int i = 0; i < N; ++i) acc += w * std::norm(s.comp[i][s.index(k1, k2)]);
        }
    return std::sqrt(acc);
}

}  // namespace torusflux
