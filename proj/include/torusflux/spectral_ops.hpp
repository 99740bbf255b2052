#pragma once

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "torusflux/error.hpp"
#include "torusflux/grid_field.hpp"
#include "torusflux/sparse_field.hpp"

namespace torusflux {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- sparse ops

/// (I - alpha alpha^T / |alpha|^2) per mode; mean mode untouched.
inline VelocityField leray_project(const VelocityField& u) {
    VelocityField out;
    for (const auto& [k, c] : u.coeffs()) {
        if (k.is_zero()) {
            out.set(k, c);
            continue;
        }
        double n2 = k.norm_sq();
        Complex dot = (double(k.a1) * c[0] + double(k.a2) * c[1]) / n2;
        out.set(k, {c[0] - dot * double(k.a1), c[1] - dot * double(k.a2)});
    }
    return out;
}

/// omega = d1 u2 - d2 u1, per mode 2 pi i (a1 u2 - a2 u1).
inline ScalarField curl(const VelocityField& u) {
    ScalarField w;
    for (const auto& [k, c] : u.coeffs()) {
        Complex v = Complex(0.0, two_pi) * (double(k.a1) * c[1] - double(k.a2) * c[0]);
        if (v != Complex(0.0, 0.0)) w.set(k, {v});
    }
    return w;
}

/// Divergence-free mean-zero u with curl(u) = omega:
/// u_hat = i (a2, -a1) omega_hat / (2 pi |alpha|^2).
inline VelocityField biot_savart(const ScalarField& omega) {
    if (std::abs(omega.mean_mode()[0]) > 1e-14 * (1.0 + omega.linf_coeff()))
        throw validation_error("nonzero-mean-vorticity", "Biot-Savart needs a mean-zero vorticity");
    VelocityField u;
    for (const auto& [k, c] : omega.coeffs()) {
        if (k.is_zero()) continue;
        Complex f = Complex(0.0, 1.0) * c[0] / (two_pi * k.norm_sq());
        u.set(k, {f * double(k.a2), -f * double(k.a1)});
    }
    return u;
}

/// Componentwise partial derivative d/dx_j, 2 pi i alpha_j per mode.
template <int N>
SparseField<N> derivative(const SparseField<N>& f, int j) {
    SparseField<N> out;
    for (const auto& [k, c] : f.coeffs()) {
        double a = j == 0 ? double(k.a1) : double(k.a2);
        if (a == 0.0) continue;
        CoeffVec<N> d{};
        for (int i = 0; i < N; ++i) d[i] = Complex(0.0, two_pi * a) * c[i];
        out.set(k, d);
    }
    return out;
}

/// Exact spectral convolution of two sparse fields, combined entrywise by
/// the caller: out(alpha) += combine(a(beta), b(gamma)) over beta+gamma=alpha.
template <int NA, int NB, int NO, class Combine>
SparseField<NO> convolve(const SparseField<NA>& a, const SparseField<NB>& b, Combine combine) {
    SparseField<NO> out;
    std::unordered_map<Wavevector, CoeffVec<NO>, WavevectorHash> acc;
    acc.reserve(a.mode_count() * 4);
    for (const auto& [ka, ca] : a.coeffs())
        for (const auto& [kb, cb] : b.coeffs()) {
            CoeffVec<NO> v = combine(ka, ca, kb, cb);
            auto& slot = acc[ka + kb];
            for (int i = 0; i < NO; ++i) slot[i] += v[i];
        }
    for (const auto& [k, c] : acc) out.add(k, c);
    out.drop_below(0.0);
    return out;
}

/// Symmetric tensor u (x) u as (T11, T12, T22) coefficients.
inline SparseField<3> tensor_product(const VelocityField& u) {
    return convolve<2, 2, 3>(u, u, [](Wavevector, const CoeffVec<2>& a, Wavevector, const CoeffVec<2>& b) {
        return CoeffVec<3>{a[0] * b[0], 0.5 * (a[0] * b[1] + a[1] * b[0]), a[1] * b[1]};
    });
}

/// (u.grad)u by exact convolution, via div(u (x) u) for divergence-free u.
inline VelocityField nonlinear_term(const VelocityField& u) {
    if (!is_divergence_free(u, 1e-10)) throw validation_error("not-divergence-free", "nonlinear term needs div u = 0");
    SparseField<3> t = tensor_product(u);
    VelocityField out;
    for (const auto& [k, c] : t.coeffs()) {
        Complex d1 = Complex(0.0, two_pi) * (double(k.a1) * c[0] + double(k.a2) * c[1]);
        Complex d2 = Complex(0.0, two_pi) * (double(k.a1) * c[1] + double(k.a2) * c[2]);
        if (d1 != Complex(0.0, 0.0) || d2 != Complex(0.0, 0.0)) out.set(k, {d1, d2});
    }
    return out;
}

/// Solve -Lap p = div div(u (x) u) exactly on sparse data; mean zero.
inline ScalarField pressure_solve(const VelocityField& u) {
    SparseField<3> t = tensor_product(u);
    ScalarField p;
    for (const auto& [k, c] : t.coeffs()) {
        if (k.is_zero()) continue;
        double a1 = k.a1, a2 = k.a2;
        Complex quad = a1 * a1 * c[0] + 2.0 * a1 * a2 * c[1] + a2 * a2 * c[2];
        p.add(k, {-quad / k.norm_sq()});
    }
    p.drop_below(0.0);
    return p;
}

/// Multiply every coefficient by m(|alpha|); mean mode gets m(0).
template <int N, class Multiplier>
SparseField<N> apply_radial(const SparseField<N>& f, Multiplier m) {
    SparseField<N> out;
    for (const auto& [k, c] : f.coeffs()) {
        double w = m(k.norm());
        if (w == 0.0) continue;
        CoeffVec<N> v{};
        for (int i = 0; i < N; ++i) v[i] = w * c[i];
        out.set(k, v);
    }
    return out;
}

// ------------------------------------------------------------- spectrum ops

template <int N, class Multiplier>
void apply_radial_inplace(SpectrumData<N>& s, Multiplier m) {
    int half = s.n / 2;
    for (int k1 = 0; k1 < s.n; ++k1) {
        double a1 = s.a1_of(k1);
        for (int k2 = 0; k2 <= half; ++k2) {
            double w = m(std::hypot(a1, double(k2)));
            for (int i = 0; i < N; ++i) s.comp[i][s.index(k1, k2)] *= w;
        }
    }
}

/// Zero all modes with |alpha|_inf > cutoff (2/3-rule uses cutoff = n/3).
template <int N>
void truncate_above(SpectrumData<N>& s, int cutoff) {
    int half = s.n / 2;
    for (int k1 = 0; k1 < s.n; ++k1) {
        int a1 = s.a1_of(k1);
        for (int k2 = 0; k2 <= half; ++k2) {
            if (std::abs(a1) <= cutoff && k2 <= cutoff) continue;
            for (int i = 0; i < N; ++i) s.comp[i][s.index(k1, k2)] = Complex(0.0, 0.0);
        }
    }
}

inline void leray_project_inplace(SpectrumData<2>& s) {
    int half = s.n / 2;
    for (int k1 = 0; k1 < s.n; ++k1) {
        double a1 = s.a1_of(k1);
        for (int k2 = 0; k2 <= half; ++k2) {
            if (a1 == 0.0 && k2 == 0) continue;
            std::size_t j = s.index(k1, k2);
            double a2 = k2, n2 = a1 * a1 + a2 * a2;
            Complex dot = (a1 * s.comp[0][j] + a2 * s.comp[1][j]) / n2;
            s.comp[0][j] -= dot * a1;
            s.comp[1][j] -= dot * a2;
        }
    }
}

inline SpectrumData<1> curl(const SpectrumData<2>& u) {
    SpectrumData<1> w(u.n);
    int half = u.n / 2;
    for (int k1 = 0; k1 < u.n; ++k1) {
        int a1i = u.a1_of(k1);
        // the Nyquist row has no sign-unambiguous derivative; our fields are
        // dealiased below it, so drop it rather than break realness
        if (2 * std::abs(a1i) == u.n) continue;
        double a1 = a1i;
        for (int k2 = 0; k2 <= half; ++k2) {
            if (2 * k2 == u.n) continue;
            std::size_t j = u.index(k1, k2);
            w.comp[0][j] = Complex(0.0, two_pi) * (a1 * u.comp[1][j] - double(k2) * u.comp[0][j]);
        }
    }
    return w;
}

inline SpectrumData<2> biot_savart(const SpectrumData<1>& omega) {
    std::size_t j0 = 0;
    if (std::abs(omega.comp[0][j0]) > 1e-12)
        throw validation_error("nonzero-mean-vorticity", "Biot-Savart needs a mean-zero vorticity");
    SpectrumData<2> u(omega.n);
    int half = omega.n / 2;
    for (int k1 = 0; k1 < omega.n; ++k1) {
        int a1i = omega.a1_of(k1);
        if (2 * std::abs(a1i) == omega.n) continue;
        double a1 = a1i;
        for (int k2 = 0; k2 <= half; ++k2) {
            if ((a1i == 0 && k2 == 0) || 2 * k2 == omega.n) continue;
            std::size_t j = omega.index(k1, k2);
            double a2 = k2, n2 = a1 * a1 + a2 * a2;
            Complex f = Complex(0.0, 1.0) * omega.comp[0][j] / (two_pi * n2);
            u.comp[0][j] = f * a2;
            u.comp[1][j] = -f * a1;
        }
    }
    return u;
}

template <int N>
SpectrumData<N> derivative(const SpectrumData<N>& f, int axis) {
    SpectrumData<N> out(f.n);
    int half = f.n / 2;
    for (int k1 = 0; k1 < f.n; ++k1) {
        int a1i = f.a1_of(k1);
        if (2 * std::abs(a1i) == f.n) continue;
        for (int k2 = 0; k2 <= half; ++k2) {
            if (2 * k2 == f.n) continue;
            double a = axis == 0 ? double(a1i) : double(k2);
            std::size_t j = f.index(k1, k2);
            for (int i = 0; i < N; ++i) out.comp[i][j] = Complex(0.0, two_pi * a) * f.comp[i][j];
        }
    }
    return out;
}

/// Pseudospectral (u.grad)u. dealias_cutoff > 0 applies the sharp |alpha|_inf
/// cutoff to inputs and output (2/3 rule when cutoff = n/3); 0 means the
/// caller guarantees n resolves the full product.
inline SpectrumData<2> nonlinear_term(const SpectrumData<2>& u_in, int dealias_cutoff = 0) {
    SpectrumData<2> u = u_in;
    if (dealias_cutoff > 0) truncate_above(u, dealias_cutoff);
    GridData<2> ug = to_samples(u);
    GridData<2> d1 = to_samples(derivative(u, 0));
    GridData<2> d2 = to_samples(derivative(u, 1));
    GridData<2> out(u.n);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out.comp[0][j] = ug.comp[0][j] * d1.comp[0][j] + ug.comp[1][j] * d2.comp[0][j];
        out.comp[1][j] = ug.comp[0][j] * d1.comp[1][j] + ug.comp[1][j] * d2.comp[1][j];
    }
    SpectrumData<2> res = to_spectrum(out);
    if (dealias_cutoff > 0) truncate_above(res, dealias_cutoff);
    return res;
}

/// Grid pressure solve from -Lap p = div div(u (x) u); products must be
/// resolved or dealiased by the caller's choice of n.
inline SpectrumData<1> pressure_solve(const SpectrumData<2>& u, int dealias_cutoff = 0) {
    GridData<2> ug = to_samples(u);
    GridData<1> t11(u.n), t12(u.n), t22(u.n);
    for (std::size_t j = 0; j < ug.size(); ++j) {
        t11.comp[0][j] = ug.comp[0][j] * ug.comp[0][j];
        t12.comp[0][j] = ug.comp[0][j] * ug.comp[1][j];
        t22.comp[0][j] = ug.comp[1][j] * ug.comp[1][j];
    }
    SpectrumData<1> h11 = to_spectrum(t11), h12 = to_spectrum(t12), h22 = to_spectrum(t22);
    SpectrumData<1> p(u.n);
    int half = u.n / 2;
    for (int k1 = 0; k1 < u.n; ++k1) {
        double a1 = u.a1_of(k1);
        for (int k2 = 0; k2 <= half; ++k2) {
            if (a1 == 0.0 && k2 == 0) continue;
            std::size_t j = p.index(k1, k2);
            double a2 = k2, n2 = a1 * a1 + a2 * a2;
            Complex quad = a1 * a1 * h11.comp[0][j] + 2.0 * a1 * a2 * h12.comp[0][j] + a2 * a2 * h22.comp[0][j];
            p.comp[0][j] = -quad / n2;
        }
    }
    if (dealias_cutoff > 0) truncate_above(p, dealias_cutoff);
    return p;
}

}  // namespace torusflux
