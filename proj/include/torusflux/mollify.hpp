#pragma once

#include <cmath>
#include <vector>

#include "torusflux/error.hpp"
#include "torusflux/grid_field.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

/// Fourier multiplier of the default mollifier at scale eps: a Gaussian
/// exp(-(pi eps |alpha|)^2). Unit mass (value 1 at alpha = 0), real, even,
/// bounded by 1, -> 1 pointwise as eps -> 0.
inline double mollifier_multiplier(double eps, double r) {
    double x = std::numbers::pi * eps * r;
    return std::exp(-x * x);
}

inline void check_mollifier_eps(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw validation_error("eps-out-of-range", "mollifier eps must lie in (0, 1/2)");
}

template <int N>
SparseField<N> mollify(const SparseField<N>& f, double eps) {
    check_mollifier_eps(eps);
    return apply_radial(f, [eps](double r) { return mollifier_multiplier(eps, r); });
}

template <int N>
void mollify_inplace(SpectrumData<N>& s, double eps) {
    check_mollifier_eps(eps);
    apply_radial_inplace(s, [eps](double r) { return mollifier_multiplier(eps, r); });
}

/// Reynolds stress R^eps = (u^eps . grad) u^eps - zeta_eps * [(u.grad)u],
/// exact on sparse data.
inline VelocityField reynolds_stress(const VelocityField& u, double eps) {
    VelocityField ue = mollify(u, eps);
    VelocityField a = nonlinear_term(ue);
    VelocityField b = mollify(nonlinear_term(u), eps);
    VelocityField r;
    for (const auto& [k, c] : a.coeffs()) r.add(k, c);
    for (const auto& [k, c] : b.coeffs()) r.add(k, {-c[0], -c[1]});
    r.drop_below(0.0);
    return r;
}

struct ConvergenceRow {
    double eps = 0.0;
    int resolution = 0;
    double du_l3 = 0.0;        // ||u^eps - u||_3
    double du_l6 = 0.0;        // ||u^eps - u||_6
    double dusq_l65 = 0.0;     // || |u^eps|^2 - |u|^2 ||_{6/5}
    double dp_l3 = 0.0;        // ||p^eps - p||_3
    double stress_l65 = 0.0;   // ||R^eps||_{6/5}
    double ur_l1 = 0.0;        // int |u^eps . R^eps| dx
};

/// Per-eps convergence diagnostics; n = 0 picks a grid resolving the
/// quadratic products.
inline std::vector<ConvergenceRow> convergence_report(const VelocityField& u, const std::vector<double>& eps_list,
                                                      int n = 0) {
    if (!is_divergence_free(u, 1e-10))
        throw validation_error("not-divergence-free", "convergence report needs div u = 0");
    if (n == 0) n = fft::next_fast_size(4 * u.max_freq() + 2);
    GridData<2> ug = to_grid(u, n);
    ScalarField p = pressure_solve(u);
    GridData<1> pg = to_grid(p, n);
    std::vector<ConvergenceRow> rows;
    for (double eps : eps_list) {
        ConvergenceRow row;
        row.eps = eps;
        row.resolution = n;
        VelocityField ue = mollify(u, eps);
        GridData<2> ueg = to_grid(ue, n);
        GridData<2> du(n);
        for (int i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < du.size(); ++j) du.comp[i][j] = ueg.comp[i][j] - ug.comp[i][j];
        row.du_l3 = lp_norm(du, 3.0);
        row.du_l6 = lp_norm(du, 6.0);
        GridData<1> dsq(n);
        for (std::size_t j = 0; j < dsq.size(); ++j) {
            double e2 = ueg.comp[0][j] * ueg.comp[0][j] + ueg.comp[1][j] * ueg.comp[1][j];
            double f2 = ug.comp[0][j] * ug.comp[0][j] + ug.comp[1][j] * ug.comp[1][j];
            dsq.comp[0][j] = e2 - f2;
        }
        row.dusq_l65 = lp_norm(dsq, 1.2);
        GridData<1> dp = to_grid(mollify(p, eps), n);
        for (std::size_t j = 0; j < dp.size(); ++j) dp.comp[0][j] -= pg.comp[0][j];
        row.dp_l3 = lp_norm(dp, 3.0);
        VelocityField stress = reynolds_stress(u, eps);
        int nr = std::max(n, fft::next_fast_size(2 * stress.max_freq() + 2));
        GridData<2> rg = to_grid(stress, nr);
        row.stress_l65 = lp_norm(rg, 1.2);
        GridData<2> uer = to_grid(ue, nr);
        GridData<1> ur(nr);
        for (std::size_t j = 0; j < ur.size(); ++j)
            ur.comp[0][j] = uer.comp[0][j] * rg.comp[0][j] + uer.comp[1][j] * rg.comp[1][j];
        row.ur_l1 = lp_norm(ur, 1.0);
        rows.push_back(row);
    }
    return rows;
}

/// L1 residual, relative to the participating term norms, of the steady
/// local energy balance
///   div[u^eps (|u^eps|^2/2 + p^eps)] = u^eps . R^eps
///                                      + u^eps . zeta_eps*[(u.grad)u + grad p].
/// The forcing-like last term is the mollified Leray complement of the
/// momentum balance; it vanishes identically when u solves steady Euler.
inline double energy_balance_residual(const VelocityField& u, double eps, int n = 0) {
    if (!is_divergence_free(u, 1e-10))
        throw validation_error("not-divergence-free", "energy balance needs div u = 0");
    // the transported quantity is cubic in u; the grid must resolve it
    if (n == 0) n = fft::next_fast_size(6 * u.max_freq() + 2);
    if (n < 6 * u.max_freq() + 1) throw validation_error("aliasing-risk", "energy balance needs n >= 6*max_freq+1");
    VelocityField ue = mollify(u, eps);
    ScalarField p = pressure_solve(u);
    ScalarField pe = mollify(p, eps);
    GridData<2> ueg = to_grid(ue, n);
    GridData<1> peg = to_grid(pe, n);

    // LHS: spectral divergence of the pointwise energy current
    GridData<2> cur(n);
    for (std::size_t j = 0; j < cur.size(); ++j) {
        double head = 0.5 * (ueg.comp[0][j] * ueg.comp[0][j] + ueg.comp[1][j] * ueg.comp[1][j]) + peg.comp[0][j];
        cur.comp[0][j] = ueg.comp[0][j] * head;
        cur.comp[1][j] = ueg.comp[1][j] * head;
    }
    SpectrumData<2> cs = to_spectrum(cur);
    SpectrumData<1> div(n);
    {
        SpectrumData<2> d1 = derivative(cs, 0);
        SpectrumData<2> d2 = derivative(cs, 1);
        for (std::size_t j = 0; j < div.comp[0].size(); ++j) div.comp[0][j] = d1.comp[0][j] + d2.comp[1][j];
    }
    GridData<1> lhs = to_samples(div);

    // RHS terms
    VelocityField stress = reynolds_stress(u, eps);
    GridData<2> rg = to_grid(stress, n);
    VelocityField force = nonlinear_term(u);
    ScalarField dp1 = derivative(p, 0), dp2 = derivative(p, 1);
    for (const auto& [k, c] : dp1.coeffs()) force.add(k, {c[0], 0.0});
    for (const auto& [k, c] : dp2.coeffs()) force.add(k, {0.0, c[0]});
    GridData<2> fg = to_grid(mollify(force, eps), n);
    GridData<1> rhs(n), resid(n);
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        rhs.comp[0][j] = ueg.comp[0][j] * (rg.comp[0][j] + fg.comp[0][j]) +
                         ueg.comp[1][j] * (rg.comp[1][j] + fg.comp[1][j]);
        resid.comp[0][j] = lhs.comp[0][j] - rhs.comp[0][j];
    }
    double scale = std::max({lp_norm(lhs, 1.0), lp_norm(rhs, 1.0), 1e-300});
    return lp_norm(resid, 1.0) / scale;
}

}  // namespace torusflux
