#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "torusflux/error.hpp"
#include "torusflux/field_zoo.hpp"
#include "torusflux/grid_field.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

struct NSEConfig {
    int n = 128;               // grid size per axis
    double nu = 1e-3;          // viscosity, >= 0
    double t_end = 1.0;
    double cfl = 0.4;          // dt <= cfl * dx / ||u||_inf
    double p_exp = 1.5;        // Lebesgue exponent for vorticity diagnostics
    double sample_every = 0.05;
    bool keep_snapshots = false;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;                  // 1/2 ||u||_2^2
    double lp_vorticity = 0.0;            // ||omega||_p
    double enstrophy = 0.0;               // ||omega||_2^2
    double palinstrophy = 0.0;            // ||grad omega||_2^2
    double cumulative_dissipation = 0.0;  // 2 nu int_0^t ||omega||_2^2 ds
};

struct NSETrajectory {
    NSEConfig config;
    double dt = 0.0;
    std::vector<DiagnosticsRecord> records;
    std::vector<std::pair<double, SpectrumData<1>>> snapshots;
};

/// Pseudospectral vorticity solver: 2/3-dealiased Jacobian, velocity from
/// Biot-Savart each evaluation, viscous term integrated exactly per mode
/// (integrating-factor RK4).
class NSESolver {
  public:
    NSESolver(const NSEConfig& cfg, SpectrumData<1> omega0) : cfg_(cfg), omega_(std::move(omega0)) {
        if (omega_.n != cfg.n) throw validation_error("grid-mismatch", "initial data resolution != config n");
        if (cfg.nu < 0.0) throw validation_error("nu-negative", "viscosity must be >= 0");
        if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw validation_error("cfl-out-of-range", "CFL must lie in (0,1]");
        cutoff_ = cfg.n / 3;
        truncate_above(omega_, cutoff_);
        omega_.comp[0][0] = Complex(0.0, 0.0);  // mean-free vorticity
    }

    const SpectrumData<1>& state() const { return omega_; }
    int dealias_cutoff() const { return cutoff_; }

    double max_velocity() const { return linf_norm(to_samples(biot_savart(omega_))); }

    /// Largest stable-by-policy step at the current state.
    double cfl_dt() const {
        double umax = max_velocity();
        if (umax == 0.0) return cfg_.sample_every;
        return cfg_.cfl / (double(cfg_.n) * umax);
    }

    void step(double dt) {
        if (!(dt > 0.0)) throw validation_error("dt-nonpositive", "step needs dt > 0");
        std::vector<double> e1 = viscous_factor(dt), e2 = viscous_factor(0.5 * dt);
        SpectrumData<1> n1 = rhs(omega_);
        SpectrumData<1> s2 = combine(omega_, n1, 0.5 * dt, e2);
        SpectrumData<1> n2 = rhs(s2);
        SpectrumData<1> s3 = combine_shifted(omega_, e2, n2, 0.5 * dt);
        SpectrumData<1> n3 = rhs(s3);
        SpectrumData<1> s4 = combine_k4(omega_, e1, n3, e2, dt);
        SpectrumData<1> n4 = rhs(s4);
        std::size_t m = omega_.comp[0].size();
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc = e1[j] * (omega_.comp[0][j] + (dt / 6.0) * n1.comp[0][j]) +
                          (dt / 3.0) * e2[j] * (n2.comp[0][j] + n3.comp[0][j]) + (dt / 6.0) * n4.comp[0][j];
            omega_.comp[0][j] = acc;
        }
        check_finite();
    }

    DiagnosticsRecord diagnostics(double t, double cum_diss) const {
        DiagnosticsRecord r;
        r.t = t;
        r.enstrophy = 0.0;
        r.palinstrophy = 0.0;
        r.energy = 0.0;
        int half = omega_.n / 2;
        for (int k1 = 0; k1 < omega_.n; ++k1) {
            double a1 = omega_.a1_of(k1);
            for (int k2 = 0; k2 <= half; ++k2) {
                double w = omega_.weight(k2);
                double m2 = std::norm(omega_.comp[0][omega_.index(k1, k2)]);
                if (m2 == 0.0) continue;
                double n2 = a1 * a1 + double(k2) * k2;
                r.enstrophy += w * m2;
                r.palinstrophy += w * two_pi * two_pi * n2 * m2;
                if (n2 > 0.0) r.energy += w * m2 / (2.0 * two_pi * two_pi * n2);
            }
        }
        r.lp_vorticity = lp_norm(to_samples(omega_), cfg_.p_exp);
        r.cumulative_dissipation = cum_diss;
        return r;
    }

    double enstrophy() const {
        double s = 0.0;
        int half = omega_.n / 2;
        for (int k1 = 0; k1 < omega_.n; ++k1)
            for (int k2 = 0; k2 <= half; ++k2)
                s += omega_.weight(k2) * std::norm(omega_.comp[0][omega_.index(k1, k2)]);
        return s;
    }

  private:
    std::vector<double> viscous_factor(double dt) const {
        std::vector<double> e(omega_.comp[0].size(), 1.0);
        if (cfg_.nu == 0.0) return e;
        int half = omega_.n / 2;
        for (int k1 = 0; k1 < omega_.n; ++k1) {
            double a1 = omega_.a1_of(k1);
            for (int k2 = 0; k2 <= half; ++k2) {
                double n2 = a1 * a1 + double(k2) * k2;
                e[omega_.index(k1, k2)] = std::exp(-two_pi * two_pi * cfg_.nu * n2 * dt);
            }
        }
        return e;
    }

    /// N(omega) = -u . grad omega, dealiased.
    SpectrumData<1> rhs(const SpectrumData<1>& w) const {
        SpectrumData<2> u = biot_savart(w);
        GridData<2> ug = to_samples(u);
        GridData<1> d1 = to_samples(derivative(w, 0));
        GridData<1> d2 = to_samples(derivative(w, 1));
        GridData<1> adv(w.n);
        for (std::size_t j = 0; j < adv.size(); ++j)
            adv.comp[0][j] = -(ug.comp[0][j] * d1.comp[0][j] + ug.comp[1][j] * d2.comp[0][j]);
        SpectrumData<1> out = to_spectrum(adv);
        truncate_above(out, cutoff_);
        out.comp[0][0] = Complex(0.0, 0.0);
        return out;
    }

    // E2 * (w + c * k)
    static SpectrumData<1> combine(const SpectrumData<1>& w, const SpectrumData<1>& k, double c,
                                   const std::vector<double>& e2) {
        SpectrumData<1> out(w.n);
        for (std::size_t j = 0; j < out.comp[0].size(); ++j)
            out.comp[0][j] = e2[j] * (w.comp[0][j] + c * k.comp[0][j]);
        return out;
    }

    // E2 * w + c * k
    static SpectrumData<1> combine_shifted(const SpectrumData<1>& w, const std::vector<double>& e2,
                                           const SpectrumData<1>& k, double c) {
        SpectrumData<1> out(w.n);
        for (std::size_t j = 0; j < out.comp[0].size(); ++j)
            out.comp[0][j] = e2[j] * w.comp[0][j] + c * k.comp[0][j];
        return out;
    }

    // E1 * w + c * E2 * k
    static SpectrumData<1> combine_k4(const SpectrumData<1>& w, const std::vector<double>& e1,
                                      const SpectrumData<1>& k, const std::vector<double>& e2, double c) {
        SpectrumData<1> out(w.n);
        for (std::size_t j = 0; j < out.comp[0].size(); ++j)
            out.comp[0][j] = e1[j] * w.comp[0][j] + c * e2[j] * k.comp[0][j];
        return out;
    }

    void check_finite() const {
        for (const Complex& c : omega_.comp[0])
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw numeric_error("nan-detected", "solver state left the finite range");
    }

    NSEConfig cfg_;
    SpectrumData<1> omega_;
    int cutoff_;
};

/// Integrate to t_end with a fixed step chosen from the initial CFL bound,
/// snapping sample times onto step boundaries. Cumulative dissipation is
/// accumulated by per-step trapezoid.
inline NSETrajectory run(const NSEConfig& cfg, const SpectrumData<1>& omega0) {
    NSESolver solver(cfg, omega0);
    NSETrajectory traj;
    traj.config = cfg;
    double dt0 = std::min(solver.cfl_dt(), cfg.sample_every);
    int per_sample = std::max(1, int(std::ceil(cfg.sample_every / dt0)));
    double dt = cfg.sample_every / per_sample;
    traj.dt = dt;
    int samples = std::max(1, int(std::llround(cfg.t_end / cfg.sample_every)));

    double t = 0.0, cum = 0.0, ens_prev = solver.enstrophy();
    traj.records.push_back(solver.diagnostics(0.0, 0.0));
    if (cfg.keep_snapshots) traj.snapshots.emplace_back(0.0, solver.state());
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < per_sample; ++i) {
            if (dt > 4.0 * solver.cfl_dt())
                throw numeric_error("cfl-violation", "velocity grew past the step-size policy");
            solver.step(dt);
            double ens = solver.enstrophy();
            cum += cfg.nu * dt * (ens_prev + ens);  // trapezoid of 2 nu ||omega||^2
            ens_prev = ens;
            t += dt;
        }
        traj.records.push_back(solver.diagnostics(t, cum));
        if (cfg.keep_snapshots) traj.snapshots.emplace_back(t, solver.state());
    }
    return traj;
}

inline NSETrajectory run(const NSEConfig& cfg, const ScalarField& omega0) {
    return run(cfg, embed(omega0, cfg.n));
}

// ----------------------------------------------------------- bound checks

struct BoundMargins {
    // largest observed ratio of each left side to its right side; <= 1 means
    // the inequality held with the slack already applied by the caller
    double max_principle = 0.0;
    double gagliardo_nirenberg = 0.0;
    double enstrophy_bound = 0.0;
    double energy_loss_bound = 0.0;

    double worst() const {
        return std::max({max_principle, gagliardo_nirenberg, enstrophy_bound, energy_loss_bound});
    }
};

/// Ratios left/right for the four vorticity inequalities, maximized over
/// sample times (t > 0 where the bound needs it). A report <= slack means
/// every inequality held within the tolerance.
inline BoundMargins check_bounds(const NSETrajectory& traj, double p) {
    if (!(p >= 1.1 && p <= 1.9)) throw validation_error("p-out-of-range", "bound checks need p in [1.1, 1.9]");
    if (!(traj.config.nu > 0.0)) throw validation_error("nu-nonpositive", "bound checks need nu > 0");
    if (std::abs(traj.config.p_exp - p) > 1e-12)
        throw validation_error("p-mismatch", "trajectory diagnostics were sampled at a different p");
    double nu = traj.config.nu;
    const auto& rec = traj.records;
    double w0p = rec.front().lp_vorticity;
    double c0 = std::pow(w0p, -2.0 * p / (2.0 - p));
    double u0sq = 2.0 * rec.front().energy;
    BoundMargins m;
    for (const auto& r : rec) {
        m.max_principle = std::max(m.max_principle, r.lp_vorticity / w0p);
        double gn_rhs = std::pow(std::sqrt(r.palinstrophy), 1.0 - 0.5 * p) * std::pow(r.lp_vorticity, 0.5 * p);
        if (gn_rhs > 0.0) m.gagliardo_nirenberg = std::max(m.gagliardo_nirenberg, std::sqrt(r.enstrophy) / gn_rhs);
        if (r.t > 0.0) {
            double ens_rhs = std::pow(2.0 * nu * p * c0 * r.t / (2.0 - p), -(2.0 - p) / p);
            m.enstrophy_bound = std::max(m.enstrophy_bound, r.enstrophy / ens_rhs);
            double de = u0sq - 2.0 * r.energy;
            double de_rhs = std::pow(2.0 * nu, 2.0 * (p - 1.0) / p) * std::pow(p * c0 / (2.0 - p), -(2.0 - p) / p) *
                            (p / (2.0 * (p - 1.0))) * std::pow(r.t, 2.0 * (p - 1.0) / p);
            m.energy_loss_bound = std::max(m.energy_loss_bound, de / de_rhs);
        }
    }
    return m;
}

// ---------------------------------------------------------------- sweeps

struct SweepRow {
    double nu = 0.0;
    int ic_cutoff = 0;
    double delta_e = 0.0;       // ||u_0||^2 - ||u(T)||^2
    double eps_nu = 0.0;        // nu int_0^T ||grad u||^2 dt
    double bound_margin = 0.0;  // energy-loss ratio at T
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fit_slope = 0.0;     // log-log slope of delta_e vs nu
    double fit_residual = 0.0;  // rms residual of the fit
};

/// Initial-data policy for sweeps: fixed rough power-law vorticity spectrum,
/// re-truncated per viscosity at Lambda(nu) = min(n/3, c nu^{-1/2}) when
/// roughening, so the discrete data approximates a fixed omega_0 in L^p\L^2.
inline ScalarField sweep_initial_vorticity(const NSEConfig& base, double nu, bool roughen, double spectrum_gamma,
                                           std::uint64_t seed, double lambda_c = 3.0) {
    int cutoff = base.n / 3;
    if (roughen) cutoff = std::min(cutoff, std::max(4, int(std::floor(lambda_c / std::sqrt(nu)))));
    return power_law_vorticity(spectrum_gamma, cutoff, seed);
}

inline SweepResult viscosity_sweep(const NSEConfig& base, const std::vector<double>& nu_list, bool roughen,
                                   double spectrum_gamma = 0.8, std::uint64_t seed = 2026) {
    SweepResult res;
    for (double nu : nu_list) {
        NSEConfig cfg = base;
        cfg.nu = nu;
        ScalarField w0 = sweep_initial_vorticity(base, nu, roughen, spectrum_gamma, seed);
        NSETrajectory traj = run(cfg, w0);
        BoundMargins m = check_bounds(traj, cfg.p_exp);
        SweepRow row;
        row.nu = nu;
        row.ic_cutoff = w0.max_freq();
        row.delta_e = 2.0 * (traj.records.front().energy - traj.records.back().energy);
        row.eps_nu = 0.5 * traj.records.back().cumulative_dissipation;
        row.bound_margin = m.energy_loss_bound;
        res.rows.push_back(row);
    }
    // least-squares slope of log delta_e against log nu
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& r : res.rows) {
        if (r.delta_e <= 0.0) continue;
        double x = std::log(r.nu), y = std::log(r.delta_e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k >= 2) {
        res.fit_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        double a = (sy - res.fit_slope * sx) / k, rss = 0.0;
        for (const auto& r : res.rows) {
            if (r.delta_e <= 0.0) continue;
            double e = std::log(r.delta_e) - (a + res.fit_slope * std::log(r.nu));
            rss += e * e;
        }
        res.fit_residual = std::sqrt(rss / k);
    }
    return res;
}

}  // namespace torusflux
