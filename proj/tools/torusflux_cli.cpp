// torusflux command-line front end: field construction, flux analysis,
// Littlewood-Paley and mollification diagnostics, Navier-Stokes runs.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "torusflux/csv.hpp"
#include "torusflux/dyadic.hpp"
#include "torusflux/field_zoo.hpp"
#include "torusflux/flux.hpp"
#include "torusflux/manifest.hpp"
#include "torusflux/mollify.hpp"
#include "torusflux/nse.hpp"

namespace tf = torusflux;

namespace {

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int thread_budget() {
    const char* env = std::getenv("TORUSFLUX_THREADS");
    if (!env) return 1;
    int t = std::atoi(env);
    return t < 1 ? 1 : t;
}

struct KvConfig {
    std::map<std::string, std::string> kv;

    static KvConfig load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw tf::io_error("file-open-failed", path);
        KvConfig c;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw tf::io_error("config-format", "expected key=value: " + line);
            std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
            };
            trim(key);
            trim(val);
            c.kv[key] = val;
        }
        return c;
    }

    std::string get(const std::string& key, const std::string& dflt) const {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    }
};

tf::ScalarField initial_vorticity(const std::string& ic) {
    if (ic.rfind("file:", 0) == 0) return tf::load_field_file<1>(ic.substr(5));
    if (ic.rfind("power-law:", 0) == 0) {
        std::vector<double> v = parse_doubles(ic.substr(10));
        if (v.size() != 3) throw tf::validation_error("ic-spec", "power-law ic needs gamma,max_freq,seed");
        return tf::power_law_vorticity(v[0], int(v[1]), std::uint64_t(v[2]));
    }
    throw tf::validation_error("ic-spec", "unknown ic spec: " + ic);
}

tf::NSEConfig nse_config(const KvConfig& c) {
    tf::NSEConfig cfg;
    cfg.n = std::stoi(c.get("n", "128"));
    cfg.nu = std::stod(c.get("nu", "1e-3"));
    cfg.t_end = std::stod(c.get("t_end", "1.0"));
    cfg.cfl = std::stod(c.get("cfl", "0.4"));
    cfg.p_exp = std::stod(c.get("p", "1.5"));
    cfg.sample_every = std::stod(c.get("sample_every", "0.05"));
    return cfg;
}

void save_with_manifest(const tf::CsvWriter& csv, const std::string& out, tf::Manifest& man) {
    csv.save(out);
    man.artifact(out);
    man.save(out + ".manifest.json");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = int(x.size());
    for (int i = 0; i < k; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"spectral laboratory for 2D torus energy flux"};
    app.require_subcommand(1);
    tf::LPProfile prof = tf::default_profile();

    // ---- build
    auto* build = app.add_subcommand("build", "construct a field and write it in the text format");
    std::string kind, q_str = "3,8,13", out = "field.txt", shear_modes = "1=0,0.5";
    double eps = 1.0 / 16.0, gamma = 3.0;
    int max_freq = 16;
    std::uint64_t seed = 7;
    build->add_option("kind", kind, "skeleton|lattice|power-law|shear")->required();
    build->add_option("--q", q_str, "active scales, comma separated");
    build->add_option("--eps", eps, "lattice block half-width fraction");
    build->add_option("--gamma", gamma, "power-law decay exponent");
    build->add_option("--max-freq", max_freq, "power-law spectral radius");
    build->add_option("--seed", seed, "random phase seed");
    build->add_option("--modes", shear_modes, "shear profile modes k=re,im;...");
    build->add_option("--out", out, "output field file");
    build->callback([&] {
        tf::Manifest man("build " + kind);
        man.param("q", q_str);
        man.param("eps", eps);
        man.param("seed", seed);
        tf::VelocityField f;
        if (kind == "skeleton") {
            f = tf::skeleton_field({parse_ints(q_str)});
        } else if (kind == "lattice") {
            tf::LatticeSpec spec{parse_ints(q_str), eps};
            f = tf::lattice_field(spec);
            for (int q : spec.q_list) {
                tf::VelocityField t = tf::lattice_triple(q, eps);
                int n = tf::fft::next_fast_size(2 * t.max_freq() + 2);
                tf::GridData<2> g = tf::to_grid(t, n);
                for (double p : {1.2, 1.4, 3.0})
                    man.stat("lp_norm_q" + std::to_string(q) + "_p" + std::to_string(p), tf::lp_norm(g, p));
            }
        } else if (kind == "power-law") {
            f = tf::power_law_field(gamma, max_freq, seed);
        } else if (kind == "shear") {
            std::vector<std::pair<int, tf::Complex>> modes;
            std::stringstream ss(shear_modes);
            std::string tok;
            while (std::getline(ss, tok, ';')) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) throw tf::validation_error("shear-spec", "expected k=re,im");
                std::vector<double> ri = parse_doubles(tok.substr(eq + 1));
                if (ri.size() != 2) throw tf::validation_error("shear-spec", "expected k=re,im");
                modes.emplace_back(std::stoi(tok.substr(0, eq)), tf::Complex(ri[0], ri[1]));
            }
            f = tf::shear_field(modes);
        } else {
            throw tf::validation_error("unknown-kind", kind);
        }
        man.stat("mode_count", f.mode_count());
        man.stat("max_freq", f.max_freq());
        man.stat("l2_norm", f.l2_norm());
        tf::save_field(f, out);
        man.artifact(out);
        man.save(out + ".manifest.json");
        std::cout << "wrote " << out << " (" << f.mode_count() << " modes)\n";
    });

    // ---- flux
    auto* fluxcmd = app.add_subcommand("flux", "dyadic energy flux profile");
    std::string flux_field, flux_out = "flux.csv", method = "sparse";
    int flux_qlo = 1, flux_qhi = -1, flux_n = 0;
    std::string lattice_q;
    double lattice_eps = 1.0 / 16.0;
    fluxcmd->add_option("--field", flux_field, "input field file");
    fluxcmd->add_option("--q-lo", flux_qlo);
    fluxcmd->add_option("--q-hi", flux_qhi);
    fluxcmd->add_option("--method", method, "sparse|grid");
    fluxcmd->add_option("--n", flux_n, "grid resolution for the grid method");
    fluxcmd->add_option("--lattice-q", lattice_q, "build a lattice field in block form instead of --field");
    fluxcmd->add_option("--eps", lattice_eps, "lattice eps for --lattice-q");
    fluxcmd->add_option("--out", flux_out);
    fluxcmd->callback([&] {
        tf::Manifest man("flux");
        man.param("method", method);
        tf::CsvWriter csv({"q", "lambda_q", "flux_value", "method", "resolution", "wall_time_ms"});
        std::vector<tf::FluxRecord> recs;
        if (!lattice_q.empty()) {
            tf::BlockField bf = tf::lattice_field_blocks({parse_ints(lattice_q), lattice_eps});
            int q_hi = flux_qhi > 0 ? flux_qhi : parse_ints(lattice_q).back() + 1;
            for (int q = flux_qlo; q <= q_hi; ++q) {
                auto t0 = std::chrono::steady_clock::now();
                tf::FluxRecord r;
                r.q = q;
                r.method = tf::FluxMethod::Blocks;
                r.value = tf::flux_blocks(bf, q, prof);
                r.resolution = int(bf.mode_count());
                r.wall_time_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                recs.push_back(r);
            }
        } else {
            tf::VelocityField u = tf::load_field_file<2>(flux_field, true);
            int q_hi = flux_qhi > 0 ? flux_qhi : tf::default_q_max(u.max_freq()) - 1;
            if (method == "grid") {
                for (int q = flux_qlo; q <= q_hi; ++q) recs.push_back(tf::flux(u, q, prof, tf::FluxMethod::Grid, flux_n));
            } else {
                recs = tf::flux_profile(u, flux_qlo, q_hi, prof);
            }
        }
        for (const auto& r : recs)
            csv.cell(r.q).cell(std::ldexp(1.0, r.q)).cell(r.value).cell(tf::to_string(r.method)).cell(r.resolution)
               .cell(r.wall_time_ms), csv.end_row();
        tf::FluxDecaySummary sum = tf::flux_decay_summary(recs);
        std::cout << "max |flux| " << sum.overall_max << ", top-half max " << sum.top_half_max << "\n";
        for (const auto& r : recs)
            if (std::abs(r.value) > 0.5 * sum.overall_max)
                std::cout << "  active q=" << r.q << " flux=" << r.value << "\n";
        save_with_manifest(csv, flux_out, man);
    });

    // ---- trilinear
    auto* tri = app.add_subcommand("trilinear", "check the trilinear cancellation at one scale");
    std::string tri_field;
    int tri_q = 3;
    tri->add_option("--field", tri_field)->required();
    tri->add_option("--q", tri_q);
    tri->callback([&] {
        tf::VelocityField u = tf::load_field_file<2>(tri_field, true);
        std::cout << "trilinear integral magnitude: " << tf::trilinear_check(u, tri_q, prof) << "\n";
    });

    // ---- lp (Besov table)
    auto* lp = app.add_subcommand("lp", "Besov seminorm per-q table");
    std::string lp_field, lp_out = "besov.csv";
    double lp_s = 1.0 / 3.0, lp_p = 3.0;
    int lp_qmax = -1, lp_n = 0;
    lp->add_option("--field", lp_field)->required();
    lp->add_option("--s", lp_s);
    lp->add_option("--p", lp_p);
    lp->add_option("--q-max", lp_qmax);
    lp->add_option("--n", lp_n);
    lp->add_option("--out", lp_out);
    lp->callback([&] {
        tf::Manifest man("lp");
        man.param("s", lp_s);
        man.param("p", lp_p);
        tf::VelocityField u = tf::load_field_file<2>(lp_field);
        int qm = lp_qmax >= 0 ? lp_qmax : tf::default_q_max(u.max_freq());
        tf::BesovReport rep = tf::besov_seminorm(u, lp_s, lp_p, qm, prof, lp_n);
        tf::CsvWriter csv({"q", "lambda_q", "weighted_block_norm"});
        for (std::size_t q = 0; q < rep.per_q.size(); ++q)
            csv.cell(int(q)).cell(std::ldexp(1.0, int(q))).cell(rep.per_q[q]), csv.end_row();
        std::cout << "seminorm " << rep.value << "\n";
        save_with_manifest(csv, lp_out, man);
    });

    // ---- mollify
    auto* mol = app.add_subcommand("mollify", "mollification convergence report");
    std::string mol_field, mol_eps = "0.125,0.0625,0.03125", mol_out = "mollify.csv";
    int mol_n = 0;
    mol->add_option("--field", mol_field)->required();
    mol->add_option("--eps", mol_eps);
    mol->add_option("--n", mol_n);
    mol->add_option("--out", mol_out);
    mol->callback([&] {
        tf::Manifest man("mollify");
        man.param("eps", mol_eps);
        tf::VelocityField u = tf::load_field_file<2>(mol_field, true);
        auto rows = tf::convergence_report(u, parse_doubles(mol_eps), mol_n);
        tf::CsvWriter csv({"eps", "resolution", "du_l3", "du_l6", "dusq_l65", "dp_l3", "stress_l65", "ur_l1"});
        for (const auto& r : rows)
            csv.cell(r.eps).cell(r.resolution).cell(r.du_l3).cell(r.du_l6).cell(r.dusq_l65).cell(r.dp_l3)
               .cell(r.stress_l65).cell(r.ur_l1), csv.end_row();
        save_with_manifest(csv, mol_out, man);
    });

    // ---- energy-balance
    auto* eb = app.add_subcommand("energy-balance", "steady local energy balance residual");
    std::string eb_field;
    double eb_eps = 0.125;
    int eb_n = 0;
    eb->add_option("--field", eb_field)->required();
    eb->add_option("--eps", eb_eps);
    eb->add_option("--n", eb_n);
    eb->callback([&] {
        tf::VelocityField u = tf::load_field_file<2>(eb_field, true);
        std::cout << "relative L1 residual: " << tf::energy_balance_residual(u, eb_eps, eb_n) << "\n";
    });

    // ---- dirichlet-norms
    auto* dn = app.add_subcommand("dirichlet-norms", "L^p norms of the Dirichlet kernel vs n");
    std::string dn_ns = "8,16,32,64,128,256", dn_ps = "1.5,2,3", dn_out = "dirichlet.csv";
    dn->add_option("--n-list", dn_ns);
    dn->add_option("--p-list", dn_ps);
    dn->add_option("--out", dn_out);
    dn->callback([&] {
        tf::Manifest man("dirichlet-norms");
        tf::CsvWriter csv({"n", "p", "lp_norm"});
        for (double p : parse_doubles(dn_ps)) {
            std::vector<double> lx, ly;
            for (int n : parse_ints(dn_ns)) {
                double v = tf::lp_norm_1d(tf::dirichlet_kernel(n), p);
                csv.cell(n).cell(p).cell(v), csv.end_row();
                lx.push_back(std::log(double(n)));
                ly.push_back(std::log(v));
            }
            std::cout << "p=" << p << " slope " << fit_slope(lx, ly) << " (reference " << 1.0 - 1.0 / p << ")\n";
        }
        save_with_manifest(csv, dn_out, man);
    });

    // ---- profile-dump
    auto* pd = app.add_subcommand("profile-dump", "sampled (r, chi, phi) table");
    int pd_samples = 256;
    std::string pd_out = "profile.csv";
    pd->add_option("--samples", pd_samples);
    pd->add_option("--out", pd_out);
    pd->callback([&] {
        tf::Manifest man("profile-dump");
        tf::CsvWriter csv({"r", "chi", "phi"});
        for (int i = 0; i <= pd_samples; ++i) {
            double r = 3.0 * double(i) / pd_samples;
            csv.cell(r).cell(prof.chi(r)).cell(prof.phi(r)), csv.end_row();
        }
        save_with_manifest(csv, pd_out, man);
    });

    // ---- nse-run
    auto* nr = app.add_subcommand("nse-run", "integrate the vorticity equation");
    std::string nr_config, nr_out = "nse.csv", nr_snap;
    nr->add_option("--config", nr_config)->required();
    nr->add_option("--out", nr_out);
    nr->add_option("--snapshots", nr_snap, "prefix for vorticity snapshot files");
    nr->callback([&] {
        KvConfig kc = KvConfig::load(nr_config);
        tf::NSEConfig cfg = nse_config(kc);
        cfg.keep_snapshots = !nr_snap.empty();
        tf::Manifest man("nse-run");
        for (const auto& [k, v] : kc.kv) man.param(k, v);
        tf::NSETrajectory traj = tf::run(cfg, initial_vorticity(kc.get("ic", "power-law:3,16,7")));
        tf::CsvWriter csv({"t", "energy", "lp_vorticity", "enstrophy", "palinstrophy", "cum_dissipation"});
        for (const auto& r : traj.records)
            csv.cell(r.t).cell(r.energy).cell(r.lp_vorticity).cell(r.enstrophy).cell(r.palinstrophy)
               .cell(r.cumulative_dissipation), csv.end_row();
        man.stat("dt", traj.dt);
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            std::string path = nr_snap + "_" + std::to_string(i) + ".txt";
            tf::save_field(tf::to_sparse(traj.snapshots[i].second, 1e-300), path);
            man.artifact(path);
        }
        save_with_manifest(csv, nr_out, man);
    });

    // ---- nse-sweep
    auto* ns = app.add_subcommand("nse-sweep", "viscosity sweep with bound margins");
    std::string ns_config, ns_nu = "1e-2,3e-3,1e-3,3e-4", ns_out = "sweep.csv";
    bool ns_roughen = false;
    double ns_gamma = 0.8;
    ns->add_option("--config", ns_config)->required();
    ns->add_option("--nu", ns_nu);
    ns->add_flag("--roughen", ns_roughen);
    ns->add_option("--spectrum-gamma", ns_gamma);
    ns->add_option("--out", ns_out);
    ns->callback([&] {
        KvConfig kc = KvConfig::load(ns_config);
        tf::NSEConfig base = nse_config(kc);
        std::vector<double> nus = parse_doubles(ns_nu);
        tf::Manifest man("nse-sweep");
        for (const auto& [k, v] : kc.kv) man.param(k, v);
        man.param("nu_list", ns_nu);
        man.param("roughen", ns_roughen);
        man.param("threads", thread_budget());

        // members are independent; run them on the thread budget and join
        std::vector<tf::SweepRow> rows(nus.size());
        std::vector<std::string> errors(nus.size());
        std::uint64_t seed = std::stoull(kc.get("seed", "2026"));
        auto worker = [&](std::size_t i) {
            try {
                tf::NSEConfig cfg = base;
                cfg.nu = nus[i];
                tf::ScalarField w0 = tf::sweep_initial_vorticity(base, nus[i], ns_roughen, ns_gamma, seed);
                tf::NSETrajectory traj = tf::run(cfg, w0);
                tf::BoundMargins m = tf::check_bounds(traj, cfg.p_exp);
                rows[i] = {nus[i], w0.max_freq(),
                           2.0 * (traj.records.front().energy - traj.records.back().energy),
                           0.5 * traj.records.back().cumulative_dissipation, m.energy_loss_bound};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        };
        int budget = thread_budget();
        for (std::size_t i = 0; i < nus.size(); i += budget) {
            std::vector<std::thread> pool;
            for (std::size_t j = i; j < std::min(nus.size(), i + budget); ++j) pool.emplace_back(worker, j);
            for (auto& t : pool) t.join();
        }
        for (const auto& e : errors)
            if (!e.empty()) throw tf::numeric_error("sweep-member-failed", e);

        std::vector<double> lx, ly;
        tf::CsvWriter csv({"nu", "ic_cutoff", "delta_e", "eps_nu", "bound_margin"});
        for (const auto& r : rows) {
            csv.cell(r.nu).cell(r.ic_cutoff).cell(r.delta_e).cell(r.eps_nu).cell(r.bound_margin), csv.end_row();
            if (r.delta_e > 0.0) {
                lx.push_back(std::log(r.nu));
                ly.push_back(std::log(r.delta_e));
            }
        }
        double slope = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
        man.stat("fit_slope", slope);
        std::cout << "delta_e vs nu fitted slope: " << slope << "\n";
        save_with_manifest(csv, ns_out, man);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const tf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == tf::ErrorKind::Numeric ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
