#include <catch2/catch_amalgamated.hpp>

#include <unordered_map>

#include "torusflux/field_zoo.hpp"
#include "torusflux/flux.hpp"

using namespace torusflux;

namespace {

/// Independent oracle: literal triple sum
///   Pi_q = sum_{beta+gamma=alpha} chi(alpha)^2 [u_i(beta) u_j(gamma)]
///          * conj(2 pi i alpha_j u_i(alpha)),
/// written without the library's convolution or accumulation machinery.
double flux_oracle(const VelocityField& u, int q, const LPProfile& prof) {
    double lam = std::ldexp(1.0, q);
    Complex total(0.0, 0.0);
    for (const auto& [alpha, ua] : u.coeffs()) {
        double chi = prof.chi(alpha.norm() / lam);
        if (chi == 0.0) continue;
        Complex t[2][2] = {};
        for (const auto& [beta, ub] : u.coeffs()) {
            Wavevector gamma = alpha - beta;
            auto it = u.coeffs().find(gamma);
            if (it == u.coeffs().end()) continue;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) t[i][j] += ub[i] * it->second[j];
        }
        double a[2] = {double(alpha.a1), double(alpha.a2)};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                total += chi * chi * t[i][j] * std::conj(Complex(0.0, two_pi * a[j]) * ua[i]);
    }
    return total.real();
}

}  // namespace

TEST_CASE("skeleton triple flux: oracle, library, and closed form agree") {
    LPProfile prof = default_profile();
    for (int q : {3, 6, 9}) {
        VelocityField u = skeleton_triple(q);
        double lib = flux_sparse(u, q, prof);
        double oracle = flux_oracle(u, q, prof);
        REQUIRE(lib == Catch::Approx(oracle).margin(1e-12));
        // closed form of the surviving interactions: 4 pi (lambda_{q-1}/lambda_q)^{2/3}
        double closed = 4.0 * std::numbers::pi * std::pow(0.5, 2.0 / 3.0);
        REQUIRE(lib == Catch::Approx(closed).margin(1e-12));
    }
}

TEST_CASE("shear flux vanishes at every scale") {
    LPProfile prof = default_profile();
    VelocityField s = shear_field({{1, Complex(0.5, 0.0)}, {4, Complex(0.0, 0.3)}});
    for (int q = 0; q <= 5; ++q) REQUIRE(std::abs(flux_sparse(s, q, prof)) < 1e-15);
}

TEST_CASE("sparse-exact and grid flux agree on random fields") {
    LPProfile prof = default_profile();
    VelocityField u = power_law_field(2.0, 8, 12);
    for (int q : {1, 2, 3, 4}) {
        double sparse = flux_sparse(u, q, prof);
        double grid = flux_grid(u, q, prof, 64);
        REQUIRE(grid == Catch::Approx(sparse).margin(1e-8 * (1.0 + std::abs(sparse))));
    }
}

TEST_CASE("velocity form equals minus the tensor form (integration by parts)") {
    LPProfile prof = default_profile();
    for (std::uint64_t seed : {4ull, 5ull}) {
        VelocityField u = power_law_field(2.0, 8, seed);
        for (int q : {1, 2, 3}) {
            double t = flux_sparse(u, q, prof);
            double v = flux_velocity_integral(u, q, prof);
            REQUIRE(v == Catch::Approx(-t).margin(1e-10 * (1.0 + std::abs(t))));
        }
    }
}

TEST_CASE("trilinear cancellation") {
    LPProfile prof = default_profile();
    REQUIRE(trilinear_check(VelocityField{}, 3, prof) == 0.0);
    REQUIRE(trilinear_check(skeleton_triple(4), 4, prof) < 1e-10);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        VelocityField u = power_law_field(2.0, 8, seed);
        for (int q = 1; q <= 4; ++q) {
            VelocityField w = truncate(u, DyadicIndex{q}, prof);
            double scale = std::pow(w.l2_norm(), 3.0) * two_pi * (1.0 + w.max_freq());
            REQUIRE(trilinear_check(u, q, prof) < 1e-10 * (1.0 + scale));
        }
    }
}

TEST_CASE("skeleton flux is invariant under the admissible profile") {
    // polynomial smoothstep instead of the exp-based one
    LPProfile alt{[](double r) {
        if (r <= 0.5) return 1.0;
        if (r >= 1.0) return 0.0;
        double t = 2.0 * r - 1.0;
        return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    }};
    check_admissible(alt);
    LPProfile prof = default_profile();
    VelocityField u = skeleton_field({{3, 8}});
    for (int q : {3, 8})
        REQUIRE(flux_sparse(u, q, alt) == Catch::Approx(flux_sparse(u, q, prof)).margin(1e-12));
}

TEST_CASE("flux at inactive and fully-resolved scales vanishes") {
    LPProfile prof = default_profile();
    VelocityField u = skeleton_field({{3, 8}});
    for (int q : {5, 6}) REQUIRE(std::abs(flux_sparse(u, q, prof)) < 1e-9);
    // beyond the spectral radius S_q is the identity and the integral is
    // the exact cubic cancellation
    for (int q : {10, 12}) REQUIRE(std::abs(flux_sparse(u, q, prof)) < 1e-12);
}

TEST_CASE("single shear mode has an identically zero profile") {
    LPProfile prof = default_profile();
    VelocityField s = shear_field({{3, Complex(0.4, 0.0)}});
    std::vector<FluxRecord> recs = flux_profile(s, 1, 4, prof);
    for (const auto& r : recs) REQUIRE(r.value == 0.0);
}

TEST_CASE("block flux equals sparse flux on lattice fields") {
    LPProfile prof = default_profile();
    BlockField bf = lattice_triple_blocks(6, 1.0 / 16.0);
    VelocityField u = to_sparse(bf);
    double fb = flux_blocks(bf, 6, prof);
    double fs = flux_sparse(u, 6, prof);
    REQUIRE(fb == Catch::Approx(fs).epsilon(1e-12));

    BlockField sup = lattice_field_blocks({{4, 7}, 1.0 / 16.0});
    VelocityField u2 = to_sparse(sup);
    for (int q : {4, 7})
        REQUIRE(flux_blocks(sup, q, prof) == Catch::Approx(flux_sparse(u2, q, prof)).epsilon(1e-10));
}

TEST_CASE("flux record plumbing and decay summary") {
    LPProfile prof = default_profile();
    VelocityField u = power_law_field(3.0, 16, 6);
    std::vector<FluxRecord> recs = flux_profile(u, 1, default_q_max(u.max_freq()) - 1, prof);
    FluxDecaySummary sum = flux_decay_summary(recs);
    REQUIRE(sum.overall_max > 0.0);
    REQUIRE(sum.top_half_max <= sum.overall_max);
    VelocityField bad;
    bad.set({1, 0}, {Complex(1.0, 0.0), 0.0});
    bad.set({-1, 0}, {Complex(1.0, 0.0), 0.0});
    REQUIRE_THROWS_AS(flux(bad, 1, prof), Error);
}
