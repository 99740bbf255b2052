#include <catch2/catch_amalgamated.hpp>

#include "torusflux/dyadic.hpp"
#include "torusflux/field_zoo.hpp"
#include "torusflux/lp_profile.hpp"

using namespace torusflux;

TEST_CASE("default profile is admissible") {
    LPProfile prof = default_profile();
    REQUIRE_NOTHROW(check_admissible(prof));
    REQUIRE(prof.chi(0.5) == 1.0);
    REQUIRE(prof.chi(1.0) == 0.0);
    REQUIRE(prof.phi(1.0) == 1.0);           // chi(1/2) - chi(1)
    REQUIRE(prof.phi(0.25) == 0.0);          // inside the plateau
    REQUIRE(prof.phi(2.0) == 0.0);           // beyond the support
    REQUIRE(prof.phi(0.7) >= 0.0);
}

TEST_CASE("truncate: identity below, zero above, v-component on the triple") {
    LPProfile prof = default_profile();
    VelocityField low = skeleton_triple(3);  // support |alpha| <= sqrt(80) < 16
    VelocityField same = truncate(low, DyadicIndex{5}, prof);
    for (const auto& [k, c] : low.coeffs()) {
        REQUIRE(same.at(k)[0] == c[0]);
        REQUIRE(same.at(k)[1] == c[1]);
    }

    VelocityField high = skeleton_triple(8);  // support |alpha| >= 128
    REQUIRE(truncate(high, DyadicIndex{6}, prof).empty());

    // S_q[u_q] keeps exactly the v_{q-1} part
    VelocityField uq = skeleton_triple(6);
    VelocityField s = truncate(uq, DyadicIndex{6}, prof);
    REQUIRE(s.mode_count() == 2);
    REQUIRE(std::abs(s.at({0, 32})[0] - Complex(0.0, std::pow(32.0, -1.0 / 3.0))) < 1e-15);
    REQUIRE(s.at({64, 0})[1] == Complex(0.0, 0.0));
}

TEST_CASE("lp_block telescopes back to the field") {
    LPProfile prof = default_profile();
    VelocityField f = power_law_field(2.0, 12, 4);
    int q_max = default_q_max(f.max_freq());
    VelocityField sum;
    for (const auto& [k, c] : f.coeffs())
        if (k.is_zero()) sum.set(k, c);
    for (int q = 0; q <= q_max; ++q)
        for (const auto& [k, c] : lp_block(f, DyadicIndex{q}, prof).coeffs()) sum.add(k, c);
    for (const auto& [k, c] : f.coeffs()) {
        REQUIRE(std::abs(sum.at(k)[0] - c[0]) < 1e-12);
        REQUIRE(std::abs(sum.at(k)[1] - c[1]) < 1e-12);
    }
}

TEST_CASE("lp_block on single modes") {
    LPProfile prof = default_profile();
    VelocityField f;
    f.set({4, 0}, {0.0, Complex(0.5, 0.0)});
    f.set({-4, 0}, {0.0, Complex(0.5, 0.0)});
    // |alpha| = lambda_2: phi(1) = 1
    VelocityField b = lp_block(f, DyadicIndex{2}, prof);
    REQUIRE(b.at({4, 0})[1] == Complex(0.5, 0.0));
    // |alpha| > 2 lambda_1 = 4: zero
    REQUIRE(lp_block(f, DyadicIndex{1}, prof).empty());
    REQUIRE_THROWS_AS(lp_block(f, DyadicIndex{-1}, prof), Error);
}

TEST_CASE("truncate commutes with differentiation and preserves div-freeness") {
    LPProfile prof = default_profile();
    VelocityField u = power_law_field(2.0, 10, 8);
    VelocityField a = derivative(truncate(u, DyadicIndex{3}, prof), 0);
    VelocityField b = truncate(derivative(u, 0), DyadicIndex{3}, prof);
    for (const auto& [k, c] : a.coeffs()) {
        REQUIRE(b.at(k)[0] == c[0]);
        REQUIRE(b.at(k)[1] == c[1]);
    }
    REQUIRE(is_divergence_free(truncate(u, DyadicIndex{3}, prof), 1e-13));
}

TEST_CASE("S_q is the identity beyond the spectral radius") {
    LPProfile prof = default_profile();
    VelocityField u = power_law_field(2.0, 10, 2);
    int q = default_q_max(u.max_freq()) + 1;  // lambda_q >= 2 * spectral radius
    VelocityField s = truncate(u, DyadicIndex{q}, prof);
    REQUIRE(s.mode_count() == u.mode_count());
    for (const auto& [k, c] : u.coeffs()) REQUIRE(s.at(k)[0] == c[0]);
}

TEST_CASE("besov_seminorm basics") {
    LPProfile prof = default_profile();
    REQUIRE(besov_seminorm(VelocityField{}, 1.0 / 3.0, 3.0, 5, prof).value == 0.0);

    // single mode pair at |alpha| = lambda_3, phi(1) = 1
    VelocityField f;
    f.set({8, 0}, {0.0, Complex(0.5, 0.0)});
    f.set({-8, 0}, {0.0, Complex(0.5, 0.0)});
    double l3 = lp_norm(to_grid(f, 64), 3.0);
    BesovReport rep = besov_seminorm(f, 1.0 / 3.0, 3.0, 4, prof);
    REQUIRE(rep.per_q[3] == Catch::Approx(2.0 * l3).epsilon(1e-10));  // lambda_3^{1/3} = 2
}

TEST_CASE("besov band of the skeleton field is flat across active scales") {
    LPProfile prof = default_profile();
    VelocityField u = skeleton_field({{3, 8, 13}});
    BesovReport rep = besov_seminorm(u, 1.0 / 3.0, 3.0, 14, prof);
    double lo = 1e300, hi = 0.0;
    for (int q : {3, 8, 13}) {
        lo = std::min(lo, rep.per_q[q]);
        hi = std::max(hi, rep.per_q[q]);
    }
    REQUIRE(hi / lo < 3.0);
    // self-similarity makes the active values exactly equal here
    REQUIRE(hi / lo == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Bernstein saturation band for lattice triples") {
    LPProfile prof = default_profile();
    double lo = 1e300, hi = 0.0;
    for (int q : {7, 8, 9}) {
        VelocityField u = lattice_triple(q, 0.125);
        int n = fft::next_fast_size(2 * u.max_freq() + 2);
        GridData<2> g = to_grid(u, n);
        double lam = std::ldexp(1.0, q);
        for (double p : {1.2, 2.0}) {
            double ratio = lp_norm(g, 3.0) / (std::pow(lam, 2.0 / p - 2.0 / 3.0) * lp_norm(g, p));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    REQUIRE(hi / lo < 10.0);  // fixed band across q and p < 3
}
