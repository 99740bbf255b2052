#include <catch2/catch_amalgamated.hpp>

#include "torusflux/field_zoo.hpp"
#include "torusflux/mollify.hpp"

using namespace torusflux;

TEST_CASE("mollifier multiplier basics") {
    REQUIRE(mollifier_multiplier(0.1, 0.0) == 1.0);
    REQUIRE(mollifier_multiplier(0.1, 4.0) < mollifier_multiplier(0.1, 2.0));
    REQUIRE(mollifier_multiplier(0.2, 2.0) < mollifier_multiplier(0.1, 2.0));
    REQUIRE_THROWS_AS(check_mollifier_eps(0.0), Error);
    REQUIRE_THROWS_AS(check_mollifier_eps(0.5), Error);
    REQUIRE_NOTHROW(check_mollifier_eps(0.25));
}

TEST_CASE("mean mode is untouched and L2 never grows") {
    ScalarField c;
    c.set({0, 0}, {Complex(3.0, 0.0)});
    ScalarField cm = mollify(c, 0.3);
    REQUIRE(cm.at({0, 0})[0] == Complex(3.0, 0.0));

    VelocityField u = power_law_field(2.0, 10, 11);
    for (double eps : {0.05, 0.1, 0.2}) REQUIRE(mollify(u, eps).l2_norm() <= u.l2_norm());
}

TEST_CASE("mollification is a semigroup in quadrature") {
    // Gaussian multipliers compose: eps_1 then eps_2 equals
    // sqrt(eps_1^2 + eps_2^2) in one shot
    VelocityField u = power_law_field(2.0, 8, 9);
    VelocityField twice = mollify(mollify(u, 0.05), 0.12);
    VelocityField once = mollify(u, std::sqrt(0.05 * 0.05 + 0.12 * 0.12));
    for (const auto& [k, c] : twice.coeffs()) {
        REQUIRE(std::abs(once.at(k)[0] - c[0]) < 1e-15);
        REQUIRE(std::abs(once.at(k)[1] - c[1]) < 1e-15);
    }
}

TEST_CASE("mollification commutes with derivatives and Leray projection") {
    VelocityField u = power_law_field(2.0, 8, 13);
    VelocityField a = mollify(derivative(u, 1), 0.1);
    VelocityField b = derivative(mollify(u, 0.1), 1);
    for (const auto& [k, c] : a.coeffs()) {
        REQUIRE(std::abs(b.at(k)[0] - c[0]) < 1e-15);
        REQUIRE(std::abs(b.at(k)[1] - c[1]) < 1e-15);
    }
    REQUIRE(is_divergence_free(mollify(u, 0.1), 1e-12));
}

TEST_CASE("Reynolds stress of a shear flow vanishes") {
    VelocityField s = shear_field({{1, Complex(0.3, 0.0)}, {3, Complex(0.0, 0.2)}});
    REQUIRE(reynolds_stress(s, 0.1).empty());
}

TEST_CASE("convergence report columns decrease with eps") {
    VelocityField u = power_law_field(2.0, 8, 7);
    std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<ConvergenceRow> rows = convergence_report(u, eps);
    REQUIRE(rows.size() == eps.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].du_l3 < rows[i - 1].du_l3);
        REQUIRE(rows[i].du_l6 < rows[i - 1].du_l6);
        REQUIRE(rows[i].dusq_l65 < rows[i - 1].dusq_l65);
        REQUIRE(rows[i].dp_l3 < rows[i - 1].dp_l3);
        REQUIRE(rows[i].stress_l65 < rows[i - 1].stress_l65);
        REQUIRE(rows[i].ur_l1 < rows[i - 1].ur_l1);
    }
    // halving eps should at least halve the stress for smooth data
    REQUIRE(rows[2].stress_l65 < 0.5 * rows[1].stress_l65 + 1e-15);
}

TEST_CASE("energy balance holds to roundoff") {
    // the identity is exact for any divergence-free field once the
    // mollified momentum imbalance is carried as a forcing term
    VelocityField u = power_law_field(2.5, 10, 3);
    REQUIRE(energy_balance_residual(u, 0.1) < 1e-10);
    REQUIRE(energy_balance_residual(u, 0.02) < 1e-10);

    VelocityField s = shear_field({{2, Complex(0.5, 0.0)}});
    REQUIRE(energy_balance_residual(s, 0.1) < 1e-12);

    VelocityField sk = skeleton_triple(3);
    REQUIRE(energy_balance_residual(sk, 0.05) < 1e-10);
}

TEST_CASE("energy balance input validation") {
    VelocityField bad;
    bad.set({1, 0}, {Complex(0.5, 0.0), 0.0});
    bad.set({-1, 0}, {Complex(0.5, 0.0), 0.0});
    REQUIRE_THROWS_AS(energy_balance_residual(bad, 0.1), Error);

    VelocityField u = power_law_field(2.0, 8, 2);
    REQUIRE_THROWS_AS(energy_balance_residual(u, 0.1, 16), Error);  // under-resolved
    REQUIRE_THROWS_AS(energy_balance_residual(u, 0.7), Error);      // eps out of range
}
