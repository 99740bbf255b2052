#pragma once

#include <cmath>
#include <functional>

#include "torusflux/error.hpp"

namespace torusflux {

/// Radial dyadic cutoff pair: chi == 1 on [0,1/2], 0 on [1,inf), smooth and
/// non-increasing in between; phi(r) = chi(r/2) - chi(r) tiles the dyadic
/// annuli so that chi(r) + sum_{q>=0} phi(2^{-q} r) == 1.
struct LPProfile {
    std::function<double(double)> chi;

    double phi(double r) const { return chi(0.5 * r) - chi(r); }
};

namespace detail {

inline double bump_half(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

/// smoothstep built from exp(-1/t): 0 at t<=0, 1 at t>=1, C^inf monotone.
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = bump_half(t);
    return a / (a + bump_half(1.0 - t));
}

}  // namespace detail

/// Default admissible profile. The plateau values are produced by exact
/// comparisons, so chi is 1 or 0 to the last bit at every lattice radius
/// with r <= 1/2 or r >= 1.
inline LPProfile default_profile() {
    return LPProfile{[](double r) {
        if (r <= 0.5) return 1.0;
        if (r >= 1.0) return 0.0;
        return 1.0 - detail::smoothstep(2.0 * r - 1.0);
    }};
}

/// Sampled admissibility check; throws on violation.
inline void check_admissible(const LPProfile& prof, int samples = 4096, double tol = 1e-12) {
    double prev = 1.0 + tol;
    for (int i = 0; i <= samples; ++i) {
        double r = 4.0 * double(i) / samples;
        double c = prof.chi(r);
        if (c < -tol || c > 1.0 + tol) throw validation_error("profile-range", "chi out of [0,1]");
        if (r <= 0.5 && std::abs(c - 1.0) > 0.0) throw validation_error("profile-plateau", "chi != 1 on [0,1/2]");
        if (r >= 1.0 && c != 0.0) throw validation_error("profile-plateau", "chi != 0 on [1,inf)");
        if (c > prev + tol) throw validation_error("profile-monotone", "chi increases");
        prev = c;
        if (prof.phi(r) < -tol) throw validation_error("profile-sign", "phi negative");
        // partition of unity: the sum telescopes to chi(2^{-Q-1} r)
        double part = c;
        for (int q = 0; q < 40; ++q) part += prof.phi(std::ldexp(r, -q));
        if (std::abs(part - 1.0) > tol) throw validation_error("profile-partition", "partition of unity fails");
    }
}

}  // namespace torusflux
