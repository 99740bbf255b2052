#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "torusflux/error.hpp"

namespace torusflux {
namespace fft {

/// Real-to-halfcomplex transforms on n x n grids via FFTW. Plans are cached
/// per grid size and created with FFTW_UNALIGNED so they can be executed on
/// any array through the new-array interface (thread-safe after creation).
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    struct Plans {
        fftw_plan fwd = nullptr;  // r2c
        fftw_plan inv = nullptr;  // c2r
    };

    const Plans& get(int n) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        std::vector<double> re(std::size_t(n) * n);
        std::vector<std::complex<double>> hc(std::size_t(n) * (n / 2 + 1));
        Plans p;
        p.fwd = fftw_plan_dft_r2c_2d(n, n, re.data(), reinterpret_cast<fftw_complex*>(hc.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.inv = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(hc.data()), re.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.inv) throw numeric_error("fftw-plan-failed", "n=" + std::to_string(n));
        return plans_.emplace(n, p).first->second;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

  private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.fwd);
            fftw_destroy_plan(p.inv);
        }
    }

    std::mutex mu_;
    std::map<int, Plans> plans_;
};

/// Cached unnormalized complex 2D transforms of size L x L, used for
/// zero-padded linear convolutions of spectral blocks.
class C2CPlanCache {
  public:
    static C2CPlanCache& instance() {
        static C2CPlanCache cache;
        return cache;
    }

    fftw_plan get(int L, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(L, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> buf(std::size_t(L) * L);
        fftw_plan p = fftw_plan_dft_2d(L, L, reinterpret_cast<fftw_complex*>(buf.data()),
                                       reinterpret_cast<fftw_complex*>(buf.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw numeric_error("fftw-plan-failed", "c2c L=" + std::to_string(L));
        return plans_.emplace(key, p).first->second;
    }

    C2CPlanCache(const C2CPlanCache&) = delete;
    C2CPlanCache& operator=(const C2CPlanCache&) = delete;

  private:
    C2CPlanCache() = default;
    ~C2CPlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

inline void c2c_inplace(int L, int sign, std::complex<double>* data) {
    fftw_plan p = C2CPlanCache::instance().get(L, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

/// Smallest 7-smooth size >= n (keeps FFTW away from large prime factors).
inline int next_fast_size(int n) {
    for (int L = n;; ++L) {
        int m = L;
        for (int f : {2, 3, 5, 7})
            while (m % f == 0) m /= f;
        if (m == 1) return L;
    }
}

/// samples (row-major, s[j1*n+j2] at x=(j1/n, j2/n)) -> normalized Fourier
/// coefficients in r2c layout: hc[k1*(n/2+1)+k2] = f_hat(a1, a2) with
/// a2 = k2 in [0, n/2] and a1 = k1 for k1 <= n/2, k1 - n otherwise.
inline void forward(int n, const double* samples, std::complex<double>* halfcomplex) {
    const auto& p = PlanCache::instance().get(n);
    // FFTW would overwrite the input of an in-place r2c; keep a scratch copy
    // so callers can treat samples as const.
    std::vector<double> scratch(samples, samples + std::size_t(n) * n);
    fftw_execute_dft_r2c(p.fwd, scratch.data(), reinterpret_cast<fftw_complex*>(halfcomplex));
    double norm = 1.0 / (double(n) * n);
    std::size_t m = std::size_t(n) * (n / 2 + 1);
    for (std::size_t i = 0; i < m; ++i) halfcomplex[i] *= norm;
}

/// Inverse of forward; the halfcomplex input is preserved (FFTW's c2r
/// destroys its input, so the transform runs on a copy).
inline void inverse(int n, const std::complex<double>* halfcomplex, double* samples) {
    const auto& p = PlanCache::instance().get(n);
    std::size_t m = std::size_t(n) * (n / 2 + 1);
    std::vector<std::complex<double>> scratch(halfcomplex, halfcomplex + m);
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(scratch.data()), samples);
}

}  // namespace fft
}  // namespace torusflux
