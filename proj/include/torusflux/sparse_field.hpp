#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "torusflux/error.hpp"
#include "torusflux/wavevector.hpp"

namespace torusflux {

using Complex = std::complex<double>;

template <int N>
using CoeffVec = std::array<Complex, N>;

/// Exact band-limited field on the unit torus as a finite map from integer
/// wavevectors to complex coefficient vectors, f(x) = sum f_hat(alpha)
/// e^{2 pi i alpha.x}. N = 1 for scalars (vorticity, pressure), N = 2 for
/// velocity fields. Real-valued fields keep conjugate-symmetric maps.
template <int N>
class SparseField {
  public:
    using Coeffs = std::map<Wavevector, CoeffVec<N>>;

    SparseField() = default;

    const Coeffs& coeffs() const { return coeffs_; }

    CoeffVec<N> at(Wavevector k) const {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) return zero_vec();
        return it->second;
    }

    void set(Wavevector k, const CoeffVec<N>& c) {
        if (is_negligible(c)) {
            coeffs_.erase(k);
            return;
        }
        coeffs_[k] = c;
        max_freq_ = std::max(max_freq_, k.norm_inf());
    }

    void add(Wavevector k, const CoeffVec<N>& c) {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            set(k, c);
            return;
        }
        for (int i = 0; i < N; ++i) it->second[i] += c[i];
        if (is_negligible(it->second)) coeffs_.erase(it);
    }

    bool empty() const { return coeffs_.empty(); }
    std::size_t mode_count() const { return coeffs_.size(); }

    /// Radius of spectral support in the max norm.
    int max_freq() const { return max_freq_; }

    /// Largest Euclidean mode radius (0 for the empty field).
    double spectral_radius() const {
        double r = 0.0;
        for (const auto& [k, c] : coeffs_) r = std::max(r, k.norm());
        return r;
    }

    CoeffVec<N> mean_mode() const { return at({0, 0}); }

    /// max over stored modes of |f_hat(-alpha) - conj(f_hat(alpha))|.
    double conjugate_symmetry_defect() const {
        double worst = 0.0;
        for (const auto& [k, c] : coeffs_) {
            CoeffVec<N> m = at(-k);
            for (int i = 0; i < N; ++i) worst = std::max(worst, std::abs(m[i] - std::conj(c[i])));
        }
        return worst;
    }

    bool is_real(double tol = 1e-12) const { return conjugate_symmetry_defect() <= tol * (1.0 + linf_coeff()); }

    double linf_coeff() const {
        double m = 0.0;
        for (const auto& [k, c] : coeffs_)
            for (int i = 0; i < N; ++i) m = std::max(m, std::abs(c[i]));
        return m;
    }

    /// Plancherel L2 norm, (sum |coeffs|^2)^{1/2}.
    double l2_norm() const {
        double s = 0.0;
        for (const auto& [k, c] : coeffs_)
            for (int i = 0; i < N; ++i) s += std::norm(c[i]);
        return std::sqrt(s);
    }

    void drop_below(double tol) {
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            double m = 0.0;
            for (int i = 0; i < N; ++i) m = std::max(m, std::abs(it->second[i]));
            it = (m <= tol) ? coeffs_.erase(it) : std::next(it);
        }
    }

    static CoeffVec<N> zero_vec() {
        CoeffVec<N> v{};
        return v;
    }

  private:
    static bool is_negligible(const CoeffVec<N>& c) {
        for (int i = 0; i < N; ++i)
            if (c[i] != Complex(0.0, 0.0)) return false;
        return true;
    }

    Coeffs coeffs_;
    int max_freq_ = 0;
};

using ScalarField = SparseField<1>;
using VelocityField = SparseField<2>;

/// alpha . f_hat(alpha), max over modes; zero for divergence-free fields.
inline double divergence_defect(const VelocityField& u) {
    double worst = 0.0;
    for (const auto& [k, c] : u.coeffs())
        worst = std::max(worst, std::abs(double(k.a1) * c[0] + double(k.a2) * c[1]));
    return worst;
}

inline bool is_divergence_free(const VelocityField& u, double tol = 1e-12) {
    return divergence_defect(u) <= tol * (1.0 + u.linf_coeff()) * (1.0 + u.max_freq());
}

/// gcd of all stored wavevector components (0 for the empty field).
template <int N>
int frequency_gcd(const SparseField<N>& f) {
    int g = 0;
    for (const auto& [k, c] : f.coeffs()) {
        g = std::gcd(g, std::gcd(std::abs(k.a1), std::abs(k.a2)));
        if (g == 1) break;
    }
    return g;
}

/// Divide every wavevector by the common factor g. The map x -> g x is
/// measure-preserving on the torus, so all L^p norms are unchanged; this
/// lets high-frequency sparse fields be sampled on small grids.
template <int N>
SparseField<N> reduce_frequencies(const SparseField<N>& f, int g) {
    if (g <= 1) return f;
    SparseField<N> out;
    for (const auto& [k, c] : f.coeffs()) {
        if (k.a1 % g != 0 || k.a2 % g != 0)
            throw validation_error("gcd-mismatch", "wavevector not divisible by the common factor");
        out.set({k.a1 / g, k.a2 / g}, c);
    }
    return out;
}

// --- plain-text serialization: one line per mode, "a1 a2 re1 im1 [re2 im2]" ---

template <int N>
void save_field(const SparseField<N>& f, std::ostream& os) {
    os.precision(17);
    os << "# torusflux field, components: " << N << "\n";
    for (const auto& [k, c] : f.coeffs()) {
        os << k.a1 << " " << k.a2;
        for (int i = 0; i < N; ++i) os << " " << c[i].real() << " " << c[i].imag();
        os << "\n";
    }
}

template <int N>
void save_field(const SparseField<N>& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("file-open-failed", path);
    save_field(f, os);
}

template <int N>
SparseField<N> load_field(std::istream& is, bool require_divergence_free = false) {
    SparseField<N> f;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int a1, a2;
        if (!(ss >> a1 >> a2)) throw io_error("file-format", "bad mode line " + std::to_string(lineno));
        CoeffVec<N> c{};
        for (int i = 0; i < N; ++i) {
            double re, im;
            if (!(ss >> re >> im))
                throw io_error("file-format", "expected " + std::to_string(2 * N) +
                                                  " coefficient values on line " + std::to_string(lineno));
            c[i] = Complex(re, im);
        }
        f.add({a1, a2}, c);
    }
    double scale = 1.0 + f.linf_coeff();
    if (f.conjugate_symmetry_defect() > 1e-10 * scale)
        throw validation_error("conjugate-symmetry", "loaded field is not real-valued");
    if constexpr (N == 2) {
        if (require_divergence_free && !is_divergence_free(f, 1e-10))
            throw validation_error("not-divergence-free", "loaded field has nonzero divergence");
    }
    return f;
}

template <int N>
SparseField<N> load_field_file(const std::string& path, bool require_divergence_free = false) {
    std::ifstream is(path);
    if (!is) throw io_error("file-open-failed", path);
    return load_field<N>(is, require_divergence_free);
}

}  // namespace torusflux
