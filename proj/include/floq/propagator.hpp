#pragma once

#include "floq/superop.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace floq {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Components L_n for n in [-n_max, n_max]; L(t) = sum_n exp(i n omega t) L_n.
template <class R> struct basic_fourier_series {
    int n_max = 0;
    std::vector<cmat_t<R>> components;

    basic_fourier_series() = default;
    basic_fourier_series(int nmax, int dim)
        : n_max(nmax), components(static_cast<size_t>(2 * nmax + 1), cmat_t<R>::Zero(dim, dim)) {}

    cmat_t<R>& operator[](int n) { return components.at(static_cast<size_t>(n + n_max)); }
    const cmat_t<R>& operator[](int n) const { return components.at(static_cast<size_t>(n + n_max)); }
    int dim() const { return components.empty() ? 0 : static_cast<int>(components.front().rows()); }

    cmat_t<R> evaluate(R omega, R t) const
    {
        cmat_t<R> out = (*this)[0];
        for (int n = 1; n <= n_max; ++n) {
            const cplx_t<R> e = std::polar(R(1), R(n) * omega * t);
            out += e * (*this)[n] + std::conj(e) * (*this)[-n];
        }
        return out;
    }
};
using fourier_series = basic_fourier_series<double>;

struct model_params {
    double gamma = 0.0;
    double drive_e = 0.0;
    double omega = 1.0;
    double phi = 0.0;

    double period() const { return two_pi / omega; }
    double epsilon() const { return drive_e / omega; }
    double z() const { return 2.0 * drive_e / omega; }
    void validate() const;
};

struct periodic_generator {
    double period = 0.0;
    std::function<cmat(double)> eval;
    /// Known analytic components, if any.
    std::optional<fourier_series> fourier;

    double omega() const { return two_pi / period; }
};

struct integration_error : std::runtime_error {
    integration_error(const std::string& what, double at) : std::runtime_error(what), t(at) {}
    double t;
};

/// Static part of the driven qubit: H = sigma_z/2, jump sigma_- = sigma_x - i sigma_y at rate gamma.
template <class R> basic_lindblad_form<R> qubit_static_form(R gamma);

/// Exact components n in {-1, 0, 1} of the driven qubit,
/// H(t) = sigma_z/2 + E cos(omega t - phi) sigma_x.
template <class R> basic_fourier_series<R> driven_qubit_series(R gamma, R drive_e, R phi);

periodic_generator driven_qubit(const model_params& p);

periodic_generator constant_generator(const cmat& l, double period);

/// Time-ordered exponential P(t1, t0) by fixed-step RK4.
cmat propagate(const periodic_generator& gen, double t0, double t1, int steps_per_period = 2000);

cmat one_cycle_map(const model_params& p, double t0 = 0.0, int steps_per_period = 2000);

/// DFT of gen.eval over one period; requires samples >= 4 n_max + 1.
fourier_series fourier_components(const periodic_generator& gen, int n_max, int samples);

}  // namespace floq
