#pragma once

#include "floq/propagator.hpp"
#include "floq/superop.hpp"

#include <optional>

namespace floq {

enum class frame_tag { direct, rotating };

struct expansion_result {
    int order = 1;
    cmat generator;
    /// Fourier components of the micromotion exponent G(t), when one was used.
    std::optional<fourier_series> micromotion_exponent;
    frame_tag frame = frame_tag::direct;
};

/// Integral of exp(i(a s + b s' + c s'')) over 2 pi > s > s' > s'' > 0.
template <class R> cplx_t<R> ordered_exp_integral(int a, int b, int c);

/// K_Mag,k = sum of the first k Magnus coefficients. The third coefficient is
/// evaluated in Fourier space with exact time-ordered integral weights.
template <class R> cmat_t<R> magnus_generator(const basic_fourier_series<R>& s, R omega, int k);

expansion_result magnus_order(const fourier_series& s, double omega, int k, frame_tag frame = frame_tag::direct);

/// Nested Gauss-Legendre quadrature of the time-ordered Magnus integrals; the test oracle.
cmat magnus_integral_oracle(const periodic_generator& gen, int k, int quad_steps);

template <class R> cmat_t<R> vanvleck_keff_generator(const basic_fourier_series<R>& s, R omega, int order);

expansion_result vanvleck_keff(const fourier_series& s, double omega, int order, frame_tag frame = frame_tag::direct);

/// Components of G^(1) + ... + G^(order); order 2 reaches harmonics up to 2 n_max.
fourier_series micromotion_exponent(const fourier_series& s, double omega, int order);

/// D_order(t) = exp(G^(1)(t) + ... + G^(order)(t)).
cmat vanvleck_micromotion(const fourier_series& s, double omega, int order, double t);

/// K_vV,n = D_{n-1}(t0) K_eff,n D_{n-1}(t0)^-1.
expansion_result vanvleck_floquet_generator(const fourier_series& s, double omega, int n, double t0,
                                            frame_tag frame = frame_tag::direct);

/// Integral of the induced 2-norm of L(t) over one period. Convergence of the
/// Magnus series is guaranteed when this is below pi.
double magnus_convergence_bound(const periodic_generator& gen, int quad_steps);

}  // namespace floq
