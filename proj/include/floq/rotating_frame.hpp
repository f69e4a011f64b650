#pragma once

#include "floq/expansions.hpp"
#include "floq/propagator.hpp"

#include <functional>
#include <stdexcept>

namespace floq {

/// Bessel function of the first kind for integer order and real argument.
double bessel_j(int n, double x);

/// nu(z) = sum over odd n > 0 of J_n(z)/n.
double bessel_nu(double z);

/// Smallest n_max beyond which |J_n(x)| < 1e-17 for every |x| <= 2z.
int rotating_n_max(double z);

struct unsupported_drive : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class construction_route { analytic_qubit, bessel_matrix };

struct rotating_frame_series {
    model_params base;
    double z = 0.0;
    fourier_series components;
    construction_route route = construction_route::analytic_qubit;
};

/// Closed-form H_n, d_n components of the rotating-frame qubit generator; phi = 0 only.
rotating_frame_series rotfr_components_analytic(const model_params& p, int n_max);

/// L~_n = sum_k J_{n-k}(2A/omega) L_0 J_k(-2A/omega) with A = i L_1, any phi.
rotating_frame_series rotfr_components_bessel_matrix(const model_params& p, int n_max);

/// Lambda(t) = exp(int_0^t L_d), the frame change rho = Lambda rho~.
cmat rotating_frame_operator(const model_params& p, double t);

/// Rotating-frame series by whichever route applies to p.
rotating_frame_series rotfr_components(const model_params& p, int n_max);

lindblad_form rotfr_magnus1_form(const model_params& p);
expansion_result rotfr_magnus1(const model_params& p);

/// L~_0 + sum over odd n of 2 [L~_0, i L~_n]/(n omega), all orders in gamma kept.
expansion_result rotfr_magnus2(const model_params& p);

/// L'(t) = (d/dt D^-1) D + D^-1 L D with a central difference of step T/1e5.
periodic_generator gauge_transform(const periodic_generator& gen, std::function<cmat(double)> d_of_t,
                                   std::function<cmat(double)> d_inv_of_t);

}  // namespace floq
