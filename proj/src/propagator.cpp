#include "floq/propagator.hpp"

#include <cmath>
#include <sstream>

namespace floq {

void model_params::validate() const
{
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be positive and finite");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be nonnegative and finite");
    if (!std::isfinite(drive_e) || !std::isfinite(phi)) throw std::invalid_argument("drive_e and phi must be finite");
}

template <class R> basic_lindblad_form<R> qubit_static_form(R gamma)
{
    using C = cplx_t<R>;
    basic_lindblad_form<R> f;
    f.hamiltonian = pauli<R>(2) / R(2);
    f.kossakowski = cmat_t<R>::Zero(3, 3);
    f.kossakowski(0, 0) = C(gamma);
    f.kossakowski(0, 1) = C(0, gamma);
    f.kossakowski(1, 0) = C(0, -gamma);
    f.kossakowski(1, 1) = C(gamma);
    return f;
}

template <class R> basic_fourier_series<R> driven_qubit_series(R gamma, R drive_e, R phi)
{
    using C = cplx_t<R>;
    basic_fourier_series<R> s(1, 4);
    s[0] = lindblad_to_superop<R>(qubit_static_form<R>(gamma));
    const cmat_t<R> sx = pauli<R>(0);
    const cmat_t<R> comm = C(0, -1) * (drive_e / R(2)) * (left_mul<R>(sx) - right_mul<R>(sx));
    s[1] = std::polar(R(1), -phi) * comm;
    s[-1] = std::polar(R(1), phi) * comm;
    return s;
}

periodic_generator driven_qubit(const model_params& p)
{
    p.validate();
    periodic_generator g;
    g.period = p.period();
    g.fourier = driven_qubit_series<double>(p.gamma, p.drive_e, p.phi);
    const cmat l0 = (*g.fourier)[0];
    const cmat l1 = (*g.fourier)[1];
    const cmat lm1 = (*g.fourier)[-1];
    const double w = p.omega;
    g.eval = [l0, l1, lm1, w](double t) -> cmat {
        const cplx e = std::polar(1.0, w * t);
        return l0 + e * l1 + std::conj(e) * lm1;
    };
    return g;
}

periodic_generator constant_generator(const cmat& l, double period)
{
    periodic_generator g;
    g.period = period;
    fourier_series s(0, static_cast<int>(l.rows()));
    s[0] = l;
    g.fourier = s;
    g.eval = [l](double) { return l; };
    return g;
}

cmat propagate(const periodic_generator& gen, double t0, double t1, int steps_per_period)
{
    if (steps_per_period < 100) throw std::invalid_argument("steps_per_period must be >= 100");
    if (!(t1 >= t0)) throw std::invalid_argument("propagate: t1 < t0");
    const cmat probe = gen.eval(t0);
    const Eigen::Index d = probe.rows();
    cmat p = cmat::Identity(d, d);
    if (t1 == t0) return p;

    const auto steps = std::max<long>(1, std::lround((t1 - t0) / gen.period * steps_per_period));
    const double h = (t1 - t0) / static_cast<double>(steps);
    cmat k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    cmat la = probe;
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        const cmat lb = gen.eval(t + 0.5 * h);
        const cmat lc = gen.eval(t + h);
        if (!lb.allFinite() || !lc.allFinite()) {
            std::ostringstream os;
            os << "non-finite generator near t = " << t;
            throw integration_error(os.str(), t);
        }
        k1.noalias() = la * p;
        tmp = p + (0.5 * h) * k1;
        k2.noalias() = lb * tmp;
        tmp = p + (0.5 * h) * k2;
        k3.noalias() = lb * tmp;
        tmp = p + h * k3;
        k4.noalias() = lc * tmp;
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        la = lc;
    }
    if (!p.allFinite()) throw integration_error("propagator became non-finite", t1);
    return p;
}

cmat one_cycle_map(const model_params& p, double t0, int steps_per_period)
{
    const periodic_generator g = driven_qubit(p);
    return propagate(g, t0, t0 + g.period, steps_per_period);
}

fourier_series fourier_components(const periodic_generator& gen, int n_max, int samples)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    if (samples < 4 * n_max + 1) {
        std::ostringstream os;
        os << "aliasing guard: " << samples << " samples cannot resolve n_max = " << n_max
           << " (need >= " << 4 * n_max + 1 << ")";
        throw std::invalid_argument(os.str());
    }
    const double w = gen.omega();
    std::vector<cmat> vals;
    vals.reserve(static_cast<size_t>(samples));
    for (int s = 0; s < samples; ++s) vals.push_back(gen.eval(gen.period * s / samples));
    const int d = static_cast<int>(vals.front().rows());
    fourier_series out(n_max, d);
    for (int n = -n_max; n <= n_max; ++n) {
        cmat acc = cmat::Zero(d, d);
        for (int s = 0; s < samples; ++s)
            acc += std::polar(1.0, -w * n * gen.period * s / samples) * vals[static_cast<size_t>(s)];
        out[n] = acc / static_cast<double>(samples);
    }
    return out;
}

template basic_lindblad_form<double> qubit_static_form<double>(double);
template basic_lindblad_form<long double> qubit_static_form<long double>(long double);
template basic_fourier_series<double> driven_qubit_series<double>(double, double, double);
template basic_fourier_series<long double> driven_qubit_series<long double>(long double, long double,
                                                                             long double);

}  // namespace floq
