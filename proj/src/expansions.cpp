#include "floq/expansions.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace floq {

namespace {

/// sum_k exp(i k s) p_k(s), p_k of degree <= 3.
template <class R> using poly_exp = std::map<int, std::array<cplx_t<R>, 4>>;

template <class R> poly_exp<R> integrate_from_zero(const poly_exp<R>& f)
{
    using C = cplx_t<R>;
    poly_exp<R> out;
    auto& constant = out[0];
    for (const auto& [k, p] : f) {
        if (k == 0) {
            for (int j = 0; j < 3; ++j) constant[static_cast<size_t>(j + 1)] += p[static_cast<size_t>(j)] / R(j + 1);
            continue;
        }
        // Antiderivative exp(iks) sum c_j s^j with i k c_j + (j+1) c_{j+1} = p_j.
        std::array<C, 5> c{};
        for (int j = 3; j >= 0; --j)
            c[static_cast<size_t>(j)] = (p[static_cast<size_t>(j)] - R(j + 1) * c[static_cast<size_t>(j + 1)]) / C(0, R(k));
        auto& q = out[k];
        for (int j = 0; j < 4; ++j) q[static_cast<size_t>(j)] += c[static_cast<size_t>(j)];
        constant[0] -= c[0];
    }
    return out;
}

template <class R> poly_exp<R> shift(const poly_exp<R>& f, int a)
{
    poly_exp<R> out;
    for (const auto& [k, p] : f) out[k + a] = p;
    return out;
}

void check_order(int k, int hi, const char* what)
{
    if (k < 1 || k > hi) throw std::invalid_argument(std::string(what) + ": order out of range");
}

}  // namespace

template <class R> cplx_t<R> ordered_exp_integral(int a, int b, int c)
{
    using C = cplx_t<R>;
    poly_exp<R> f;
    f[c] = {C(1), C(0), C(0), C(0)};
    f = integrate_from_zero<R>(f);
    f = integrate_from_zero<R>(shift<R>(f, b));
    f = integrate_from_zero<R>(shift<R>(f, a));
    const R s = R(2) * std::acos(R(-1));
    C total(0);
    for (const auto& [k, p] : f) {
        // exp(2 pi i k) = 1 for integer k.
        C acc(0);
        for (int j = 3; j >= 0; --j) acc = acc * s + p[static_cast<size_t>(j)];
        total += acc;
    }
    return total;
}

template <class R> cmat_t<R> magnus_generator(const basic_fourier_series<R>& s, R omega, int k)
{
    using C = cplx_t<R>;
    check_order(k, 3, "magnus_generator");
    const int nm = s.n_max;
    cmat_t<R> out = s[0];
    if (k >= 2) {
        for (int n = 1; n <= nm; ++n)
            out += C(0, 1) * (commutator<R>(s[n], s[-n]) + commutator<R>(s[0], s[n] - s[-n])) / (R(n) * omega);
    }
    if (k >= 3) {
        std::vector<bool> live(static_cast<size_t>(2 * nm + 1));
        for (int n = -nm; n <= nm; ++n) live[static_cast<size_t>(n + nm)] = s[n].norm() > R(0);
        const R pi = std::acos(R(-1));
        const R pref = R(1) / (R(12) * pi * omega * omega);
        for (int a = -nm; a <= nm; ++a)
            for (int b = -nm; b <= nm; ++b)
                for (int c = -nm; c <= nm; ++c) {
                    if (!live[static_cast<size_t>(a + nm)] || !live[static_cast<size_t>(b + nm)]
                        || !live[static_cast<size_t>(c + nm)])
                        continue;
                    const C w = pref * ordered_exp_integral<R>(a, b, c);
                    out += w * (commutator<R>(s[a], commutator<R>(s[b], s[c]))
                                + commutator<R>(s[c], commutator<R>(s[b], s[a])));
                }
    }
    return out;
}

expansion_result magnus_order(const fourier_series& s, double omega, int k, frame_tag frame)
{
    expansion_result r;
    r.order = k;
    r.generator = magnus_generator<double>(s, omega, k);
    r.frame = frame;
    return r;
}

cmat magnus_integral_oracle(const periodic_generator& gen, int k, int quad_steps)
{
    check_order(k, 3, "magnus_integral_oracle");
    if (quad_steps < 200) throw std::invalid_argument("magnus_integral_oracle: quad_steps must be >= 200");

    // 5-point Gauss-Legendre on [0, 1].
    static const double gx[5] = {0.046910077030668004, 0.23076534494715845, 0.5, 0.76923465505284155,
                                 0.953089922969332};
    static const double gw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                 0.23931433524968324, 0.11846344252809454};
    const double T = gen.period;
    const double h = T / quad_steps;
    const Eigen::Index d = gen.eval(0.0).rows();

    auto interval_of = [&](double x) {
        auto j = static_cast<int>(std::floor(x / h));
        return std::clamp(j, 0, quad_steps - 1);
    };
    // Integral of f over [lo, hi] with one Gauss-Legendre panel.
    auto panel = [&](auto&& f, double lo, double hi) {
        cmat acc = cmat::Zero(d, d);
        for (int q = 0; q < 5; ++q) acc += gw[q] * f(lo + (hi - lo) * gx[q]);
        return cmat(acc * (hi - lo));
    };

    auto L = [&](double t) { return gen.eval(t); };
    std::vector<cmat> prefix1(static_cast<size_t>(quad_steps + 1), cmat::Zero(d, d));
    for (int j = 0; j < quad_steps; ++j) prefix1[static_cast<size_t>(j + 1)] = prefix1[static_cast<size_t>(j)] + panel(L, j * h, (j + 1) * h);
    auto C1 = [&](double x) {
        const int j = interval_of(x);
        return cmat(prefix1[static_cast<size_t>(j)] + panel(L, j * h, x));
    };

    cmat out = prefix1.back() / T;
    if (k == 1) return out;

    auto F = [&](double x) { return cmat(commutator<double>(L(x), C1(x))); };
    std::vector<cmat> prefix2(static_cast<size_t>(quad_steps + 1), cmat::Zero(d, d));
    for (int j = 0; j < quad_steps; ++j) prefix2[static_cast<size_t>(j + 1)] = prefix2[static_cast<size_t>(j)] + panel(F, j * h, (j + 1) * h);
    out += prefix2.back() / (2.0 * T);
    if (k == 2) return out;

    auto C2 = [&](double x) {
        const int j = interval_of(x);
        return cmat(prefix2[static_cast<size_t>(j)] + panel(F, j * h, x));
    };
    const cmat total = prefix1.back();
    // [L(t),[L(t'),L(t'')]] with t > t' > t'' integrates to [L(t), C2(t)];
    // [L(t''),[L(t'),L(t)]] to [C1(t'), [L(t'), C1(T) - C1(t')]].
    auto outer = [&](double x) {
        const cmat c1 = C1(x);
        const cmat lx = L(x);
        return cmat(commutator<double>(lx, C2(x)) + commutator<double>(c1, commutator<double>(lx, total - c1)));
    };
    cmat third = cmat::Zero(d, d);
    for (int j = 0; j < quad_steps; ++j) third += panel(outer, j * h, (j + 1) * h);
    out += third / (6.0 * T);
    return out;
}

template <class R> cmat_t<R> vanvleck_keff_generator(const basic_fourier_series<R>& s, R omega, int order)
{
    using C = cplx_t<R>;
    check_order(order, 3, "vanvleck_keff");
    const int nm = s.n_max;
    cmat_t<R> out = s[0];
    if (order >= 2)
        for (int n = 1; n <= nm; ++n) out += C(0, 1) * commutator<R>(s[n], s[-n]) / (R(n) * omega);
    if (order >= 3) {
        const R w2 = omega * omega;
        for (int n = -nm; n <= nm; ++n) {
            if (n == 0) continue;
            out -= commutator<R>(s[n], commutator<R>(s[0], s[-n])) / (R(2 * n * n) * w2);
            for (int m = -nm; m <= nm; ++m) {
                if (m == 0 || m == n || std::abs(n - m) > nm) continue;
                out -= commutator<R>(s[m], commutator<R>(s[n - m], s[-n])) / (R(3 * n * m) * w2);
            }
        }
    }
    return out;
}

expansion_result vanvleck_keff(const fourier_series& s, double omega, int order, frame_tag frame)
{
    expansion_result r;
    r.order = order;
    r.generator = vanvleck_keff_generator<double>(s, omega, order);
    r.frame = frame;
    return r;
}

fourier_series micromotion_exponent(const fourier_series& s, double omega, int order)
{
    check_order(order, 2, "micromotion_exponent");
    const int nm = s.n_max;
    const int d = s.dim();
    fourier_series g(order == 1 ? nm : 2 * nm, d);
    for (int n = -nm; n <= nm; ++n)
        if (n != 0) g[n] = cplx(0, -1) * s[n] / (n * omega);
    if (order == 2) {
        const double w2 = omega * omega;
        for (int n = -2 * nm; n <= 2 * nm; ++n) {
            if (n == 0) continue;
            cmat acc = cmat::Zero(d, d);
            if (std::abs(n) <= nm) acc += commutator<double>(s[0], s[n]) / (double(n) * n * w2);
            for (int m = -nm; m <= nm; ++m) {
                if (m == 0 || m == n || std::abs(n - m) > nm) continue;
                acc += commutator<double>(s[n - m], s[m]) / (2.0 * m * n * w2);
            }
            g[n] -= acc;
        }
    }
    return g;
}

cmat vanvleck_micromotion(const fourier_series& s, double omega, int order, double t)
{
    const cmat g = micromotion_exponent(s, omega, order).evaluate(omega, t);
    return g.exp();
}

expansion_result vanvleck_floquet_generator(const fourier_series& s, double omega, int n, double t0, frame_tag frame)
{
    check_order(n, 3, "vanvleck_floquet_generator");
    expansion_result r;
    r.order = n;
    r.frame = frame;
    const cmat keff = vanvleck_keff_generator<double>(s, omega, n);
    if (n == 1) {
        r.generator = keff;
        return r;
    }
    r.micromotion_exponent = micromotion_exponent(s, omega, n - 1);
    const cmat dm = cmat(r.micromotion_exponent->evaluate(omega, t0)).exp();
    r.generator = dm * keff * dm.inverse();
    return r;
}

double magnus_convergence_bound(const periodic_generator& gen, int quad_steps)
{
    if (quad_steps < 100) throw std::invalid_argument("magnus_convergence_bound: quad_steps must be >= 100");
    const int m = quad_steps + (quad_steps % 2);
    const double h = gen.period / m;
    auto norm2 = [&](double t) { return Eigen::JacobiSVD<cmat>(gen.eval(t)).singularValues()(0); };
    double acc = norm2(0.0) + norm2(gen.period);
    for (int j = 1; j < m; ++j) acc += (j % 2 ? 4.0 : 2.0) * norm2(j * h);
    return acc * h / 3.0;
}

template cplx_t<double> ordered_exp_integral<double>(int, int, int);
template cplx_t<long double> ordered_exp_integral<long double>(int, int, int);
template cmat_t<double> magnus_generator<double>(const basic_fourier_series<double>&, double, int);
template cmat_t<long double> magnus_generator<long double>(const basic_fourier_series<long double>&, long double, int);
template cmat_t<double> vanvleck_keff_generator<double>(const basic_fourier_series<double>&, double, int);
template cmat_t<long double> vanvleck_keff_generator<long double>(const basic_fourier_series<long double>&,
                                                                  long double, int);

}  // namespace floq
