#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floq/expansions.hpp"
#include "floq/markovianity.hpp"
#include "floq/rotating_frame.hpp"
#include "test_util.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace floq;
using namespace floq::testing;

namespace {

const cplx I(0, 1);

/// Power series of J_n in long double; good to ~1e-15 absolute for |x| <= 10.
double bessel_series(int n, double x)
{
    const int m = std::abs(n);
    long double term = 1, acc = 0;
    for (int k = 1; k <= m; ++k) term *= static_cast<long double>(x) / 2 / k;
    const long double q = -static_cast<long double>(x) * x / 4;
    for (int k = 0; k < 200; ++k) {
        acc += term;
        term *= q / ((k + 1) * static_cast<long double>(k + 1 + m));
    }
    const double v = static_cast<double>(acc);
    return (n < 0 && (m % 2)) ? -v : v;
}

double sum_sq(double z, bool odd_only)
{
    double acc = 0;
    for (int k = -80; k <= 80; ++k)
        if (!odd_only || (std::abs(k) % 2)) acc += std::pow(bessel_j(k, z), 2);
    return acc;
}

model_params params(double gamma, double e, double omega, double phi = 0.0) { return {gamma, e, omega, phi}; }

/// L~(t) = Lambda(t)^-1 L_0 Lambda(t), the drive-free rotating-frame generator.
periodic_generator rotated(const model_params& p)
{
    periodic_generator g;
    g.period = p.period();
    const cmat l0 = driven_qubit_series<double>(p.gamma, p.drive_e, p.phi)[0];
    g.eval = [p, l0](double t) -> cmat {
        const cmat lam = rotating_frame_operator(p, t);
        return lam.inverse() * l0 * lam;
    };
    return g;
}

/// Closed form of L~_0 in terms of J_0(z) and g(z).
cmat k1_closed(double gamma, double z)
{
    const double j0 = bessel_j(0, z);
    const double g = sum_sq(z, true);
    cmat k = cmat::Zero(4, 4);
    k(0, 0) = -gamma * (2 * j0 + 2 - g);
    k(0, 3) = -gamma * (2 * j0 - 2 + g);
    k(1, 1) = -I * j0 - gamma * (2 + g);
    k(1, 2) = gamma * g;
    k(2, 1) = gamma * g;
    k(2, 2) = I * j0 - gamma * (2 + g);
    k(3, 0) = gamma * (2 * j0 + 2 - g);
    k(3, 3) = gamma * (2 * j0 - 2 + g);
    return k;
}

cmat exact_generator(const model_params& p) { return assess_map(one_cycle_map(p), p.period()).generator; }

}  // namespace

TEST_CASE("Bessel functions")
{
    SUBCASE("against the power series")
    {
        for (double x : {0.0, 0.1, 1.0, 3.8, -2.5, 7.3, 10.0})
            for (int n = -12; n <= 12; ++n) CHECK(std::abs(bessel_j(n, x) - bessel_series(n, x)) < 1e-13);
    }
    SUBCASE("identities")
    {
        for (double z : {0.1, 1.0, 3.8, 10.0}) {
            CHECK(std::abs(sum_sq(z, false) - 1.0) < 1e-12);
            CHECK(std::abs(sum_sq(z, true) - 0.5 * (1 - bessel_j(0, 2 * z))) < 1e-12);
        }
    }
    SUBCASE("nu")
    {
        for (double z : {0.3, 2.0, 6.0}) {
            double direct = 0;
            for (int n = 1; n < 200; n += 2) direct += bessel_j(n, z) / n;
            CHECK(std::abs(bessel_nu(z) - direct) < 1e-14);
        }
        const double z = 1e-2;
        CHECK(std::abs(bessel_nu(z) - z / 2) < z * z * z);
    }
    SUBCASE("truncation order")
    {
        for (double z : {0.1, 2.0, 12.0}) {
            const int n = rotating_n_max(z);
            for (int m = n; m < n + 4; ++m) CHECK(std::abs(bessel_j(m, 2 * z)) < 1e-17);
        }
    }
}

TEST_CASE("rotating-frame components")
{
    SUBCASE("analytic and Bessel-matrix routes agree")
    {
        for (double e : {0.2, 0.8, 1.4, 2.0, 2.5})
            for (double w : {0.5, 1.2, 2.0, 3.5, 5.0}) {
                const auto p = params(0.03, e, w);
                const auto a = rotfr_components_analytic(p, 8);
                const auto b = rotfr_components_bessel_matrix(p, 8);
                CHECK(a.route == construction_route::analytic_qubit);
                CHECK(b.route == construction_route::bessel_matrix);
                for (int n = -8; n <= 8; ++n) CHECK((a.components[n] - b.components[n]).norm() < 1e-10);
            }
    }
    SUBCASE("DFT of the rotated generator")
    {
        const auto p = params(0.05, 1.1, 1.7);
        const auto dft = fourier_components(rotated(p), 10, 64);
        const auto a = rotfr_components_analytic(p, 10);
        for (int n = -10; n <= 10; ++n) CHECK(max_abs(dft[n] - a.components[n]) < 1e-10);
    }
    SUBCASE("DFT at nonzero phase")
    {
        const auto p = params(0.05, 1.1, 1.7, 0.9);
        const auto dft = fourier_components(rotated(p), 10, 64);
        const auto b = rotfr_components(p, 10);
        CHECK(b.route == construction_route::bessel_matrix);
        for (int n = -10; n <= 10; ++n) CHECK(max_abs(dft[n] - b.components[n]) < 1e-10);
    }
    SUBCASE("zeroth component closed form")
    {
        for (double z : {0.3, 1.0, 3.8}) {
            const auto p = params(0.02, z, 2.0);
            CHECK(max_abs(rotfr_components_analytic(p, 4).components[0] - k1_closed(0.02, p.z())) < 1e-12);
            CHECK(max_abs(rotfr_components_bessel_matrix(p, 4).components[0] - k1_closed(0.02, p.z())) < 1e-12);
        }
    }
    SUBCASE("undriven limit")
    {
        const auto p = params(0.1, 0.0, 2.0);
        CHECK(max_abs(rotfr_components_analytic(p, 3).components[0] - driven_qubit_series<double>(0.1, 0, 0)[0]) < 1e-15);
    }
    SUBCASE("parity")
    {
        const auto s = rotfr_components_analytic(params(0.04, 1.3, 1.1), 9).components;
        // positions filled by even harmonics in the 4x4 layout
        const bool even_slot[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}};
        for (int n = 1; n <= 9; ++n) {
            CHECK(max_abs(s[-n] - ((n % 2) ? -1.0 : 1.0) * s[n]) < 1e-15);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    if (even_slot[i][j] == bool(n % 2)) CHECK(std::abs(s[n](i, j)) < 1e-15);
        }
    }
    SUBCASE("phase is rejected by the analytic route")
    {
        CHECK_THROWS_AS(rotfr_components_analytic(params(0.1, 1, 2, 0.5), 4), unsupported_drive);
        CHECK_THROWS_AS(rotfr_magnus1(params(0.1, 1, 2, 0.5)), unsupported_drive);
        CHECK_THROWS_AS(rotfr_magnus2(params(0.1, 1, 2, 0.5)), unsupported_drive);
    }
}

TEST_CASE("frame operator")
{
    const auto p = params(0.07, 1.2, 1.6);
    const double t = p.period();
    CHECK(max_abs(rotating_frame_operator(p, 0.0) - cmat::Identity(4, 4)) < 1e-14);
    CHECK(max_abs(rotating_frame_operator(p, 3 * t) - cmat::Identity(4, 4)) < 1e-12);
    for (double s : {0.1, 0.77, 2.3}) {
        const cmat lam = rotating_frame_operator(p, s);
        const auto sv = Eigen::JacobiSVD<cmat>(lam).singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) CHECK(std::abs(sv(i) - 1.0) < 1e-10);
        const double chi = p.drive_e / p.omega * std::sin(p.omega * s);
        const cmat u = cmat(cplx(0, -chi) * pauli<double>(0)).exp();
        CHECK(max_abs(lam - sandwich<double>(u, cmat(u.adjoint()))) < 1e-12);
    }
}

TEST_CASE("first-order rotating Magnus")
{
    SUBCASE("matches the zeroth component and the closed spectrum")
    {
        for (double z : {0.0, 0.5, 1.9158, 4.0, 9.0}) {
            const auto p = params(0.01, z, 2.0);
            const auto f = rotfr_magnus1_form(p);
            CHECK(max_abs(rotfr_magnus1(p).generator - rotfr_components_analytic(p, 4).components[0]) < 1e-14);
            const double j0 = bessel_j(0, z), j02 = bessel_j(0, 2 * z), g = p.gamma;
            const double mu = (3 + j02) / 4;
            const double root = std::sqrt(mu * mu + j0 * j0 - 0.5 * (1 + j02));
            std::vector<double> expect{g * (mu - root), g * (mu + root), g / 2 * (1 - j02)};
            std::sort(expect.begin(), expect.end());
            Eigen::SelfAdjointEigenSolver<cmat> es(f.kossakowski);
            for (int i = 0; i < 3; ++i) CHECK(std::abs(es.eigenvalues()(i) - expect[static_cast<size_t>(i)]) < 1e-12);
            CHECK(f.is_valid_lindblad());
        }
    }
    SUBCASE("undriven spectrum")
    {
        Eigen::SelfAdjointEigenSolver<cmat> es(rotfr_magnus1_form(params(0.3, 0, 2)).kossakowski);
        CHECK(std::abs(es.eigenvalues()(0)) < 1e-15);
        CHECK(std::abs(es.eigenvalues()(1)) < 1e-15);
        CHECK(std::abs(es.eigenvalues()(2) - 0.6) < 1e-15);
    }
    SUBCASE("third eigenvalue exceeds gamma/2 where J_0(2z) is minimal")
    {
        const auto f = rotfr_magnus1_form(params(1.0, 3.8317 / 2, 2.0));
        CHECK(f.kossakowski(2, 2).real() > 0.5);
    }
    SUBCASE("closer to the exact generator at high frequency")
    {
        const auto lo = params(0.01, 1.0, 1.0), hi = params(0.01, 1.0, 10.0);
        CHECK(frobenius_distance(rotfr_magnus1(hi).generator, exact_generator(hi)) <
              frobenius_distance(rotfr_magnus1(lo).generator, exact_generator(lo)));
    }
}

TEST_CASE("second-order rotating Magnus")
{
    const double e = 0.9, w = 2.4;
    const auto p = params(0.02, e, w);
    const double z = p.z(), j0 = bessel_j(0, z), j02 = bessel_j(0, 2 * z);
    const double nu = bessel_nu(z), nu2 = bessel_nu(2 * z);

    SUBCASE("matches the generic second-order formula")
    {
        const auto s = rotfr_components_analytic(p, rotating_n_max(z)).components;
        CHECK(max_abs(rotfr_magnus2(p).generator - magnus_order(s, w, 2, frame_tag::rotating).generator) < 1e-9);
    }
    SUBCASE("coherent part")
    {
        const auto h = superop_to_quasi_lindblad<double>(rotfr_magnus2(params(0.0, e, w)).generator).hamiltonian;
        CHECK(max_abs(h - j0 * (0.5 * pauli<double>(2) - nu / w * pauli<double>(0))) < 1e-13);
    }
    SUBCASE("dissipator to first order in gamma")
    {
        auto d_of = [&](double g) {
            return superop_to_quasi_lindblad<double>(rotfr_magnus2(params(g, e, w)).generator, 1e-9, 1e-9).kossakowski;
        };
        // The generator is quadratic in gamma, so three samples isolate the linear part exactly.
        const cmat d1 = (4.0 * d_of(0.25) - d_of(0.5) - 3.0 * d_of(0.0)) / 0.5;
        const double c = (nu * (1 + j02) + j0 * nu2) / w;
        cmat expect(3, 3);
        expect << 1, I * j0, c, -I * j0, 0.5 * (1 + j02), -4.0 * I / w * j0 * nu, c, 4.0 * I / w * j0 * nu,
            0.5 * (1 - j02);
        CHECK(max_abs(d1 - expect) < 1e-12);
    }
    SUBCASE("small z recovers the direct-frame drive term")
    {
        const double ee = 1e-3, ww = 2.0;
        const auto h = superop_to_quasi_lindblad<double>(rotfr_magnus2(params(0.0, ee, ww)).generator).hamiltonian;
        const double eps = ee / ww;
        CHECK(std::abs(h(0, 1).real() + eps / ww) < 1e-8);
    }
}

TEST_CASE("micromotion in the rotating frame")
{
    const auto p = params(0.01, 1.0, 2.5);
    const auto s = rotfr_components_analytic(p, rotating_n_max(p.z())).components;
    const double t = p.period();
    CHECK(max_abs(vanvleck_micromotion(s, p.omega, 1, t / 4) - cmat::Identity(4, 4)) < 1e-12);
    const auto g = micromotion_exponent(s, p.omega, 1);
    auto k1 = [&](double s0) {
        const cplx ph = std::polar(1.0, p.omega * s0);
        return (ph * g[1] + std::conj(ph) * g[-1]).norm();
    };
    CHECK(k1(t / 4) < 1e-14);
    for (int j = 1; j < 16; ++j) CHECK(k1(0.0) >= k1(t * j / 16.0) - 1e-15);
    CHECK(max_abs(vanvleck_micromotion(s, p.omega, 2, 0.4 + t) - vanvleck_micromotion(s, p.omega, 2, 0.4)) < 1e-10);
}

TEST_CASE("second-order van Vleck inside the lobe")
{
    const auto p = params(0.01, 1.0, 3.0);
    const auto s = rotfr_components_analytic(p, rotating_n_max(p.z())).components;
    const auto vv = vanvleck_floquet_generator(s, p.omega, 2, 0.0, frame_tag::rotating);
    CHECK(vv.frame == frame_tag::rotating);
    CHECK_FALSE(assess_generator(vv.generator).has_floquet_lindbladian);
    CHECK(assess_generator(vanvleck_keff(s, p.omega, 2).generator).has_floquet_lindbladian);
}

TEST_CASE("gauge transform")
{
    const auto p = params(0.05, 1.0, 1.8);
    const auto gen = driven_qubit(p);
    const double t = p.period();
    SUBCASE("identity leaves the generator unchanged")
    {
        auto id = [](double) -> cmat { return cmat::Identity(4, 4); };
        const auto out = gauge_transform(gen, id, id);
        for (double s : {0.0, 0.9, 2.2}) CHECK(max_abs(out.eval(s) - gen.eval(s)) < 1e-12);
    }
    SUBCASE("frame change removes the drive")
    {
        auto lam = [p](double s) { return rotating_frame_operator(p, s); };
        auto lam_inv = [p](double s) { return cmat(rotating_frame_operator(p, s).inverse()); };
        const auto out = gauge_transform(gen, lam, lam_inv);
        const auto comps = rotfr_components_analytic(p, rotating_n_max(p.z())).components;
        for (double s : {0.0, 0.4, 1.3, 3.0}) CHECK(max_abs(out.eval(s) - comps.evaluate(p.omega, s)) < 1e-8);
        const cmat pt = propagate(out, 0, t, 4000);
        CHECK(max_abs(lam(t) * pt * lam_inv(0) - propagate(gen, 0, t, 4000)) < 1e-8);
        CHECK(max_abs(pt - propagate(gen, 0, t, 4000)) < 1e-8);
    }
    SUBCASE("non-inverse pair is rejected")
    {
        auto a = [](double) -> cmat { return 2.0 * cmat::Identity(4, 4); };
        auto b = [](double) -> cmat { return cmat::Identity(4, 4); };
        CHECK_THROWS_AS(gauge_transform(gen, a, b), std::invalid_argument);
    }
}
