#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "floq/markovianity.hpp"
#include "floq/propagator.hpp"
#include "test_util.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

using namespace floq;
using namespace floq::testing;

namespace {

const cplx I(0, 1);

model_params params(double gamma, double e, double omega, double phi = 0.0) { return {gamma, e, omega, phi}; }

cmat expm(const cmat& m) { return m.exp(); }

}  // namespace

TEST_CASE("driven qubit Fourier components")
{
    SUBCASE("phi = 0 drive is -i(E/2)[sigma_x, .] at n = +-1")
    {
        const double e = 1.3;
        const auto s = driven_qubit_series<double>(0.05, e, 0.0);
        const cmat sx = pauli<double>(0);
        const cmat expect = -I * (e / 2) * (left_mul<double>(sx) - right_mul<double>(sx));
        CHECK(s.n_max == 1);
        CHECK(max_abs(s[1] - expect) < 1e-15);
        CHECK(max_abs(s[-1] - expect) < 1e-15);
    }
    SUBCASE("phase enters as exp(-+ i phi)")
    {
        const double e = 0.4, phi = 0.9;
        const auto s0 = driven_qubit_series<double>(0.05, e, 0.0);
        const auto s = driven_qubit_series<double>(0.05, e, phi);
        CHECK(max_abs(s[1] - std::polar(1.0, -phi) * s0[1]) < 1e-15);
        CHECK(max_abs(s[-1] - std::polar(1.0, phi) * s0[-1]) < 1e-15);
    }
    SUBCASE("undriven model has only L_0")
    {
        const auto s = driven_qubit_series<double>(0.2, 0.0, 0.0);
        CHECK(max_abs(s[1]) == 0.0);
        CHECK(max_abs(s[-1]) == 0.0);
    }
    SUBCASE("L_0 matrix")
    {
        const double g = 0.07;
        cmat b = cmat::Zero(4, 4);
        b(0, 0) = -4 * g;
        b(1, 1) = -I - 2 * g;
        b(2, 2) = I - 2 * g;
        b(3, 0) = 4 * g;
        CHECK(max_abs(driven_qubit_series<double>(g, 0.5, 0.0)[0] - b) < 1e-15);
        CHECK(max_abs(lindblad_to_superop<double>(qubit_static_form<double>(g)) - b) < 1e-15);
    }
}

TEST_CASE("periodic generator invariants")
{
    const auto p = params(0.05, 0.8, 1.7, 0.4);
    const auto gen = driven_qubit(p);
    REQUIRE(gen.fourier.has_value());
    CHECK(gen.period == doctest::Approx(p.period()));
    for (int k = 0; k < 32; ++k) {
        const double t = gen.period * k / 32.0 + 0.013;
        CHECK(max_abs(gen.eval(t + gen.period) - gen.eval(t)) < 1e-12);
        CHECK(max_abs(gen.fourier->evaluate(p.omega, t) - gen.eval(t)) < 1e-12);
        CHECK(is_hermiticity_preserving(gen.eval(t), 1e-12));
    }
}

TEST_CASE("model parameter validation")
{
    CHECK_THROWS_AS(params(0.1, 1, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params(-0.1, 1, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(driven_qubit(params(0.1, 1, -2)), std::invalid_argument);
    CHECK_NOTHROW(params(0, 0, 1).validate());
}

TEST_CASE("static propagation")
{
    SUBCASE("coherent only")
    {
        const auto p = params(0.0, 0.0, 1.3);
        const double t = p.period();
        const cmat m = one_cycle_map(p);
        cmat expect = cmat::Zero(4, 4);
        expect(0, 0) = 1;
        expect(1, 1) = std::polar(1.0, -t);
        expect(2, 2) = std::polar(1.0, t);
        expect(3, 3) = 1;
        CHECK(max_abs(m - expect) < 1e-9);
        // Same map as conjugation by exp(-i sigma_z T/2).
        const cmat u = expm(cplx(0, -t / 2) * pauli<double>(2));
        CHECK(max_abs(m - sandwich<double>(u, cmat(u.adjoint()))) < 1e-9);
    }
    SUBCASE("matrix exponential oracle")
    {
        for (double g : {0.01, 0.3}) {
            const auto p = params(g, 0.0, 0.9);
            const cmat l0 = driven_qubit_series<double>(g, 0.0, 0.0)[0];
            CHECK(max_abs(one_cycle_map(p) - expm(l0 * p.period())) < 1e-9);
        }
    }
}

TEST_CASE("propagator structure")
{
    const auto p = params(0.1, 1.2, 1.1, 0.3);
    const auto gen = driven_qubit(p);
    const double t = p.period();
    const cmat full = propagate(gen, 0, t);

    SUBCASE("trace preservation")
    {
        for (int rep = 0; rep < 20; ++rep) {
            const cmat rho = random_density(2);
            const cmat out = unvectorize<double>(full * vectorize<double>(rho), 2);
            CHECK(std::abs(out.trace() - rho.trace()) < 1e-9);
        }
    }
    SUBCASE("composition")
    {
        const cmat a = propagate(gen, 0, t / 2, 4000);
        const cmat b = propagate(gen, t / 2, t, 4000);
        CHECK(max_abs(propagate(gen, 0, t, 4000) - b * a) < 1e-9);
    }
    SUBCASE("conjugation-closed spectrum")
    {
        Eigen::ComplexEigenSolver<cmat> es(full);
        const auto ev = es.eigenvalues();
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) - std::conj(ev(i))));
            CHECK(best < 1e-8);
        }
    }
    SUBCASE("unitary for gamma = 0")
    {
        const cmat u = one_cycle_map(params(0.0, 1.2, 1.1, 0.3));
        Eigen::ComplexEigenSolver<cmat> es(u);
        for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-9);
    }
    SUBCASE("fourth-order convergence")
    {
        const cmat fine = propagate(gen, 0, t, 6400);
        const double e1 = (propagate(gen, 0, t, 100) - fine).norm();
        const double e2 = (propagate(gen, 0, t, 200) - fine).norm();
        CHECK(e1 / e2 >= 8.0);
    }
    SUBCASE("argument checks")
    {
        CHECK_THROWS_AS(propagate(gen, 0, t, 99), std::invalid_argument);
        CHECK_THROWS_AS(propagate(gen, 1, 0), std::invalid_argument);
    }
}

TEST_CASE("non-finite generator reports the time")
{
    periodic_generator gen;
    gen.period = 1.0;
    gen.eval = [](double t) -> cmat {
        cmat m = cmat::Zero(4, 4);
        if (t > 0.5) m(0, 0) = std::numeric_limits<double>::quiet_NaN();
        return m;
    };
    try {
        propagate(gen, 0, 1, 200);
        FAIL("expected integration_error");
    } catch (const integration_error& e) {
        CHECK(e.t > 0.49);
        CHECK(e.t < 0.51);
    }
}

TEST_CASE("one-cycle map and the initial time")
{
    const auto p = params(0.05, 1.0, 1.4);
    const double t = p.period();
    CHECK(max_abs(one_cycle_map(p) - propagate(driven_qubit(p), 0, t)) == 0.0);
    CHECK(max_abs(one_cycle_map(p, t) - one_cycle_map(p, 0)) < 1e-9);

    SUBCASE("phase shift equals initial-time shift")
    {
        for (double phi : {0.3, 1.2, M_PI / 2, 2.5}) {
            auto pp = p;
            pp.phi = phi;
            const double t0 = std::fmod(t - phi * t / two_pi, t);
            CHECK(max_abs(one_cycle_map(pp) - one_cycle_map(p, t0)) < 1e-8);
        }
    }
    SUBCASE("verdicts agree under the phase/initial-time shift")
    {
        for (double phi : {0.4, M_PI / 2, 2.0}) {
            auto pp = p;
            pp.phi = phi;
            const auto a = assess_map(one_cycle_map(pp), t);
            const auto b = assess_map(one_cycle_map(p, t - phi * t / two_pi), t);
            CHECK(std::abs(a.mu_min - b.mu_min) < 1e-6);
            CHECK(a.has_floquet_lindbladian == b.has_floquet_lindbladian);
        }
    }
    SUBCASE("quarter-period shift is sign symmetric")
    {
        // t0 and t0 + T/2 differ by E -> -E, which sigma_z conjugation undoes.
        auto pp = p;
        pp.phi = M_PI / 2;
        const auto a = assess_map(one_cycle_map(pp), t);
        const auto b = assess_map(one_cycle_map(p, t / 4), t);
        CHECK(std::abs(a.mu_min - b.mu_min) < 1e-6);
    }
}

TEST_CASE("discrete Fourier components")
{
    SUBCASE("driven qubit")
    {
        const auto p = params(0.05, 0.9, 2.2, 0.7);
        const auto gen = driven_qubit(p);
        const auto dft = fourier_components(gen, 3, 13);
        for (int n = -3; n <= 3; ++n) {
            const cmat expect = std::abs(n) <= 1 ? (*gen.fourier)[n] : cmat::Zero(4, 4);
            CHECK(max_abs(dft[n] - expect) < 1e-12);
        }
    }
    SUBCASE("constant generator")
    {
        const cmat l = lindblad_to_superop<double>(random_form(2));
        const auto dft = fourier_components(constant_generator(l, 2.0), 4, 17);
        CHECK(max_abs(dft[0] - l) < 1e-13);
        for (int n = 1; n <= 4; ++n) {
            CHECK(max_abs(dft[n]) < 1e-13);
            CHECK(max_abs(dft[-n]) < 1e-13);
        }
    }
    SUBCASE("aliasing guard")
    {
        CHECK_THROWS_AS(fourier_components(driven_qubit(params(0.1, 1, 1)), 3, 12), std::invalid_argument);
    }
}
