#include "floq/rotating_frame.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace floq {

double bessel_j(int n, double x)
{
    const int m = std::abs(n);
    double sign = (n < 0 && (m % 2)) ? -1.0 : 1.0;
    if (x < 0) {
        x = -x;
        if (m % 2) sign = -sign;
    }
    return sign * std::cyl_bessel_j(static_cast<double>(m), x);
}

int rotating_n_max(double z)
{
    const double x = 2.0 * std::abs(z);
    int n = std::max(4, static_cast<int>(std::ceil(x)));
    for (;; ++n) {
        bool small = true;
        for (int m = n; m < n + 4 && small; ++m) small = std::abs(bessel_j(m, x)) < 1e-17 && std::abs(bessel_j(m, x / 2)) < 1e-17;
        if (small) return n;
    }
}

double bessel_nu(double z)
{
    const int top = rotating_n_max(z) + 1;
    double acc = 0;
    for (int n = 1; n <= top; n += 2) acc += bessel_j(n, z) / n;
    return acc;
}

static lindblad_form analytic_component(double gamma, double z, int n)
{
    const double e = (n % 2 == 0) ? 1.0 : 0.0;
    const double o = 1.0 - e;
    const double delta = (n == 0) ? 1.0 : 0.0;
    const double jn = bessel_j(n, z);
    const double j2n = bessel_j(n, 2.0 * z);
    const cplx i(0, 1);
    lindblad_form f;
    f.hamiltonian = (jn / 2.0) * (e * pauli<double>(2) - i * o * pauli<double>(1));
    cmat d(3, 3);
    d << delta, i * e * jn, -o * jn,
         -i * e * jn, (delta + e * j2n) / 2.0, i * o * j2n / 2.0,
         o * jn, i * o * j2n / 2.0, (delta - e * j2n) / 2.0;
    f.kossakowski = gamma * d;
    return f;
}

rotating_frame_series rotfr_components_analytic(const model_params& p, int n_max)
{
    p.validate();
    if (p.phi != 0.0) throw unsupported_drive("rotfr_components_analytic: phi != 0, use the bessel-matrix route");
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    rotating_frame_series r;
    r.base = p;
    r.z = p.z();
    r.route = construction_route::analytic_qubit;
    r.components = fourier_series(n_max, 4);
    for (int n = -n_max; n <= n_max; ++n) r.components[n] = lindblad_to_superop<double>(analytic_component(p.gamma, r.z, n));
    return r;
}

namespace {

/// Eigendecomposition of the Hermitian A = i L_1 at phi = 0.
struct drive_spectrum {
    cmat u;
    Eigen::VectorXd a;
    cmat l0;

    explicit drive_spectrum(const model_params& p)
    {
        const auto s = driven_qubit_series<double>(p.gamma, p.drive_e, 0.0);
        l0 = s[0];
        const cmat amat = cplx(0, 1) * s[1];
        Eigen::SelfAdjointEigenSolver<cmat> es((amat + amat.adjoint()) / 2.0);
        u = es.eigenvectors();
        a = es.eigenvalues();
    }

    cmat apply(const std::function<cplx(double)>& f) const
    {
        Eigen::VectorXcd diag(a.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) diag(i) = f(a(i));
        return u * diag.asDiagonal() * u.adjoint();
    }

    /// exp(theta L_1) with L_1 = -i A.
    cmat frame(double theta) const
    {
        return apply([theta](double ai) { return std::polar(1.0, -theta * ai); });
    }
};

}  // namespace

rotating_frame_series rotfr_components_bessel_matrix(const model_params& p, int n_max)
{
    p.validate();
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    const drive_spectrum ds(p);
    const double w = p.omega;
    const int kmax = n_max + static_cast<int>(std::ceil(p.z())) + 20;

    std::vector<cmat> jp, jm;
    for (int k = -kmax - n_max; k <= kmax + n_max; ++k)
        jp.push_back(ds.apply([k, w](double ai) { return cplx(bessel_j(k, 2.0 * ai / w)); }));
    for (int k = -kmax; k <= kmax; ++k)
        jm.push_back(ds.apply([k, w](double ai) { return cplx(bessel_j(k, -2.0 * ai / w)); }));
    auto JP = [&](int k) -> const cmat& { return jp[static_cast<size_t>(k + kmax + n_max)]; };
    auto JM = [&](int k) -> const cmat& { return jm[static_cast<size_t>(k + kmax)]; };

    rotating_frame_series r;
    r.base = p;
    r.z = p.z();
    r.route = construction_route::bessel_matrix;
    r.components = fourier_series(n_max, 4);
    for (int n = -n_max; n <= n_max; ++n) {
        cmat acc = cmat::Zero(4, 4);
        for (int k = -kmax; k <= kmax; ++k) acc += JP(n - k) * ds.l0 * JM(k);
        const double tail = (JP(n - kmax) * ds.l0 * JM(kmax)).norm() + (JP(n + kmax) * ds.l0 * JM(-kmax)).norm();
        if (tail > 1e-12) {
            std::ostringstream os;
            os << "rotfr_components_bessel_matrix: k-sum tail " << tail << " too large";
            throw std::runtime_error(os.str());
        }
        r.components[n] = acc;
    }
    if (p.phi != 0.0) {
        // Lambda_phi(t) = Lambda_0(t - s) Lambda_0(-s)^-1 with s = phi/omega.
        const cmat s = ds.frame(2.0 * std::sin(-p.phi) / w);
        const cmat sinv = s.adjoint();
        for (int n = -n_max; n <= n_max; ++n)
            r.components[n] = std::polar(1.0, -n * p.phi) * s * r.components[n] * sinv;
    }
    return r;
}

cmat rotating_frame_operator(const model_params& p, double t)
{
    p.validate();
    const drive_spectrum ds(p);
    const double theta = 2.0 / p.omega * (std::sin(p.omega * t - p.phi) + std::sin(p.phi));
    return ds.frame(theta);
}

rotating_frame_series rotfr_components(const model_params& p, int n_max)
{
    return p.phi == 0.0 ? rotfr_components_analytic(p, n_max) : rotfr_components_bessel_matrix(p, n_max);
}

lindblad_form rotfr_magnus1_form(const model_params& p)
{
    p.validate();
    if (p.phi != 0.0) throw unsupported_drive("rotfr_magnus1: closed form holds at phi = 0");
    const double z = p.z();
    const double j0 = bessel_j(0, z);
    const double j02 = bessel_j(0, 2.0 * z);
    const cplx i(0, 1);
    lindblad_form f;
    f.hamiltonian = (j0 / 2.0) * pauli<double>(2);
    cmat d(3, 3);
    d << 1.0, i * j0, 0.0,
         -i * j0, (1.0 + j02) / 2.0, 0.0,
         0.0, 0.0, (1.0 - j02) / 2.0;
    f.kossakowski = p.gamma * d;
    return f;
}

expansion_result rotfr_magnus1(const model_params& p)
{
    expansion_result r;
    r.order = 1;
    r.frame = frame_tag::rotating;
    r.generator = lindblad_to_superop<double>(rotfr_magnus1_form(p));
    return r;
}

expansion_result rotfr_magnus2(const model_params& p)
{
    p.validate();
    if (p.phi != 0.0) throw unsupported_drive("rotfr_magnus2: closed form holds at phi = 0");
    const auto s = rotfr_components_analytic(p, rotating_n_max(p.z())).components;
    expansion_result r;
    r.order = 2;
    r.frame = frame_tag::rotating;
    r.generator = s[0];
    for (int n = 1; n <= s.n_max; n += 2)
        r.generator += 2.0 * commutator<double>(s[0], cplx(0, 1) * s[n]) / (n * p.omega);
    return r;
}

periodic_generator gauge_transform(const periodic_generator& gen, std::function<cmat(double)> d_of_t,
                                   std::function<cmat(double)> d_inv_of_t)
{
    for (int j = 0; j < 8; ++j) {
        const double t = gen.period * j / 8.0;
        const cmat prod = d_of_t(t) * d_inv_of_t(t);
        const double err = (prod - cmat::Identity(prod.rows(), prod.cols())).norm();
        if (err > 1e-10) {
            std::ostringstream os;
            os << "gauge_transform: D and D^-1 are not inverse at t = " << t << " (error " << err << ")";
            throw std::invalid_argument(os.str());
        }
    }
    periodic_generator out;
    out.period = gen.period;
    const double h = gen.period * 1e-5;
    auto base = gen.eval;
    out.eval = [base, d_of_t, d_inv_of_t, h](double t) -> cmat {
        const cmat d = d_of_t(t);
        const cmat dinv = d_inv_of_t(t);
        const cmat ddinv = (d_inv_of_t(t + h) - d_inv_of_t(t - h)) / (2.0 * h);
        return ddinv * d + dinv * base(t) * d;
    };
    return out;
}

}  // namespace floq
