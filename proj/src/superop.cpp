#include "floq/superop.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace floq {

template <class R> R basic_lindblad_form<R>::min_kossakowski_eigenvalue() const
{
    if (kossakowski.size() == 0) return R(0);
    cmat_t<R> h = (kossakowski + kossakowski.adjoint()) / R(2);
    Eigen::SelfAdjointEigenSolver<cmat_t<R>> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

template <class R> cmat_t<R> pauli(int k)
{
    using C = cplx_t<R>;
    cmat_t<R> m = cmat_t<R>::Zero(2, 2);
    switch (k) {
    case 0: m(0, 1) = m(1, 0) = C(1); break;
    case 1: m(0, 1) = C(0, -1); m(1, 0) = C(0, 1); break;
    case 2: m(0, 0) = C(1); m(1, 1) = C(-1); break;
    default: throw std::out_of_range("pauli index must be 0, 1 or 2");
    }
    return m;
}

template <class R> std::vector<cmat_t<R>> traceless_basis(int n)
{
    using C = cplx_t<R>;
    if (n < 2) throw dimension_error("traceless basis needs N >= 2");
    std::vector<cmat_t<R>> out;
    out.reserve(static_cast<size_t>(n * n - 1));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            cmat_t<R> s = cmat_t<R>::Zero(n, n), a = cmat_t<R>::Zero(n, n);
            s(j, k) = s(k, j) = C(1);
            a(j, k) = C(0, -1);
            a(k, j) = C(0, 1);
            out.push_back(s);
            out.push_back(a);
        }
    // Diagonal l has l+1 ones followed by -(l+1), scaled to Tr(F^2) = 2.
    for (int l = 0; l + 1 < n; ++l) {
        cmat_t<R> d = cmat_t<R>::Zero(n, n);
        R scale = std::sqrt(R(2) / R((l + 1) * (l + 2)));
        for (int i = 0; i <= l; ++i) d(i, i) = C(scale);
        d(l + 1, l + 1) = C(-scale * R(l + 1));
        out.push_back(d);
    }
    // For N=2 the pair loop yields (x, y) and the diagonal loop z; reorder is not needed.
    return out;
}

template <class R> cmat_t<R> kron(const cmat_t<R>& a, const cmat_t<R>& b)
{
    cmat_t<R> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <class R> cmat_t<R> left_mul(const cmat_t<R>& a)
{
    return kron<R>(a, cmat_t<R>::Identity(a.rows(), a.cols()));
}

template <class R> cmat_t<R> right_mul(const cmat_t<R>& b)
{
    return kron<R>(cmat_t<R>::Identity(b.rows(), b.cols()), b.transpose());
}

template <class R> cmat_t<R> sandwich(const cmat_t<R>& a, const cmat_t<R>& b)
{
    return kron<R>(a, b.transpose());
}

template <class R> cmat_t<R> vectorize(const cmat_t<R>& rho)
{
    const Eigen::Index n = rho.rows();
    cmat_t<R> v(n * rho.cols(), 1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j, 0) = rho(i, j);
    return v;
}

template <class R> cmat_t<R> unvectorize(const cmat_t<R>& v, int n)
{
    if (v.size() != n * n) throw dimension_error("unvectorize: length is not N^2");
    cmat_t<R> rho(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
    return rho;
}

template <class R> cmat_t<R> lindblad_to_superop(const basic_lindblad_form<R>& form)
{
    using C = cplx_t<R>;
    const int n = form.dim();
    const int m = n * n - 1;
    if (form.hamiltonian.cols() != n || form.kossakowski.rows() != m || form.kossakowski.cols() != m) {
        std::ostringstream os;
        os << "lindblad_to_superop: hamiltonian is " << form.hamiltonian.rows() << "x"
           << form.hamiltonian.cols() << " but kossakowski is " << form.kossakowski.rows() << "x"
           << form.kossakowski.cols() << " (expected " << m << "x" << m << ")";
        throw dimension_error(os.str());
    }
    const C mi(0, -1);
    cmat_t<R> s = mi * (left_mul<R>(form.hamiltonian) - right_mul<R>(form.hamiltonian));
    const auto f = traceless_basis<R>(n);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const C dab = form.kossakowski(a, b);
            if (dab == C(0)) continue;
            const cmat_t<R> ff = f[b] * f[a];
            s += dab * (sandwich<R>(f[a], f[b]) - R(0.5) * (left_mul<R>(ff) + right_mul<R>(ff)));
        }
    return s;
}

int operator_dim(const cmat& s)
{
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
    if (n * n != s.rows() || s.rows() != s.cols()) throw dimension_error("superoperator is not N^2 x N^2");
    return n;
}

template <class R> static int sdim(const cmat_t<R>& s)
{
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
    if (n * n != s.rows() || s.rows() != s.cols()) throw dimension_error("superoperator is not N^2 x N^2");
    return n;
}

template <class R> R hermiticity_violation(const cmat_t<R>& s, int* row, int* col)
{
    const int n = sdim<R>(s);
    R worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const R e = std::abs(s(i * n + j, k * n + l) - std::conj(s(j * n + i, l * n + k)));
                    if (e > worst) {
                        worst = e;
                        if (row) *row = i * n + j;
                        if (col) *col = k * n + l;
                    }
                }
    return worst;
}

template <class R>
basic_lindblad_form<R> superop_to_quasi_lindblad(const cmat_t<R>& s, R tol_herm_in, R tol_tp_in)
{
    using C = cplx_t<R>;
    const int n = sdim<R>(s);
    const int m = n * n - 1;

    int row = 0, col = 0;
    const R hv = hermiticity_violation<R>(s, &row, &col);
    if (hv > tol_herm_in) {
        std::ostringstream os;
        os << "superoperator is not Hermiticity preserving: entry (" << row << "," << col
           << ") differs from its mirror by " << static_cast<double>(hv);
        throw hermiticity_error(os.str(), row, col);
    }

    // S = sum_ab c_ab B_a kron conj(B_b) with B_0 = I and B_i = F_i.
    std::vector<cmat_t<R>> b;
    b.push_back(cmat_t<R>::Identity(n, n));
    for (auto& f : traceless_basis<R>(n)) b.push_back(f);
    std::vector<R> norm(static_cast<size_t>(m + 1), R(2));
    norm[0] = R(n);

    cmat_t<R> c(m + 1, m + 1);
    for (int a = 0; a <= m; ++a)
        for (int bb = 0; bb <= m; ++bb) {
            const cmat_t<R> e = kron<R>(b[a], b[bb].conjugate());
            c(a, bb) = (e.adjoint() * s).trace() / (norm[a] * norm[bb]);
        }

    basic_lindblad_form<R> out;
    out.kossakowski = c.bottomRightCorner(m, m);
    cmat_t<R> k = c(0, 0) / R(2) * b[0];
    for (int i = 1; i <= m; ++i) k += c(i, 0) * b[i];

    cmat_t<R> h = C(0, 1) * (k - k.adjoint()) / R(2);
    h -= (h.trace() / R(n)) * cmat_t<R>::Identity(n, n);
    out.hamiltonian = h;

    cmat_t<R> residue = k + k.adjoint();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) residue += out.kossakowski(i, j) * b[j + 1] * b[i + 1];
    const R res = residue.norm();
    if (res > tol_tp_in) {
        std::ostringstream os;
        os << "superoperator is not trace preserving: residue norm " << static_cast<double>(res);
        throw trace_error(os.str());
    }
    return out;
}

lindblad_form lindblad_commutator(const lindblad_form& a, const lindblad_form& b)
{
    if (a.dim() != 2 || b.dim() != 2)
        throw dimension_error("lindblad_commutator: closed form exists only for N=2");

    static const int eps[3][3][3] = {
        {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
        {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
        {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
    };
    double h1[3], h2[3];
    for (int k = 0; k < 3; ++k) {
        h1[k] = 0.5 * (a.hamiltonian * pauli<double>(k)).trace().real();
        h2[k] = 0.5 * (b.hamiltonian * pauli<double>(k)).trace().real();
    }
    const cmat& d1 = a.kossakowski;
    const cmat& d2 = b.kossakowski;

    double hout[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k)
        for (int q = 0; q < 3; ++q)
            for (int l = 0; l < 3; ++l) hout[l] += 2.0 * eps[k][q][l] * h1[k] * h2[q];
    for (int nn = 0; nn < 3; ++nn)
        for (int mm = 0; mm < 3; ++mm)
            for (int q = 0; q < 3; ++q) {
                if (eps[nn][mm][q] == 0) continue;
                for (int k = 0; k < 3; ++k)
                    hout[q] -= 2.0 * eps[nn][mm][q] * d1(nn, k).real() * d2(mm, k).real();
            }

    cmat d = cmat::Zero(3, 3);
    for (int nn = 0; nn < 3; ++nn)
        for (int mm = 0; mm < 3; ++mm) {
            double diss = 0;
            for (int k = 0; k < 3; ++k) diss += (d1(nn, k) * d2(mm, k) - d1(mm, k) * d2(nn, k)).imag();
            cplx cd = 0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    cd += (d1(l, mm) * h2[k] - d2(l, mm) * h1[k]) * double(eps[k][nn][l])
                          + (d1(nn, l) * h2[k] - d2(nn, l) * h1[k]) * double(eps[k][mm][l]);
            d(nn, mm) = cplx(0, 2.0 * diss) + 2.0 * cd;
        }

    lindblad_form out;
    out.hamiltonian = cmat::Zero(2, 2);
    for (int q = 0; q < 3; ++q) out.hamiltonian += hout[q] * pauli<double>(q);
    out.kossakowski = d;
    return out;
}

double frobenius_distance(const cmat& a, const cmat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw dimension_error("frobenius_distance: shape mismatch");
    return (a - b).norm();
}

#define FLOQ_INSTANTIATE(R)                                                                          \
    template struct basic_lindblad_form<R>;                                                          \
    template cmat_t<R> pauli<R>(int);                                                                \
    template std::vector<cmat_t<R>> traceless_basis<R>(int);                                         \
    template cmat_t<R> kron<R>(const cmat_t<R>&, const cmat_t<R>&);                                  \
    template cmat_t<R> left_mul<R>(const cmat_t<R>&);                                                \
    template cmat_t<R> right_mul<R>(const cmat_t<R>&);                                               \
    template cmat_t<R> sandwich<R>(const cmat_t<R>&, const cmat_t<R>&);                              \
    template cmat_t<R> vectorize<R>(const cmat_t<R>&);                                               \
    template cmat_t<R> unvectorize<R>(const cmat_t<R>&, int);                                        \
    template cmat_t<R> lindblad_to_superop<R>(const basic_lindblad_form<R>&);                        \
    template basic_lindblad_form<R> superop_to_quasi_lindblad<R>(const cmat_t<R>&, R, R);            \
    template R hermiticity_violation<R>(const cmat_t<R>&, int*, int*);

FLOQ_INSTANTIATE(double)
FLOQ_INSTANTIATE(long double)

#undef FLOQ_INSTANTIATE

}  // namespace floq
