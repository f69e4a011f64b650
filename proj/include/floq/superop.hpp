#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace floq {

template <class R> using cplx_t = std::complex<R>;
template <class R> using cmat_t = Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = std::complex<double>;
using cmat = cmat_t<double>;

inline constexpr double tol_herm = 1e-10;
inline constexpr double tol_tp = 1e-10;
/// Eigenvalues >= -tol_psd count as nonnegative.
inline constexpr double tol_psd = 1e-9;

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Superoperator does not map Hermitian operators to Hermitian operators.
/// `row`/`col` locate the first offending entry of the superoperator matrix.
struct hermiticity_error : std::domain_error {
    hermiticity_error(const std::string& what, int r, int c)
        : std::domain_error(what), row(r), col(c) {}
    int row, col;
};

struct trace_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// (H, d) with rho -> -i[H,rho] + sum d_nm (F_n rho F_m - 1/2 {F_m F_n, rho}),
/// F the traceless basis of `traceless_basis`.
template <class R> struct basic_lindblad_form {
    cmat_t<R> hamiltonian;
    cmat_t<R> kossakowski;

    int dim() const { return static_cast<int>(hamiltonian.rows()); }
    R min_kossakowski_eigenvalue() const;
    bool is_valid_lindblad(R tol = R(tol_psd)) const { return min_kossakowski_eigenvalue() >= -tol; }
};
using lindblad_form = basic_lindblad_form<double>;

/// Pauli matrix k in {0,1,2} = (x, y, z).
template <class R> cmat_t<R> pauli(int k);

/// Generalized Gell-Mann basis normalized to Tr(F_a F_b) = 2 delta_ab.
/// Ordered as symmetric/antisymmetric pairs for j<k, then diagonals;
/// for N=2 this is (sigma_x, sigma_y, sigma_z).
template <class R> std::vector<cmat_t<R>> traceless_basis(int n);

/// Row-major vectorization: rho(i,j) -> i*N + j, so vec(A rho B) = (A kron B^T) vec(rho).
template <class R> cmat_t<R> kron(const cmat_t<R>& a, const cmat_t<R>& b);
template <class R> cmat_t<R> left_mul(const cmat_t<R>& a);
template <class R> cmat_t<R> right_mul(const cmat_t<R>& b);
template <class R> cmat_t<R> sandwich(const cmat_t<R>& a, const cmat_t<R>& b);

template <class R> cmat_t<R> vectorize(const cmat_t<R>& rho);
template <class R> cmat_t<R> unvectorize(const cmat_t<R>& v, int n);

template <class R> cmat_t<R> commutator(const cmat_t<R>& a, const cmat_t<R>& b) { return a * b - b * a; }

/// Linear in (H, d), so non-Hermitian inputs (Fourier components) are accepted.
template <class R> cmat_t<R> lindblad_to_superop(const basic_lindblad_form<R>& form);

/// Inverse of lindblad_to_superop on Hermiticity-preserving, trace-annihilating
/// superoperators. d may come out indefinite.
template <class R>
basic_lindblad_form<R> superop_to_quasi_lindblad(const cmat_t<R>& s, R tol_herm_in = R(tol_herm),
                                                 R tol_tp_in = R(tol_tp));

/// Largest violation of S[(i,j),(k,l)] = conj(S[(j,i),(l,k)]); location via out params.
template <class R> R hermiticity_violation(const cmat_t<R>& s, int* row = nullptr, int* col = nullptr);

/// Closed-form commutator of two qubit Lindbladians in (h, d) coordinates.
lindblad_form lindblad_commutator(const lindblad_form& a, const lindblad_form& b);

double frobenius_distance(const cmat& a, const cmat& b);

/// Dimension N of the operator space a superoperator acts on.
int operator_dim(const cmat& s);

}  // namespace floq
