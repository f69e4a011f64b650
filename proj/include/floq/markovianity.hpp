#pragma once

#include "floq/superop.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace floq {

inline constexpr double tol_mu = 1e-6;
inline constexpr double tol_pair = 1e-8;
inline constexpr double cond_max = 1e8;

/// Eigenvector matrix too ill-conditioned for a projector decomposition.
struct degenerate_spectrum : std::runtime_error {
    degenerate_spectrum(const std::string& what, cplx a, cplx b) : std::runtime_error(what), lambda_a(a), lambda_b(b) {}
    cplx lambda_a, lambda_b;
};

/// Negative real eigenvalue of odd multiplicity: no Hermiticity-preserving logarithm exists.
struct no_hermitian_log : std::domain_error {
    no_hermitian_log(const std::string& what, double l) : std::domain_error(what), lambda(l) {}
    double lambda;
};

struct singular_map : std::domain_error {
    using std::domain_error::domain_error;
};

struct real_eigenvalue {
    double lambda;
    int multiplicity;
    cmat projector;
};

/// lambda has positive imaginary part; conj_projector belongs to conj(lambda).
struct complex_pair {
    cplx lambda;
    cmat projector;
    cmat conj_projector;
};

struct spectral_decomposition {
    std::vector<real_eigenvalue> real_eigs;
    std::vector<complex_pair> complex_pairs;
    double eigvec_condition = 1.0;

    int n_r() const { return static_cast<int>(real_eigs.size()); }
    int n_c() const { return static_cast<int>(complex_pairs.size()); }
    cmat reconstruct() const;
};

/// With a reference generator, a real eigenvalue of multiplicity > 1 is split along the eigenvectors of
/// the reference compressed onto its eigenspace; conjugate pairs found there become complex pairs.
spectral_decomposition spectral_decompose(const cmat& p, const cmat* reference = nullptr);

/// K_x = K_0 + i omega sum_c x_c (P_c - P_c*), K_0 the principal logarithm over T.
cmat branch_log(const spectral_decomposition& dec, const std::vector<int>& x, double period);

bool is_hermiticity_preserving(const cmat& k, double tol = 1e-9);

/// Phi_perp K^Gamma Phi_perp with K^Gamma the Choi matrix N (K x 1)[|Phi><Phi|].
cmat conditional_cp_matrix(const cmat& k);

/// Choi matrix sum_ij K(E_ij) kron E_ij, laid out as C[(a N + i), (b N + j)] = K(E_ij)[a, b].
cmat choi_matrix(const cmat& k);

/// Generator of rho -> e^{-t} rho + (1 - e^{-t}) 1/N.
cmat depolarizing_generator(int n);

/// Smallest mu >= 0 with Phi_perp (K + mu N)^Gamma Phi_perp >= 0, by bisection.
/// +infinity when K is not Hermiticity preserving or no mu <= 2^10 works.
double candidate_mu(const cmat& k);

struct markovianity_verdict {
    bool has_floquet_lindbladian = false;
    std::vector<int> best_branch;
    double mu_min = std::numeric_limits<double>::infinity();
    cmat generator;
    lindblad_form quasi_form;
    bool degenerate_spectrum_flag = false;
    /// Set when the map has a negative real eigenvalue of odd multiplicity.
    bool no_hermitian_log_flag = false;
};

/// Ties in mu go to the branch closest to `reference` when given, then to the smallest |x|_1.
markovianity_verdict mu_min(const spectral_decomposition& dec, double period, int x_range = 5,
                            const cmat* reference = nullptr);

/// Decomposes p and runs mu_min; degenerate spectra come back flagged with NaN mu_min.
markovianity_verdict assess_map(const cmat& p, double period, int x_range = 5, const cmat* reference = nullptr);

/// Verdict for a single candidate generator, no branch scan.
markovianity_verdict assess_generator(const cmat& k);

}  // namespace floq
