#include "floq/markovianity.hpp"
#include "floq/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace floq {

cmat spectral_decomposition::reconstruct() const
{
    Eigen::Index d = 0;
    if (!real_eigs.empty()) d = real_eigs.front().projector.rows();
    else if (!complex_pairs.empty()) d = complex_pairs.front().projector.rows();
    cmat out = cmat::Zero(d, d);
    for (const auto& r : real_eigs) out += r.lambda * r.projector;
    for (const auto& c : complex_pairs) out += c.lambda * c.projector + std::conj(c.lambda) * c.conj_projector;
    return out;
}

/// Splits a degenerate real group along the eigenvectors of the reference restricted to its range.
static void split_group(const real_eigenvalue& r, const cmat& reference, spectral_decomposition& dec)
{
    const Eigen::Index m = r.multiplicity;
    Eigen::ColPivHouseholderQR<cmat> qr(r.projector);
    const cmat v = (qr.householderQ() * cmat::Identity(r.projector.rows(), m)).eval();
    // v has orthonormal columns spanning the range, so w v = 1 and v w = projector.
    const cmat w = v.adjoint() * r.projector;
    Eigen::ComplexEigenSolver<cmat> es(w * reference * v);
    const Eigen::VectorXcd mu = es.eigenvalues();
    const cmat u = es.eigenvectors();
    const cmat ui = u.inverse();
    auto sub = [&](Eigen::Index k) -> cmat { return (v * u.col(k)) * (ui.row(k) * w); };

    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    std::vector<bool> used(static_cast<size_t>(m), false);
    real_eigenvalue rest{r.lambda, 0, cmat::Zero(r.projector.rows(), r.projector.cols())};
    for (Eigen::Index a = 0; a < m; ++a) {
        if (used[a]) continue;
        if (std::abs(mu(a).imag()) <= tol_pair * scale) {
            rest.projector += sub(a);
            ++rest.multiplicity;
            used[a] = true;
            continue;
        }
        if (mu(a).imag() < 0) continue;
        Eigen::Index partner = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index b = 0; b < m; ++b)
            if (!used[b] && b != a && mu(b).imag() < 0 && std::abs(mu(b) - std::conj(mu(a))) < best) {
                best = std::abs(mu(b) - std::conj(mu(a)));
                partner = b;
            }
        if (partner < 0 || best > 1e-6 * scale) {
            rest.projector += sub(a);
            ++rest.multiplicity;
            used[a] = true;
            continue;
        }
        used[a] = used[partner] = true;
        dec.complex_pairs.push_back({cplx(r.lambda, 0.0), sub(a), sub(partner)});
    }
    for (Eigen::Index a = 0; a < m; ++a)
        if (!used[a]) {
            rest.projector += sub(a);
            ++rest.multiplicity;
        }
    if (rest.multiplicity > 0) dec.real_eigs.push_back(std::move(rest));
}

spectral_decomposition spectral_decompose(const cmat& p, const cmat* reference)
{
    if (p.rows() != p.cols() || p.rows() == 0) throw dimension_error("spectral_decompose: matrix must be square");
    const Eigen::Index d = p.rows();
    Eigen::ComplexEigenSolver<cmat> es(p);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_decompose: eigensolver failed");
    const Eigen::VectorXcd lam = es.eigenvalues();
    const cmat v = es.eigenvectors();

    spectral_decomposition dec;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<cmat>(v).singularValues();
    dec.eigvec_condition = sv(0) / sv(d - 1);
    if (!(dec.eigvec_condition <= cond_max)) {
        Eigen::Index ia = 0, ib = 1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = a + 1; b < d; ++b)
                if (std::abs(lam(a) - lam(b)) < best) {
                    best = std::abs(lam(a) - lam(b));
                    ia = a;
                    ib = b;
                }
        std::ostringstream os;
        os << "eigenvector condition " << dec.eigvec_condition << " exceeds " << cond_max << "; eigenvalues "
           << lam(ia) << " and " << lam(ib) << " collide";
        throw degenerate_spectrum(os.str(), lam(ia), lam(ib));
    }
    const cmat w = v.inverse();
    auto proj = [&](Eigen::Index a) -> cmat { return v.col(a) * w.row(a); };

    std::vector<bool> used(static_cast<size_t>(d), false);
    for (Eigen::Index a = 0; a < d; ++a) {
        if (used[a]) continue;
        const cplx la = lam(a);
        if (std::abs(la.imag()) <= tol_pair * std::abs(la)) {
            real_eigenvalue r{la.real(), 1, proj(a)};
            used[a] = true;
            for (Eigen::Index b = a + 1; b < d; ++b) {
                if (used[b]) continue;
                const cplx lb = lam(b);
                if (std::abs(lb.imag()) <= tol_pair * std::abs(lb)
                    && std::abs(lb - la) <= tol_pair * std::max(std::abs(la), std::abs(lb))) {
                    r.projector += proj(b);
                    ++r.multiplicity;
                    used[b] = true;
                }
            }
            if (reference && r.multiplicity > 1) split_group(r, *reference, dec);
            else dec.real_eigs.push_back(std::move(r));
            continue;
        }
        if (la.imag() < 0) continue;
        Eigen::Index partner = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index b = 0; b < d; ++b) {
            if (used[b] || b == a || lam(b).imag() >= 0) continue;
            const double gap = std::abs(lam(b) - std::conj(la));
            if (gap <= tol_pair * std::abs(la) && gap < best) {
                best = gap;
                partner = b;
            }
        }
        if (partner < 0) {
            std::ostringstream os;
            os << "spectrum not closed under conjugation: no partner for " << la;
            throw std::domain_error(os.str());
        }
        used[a] = used[partner] = true;
        dec.complex_pairs.push_back({la, proj(a), proj(partner)});
    }
    for (Eigen::Index a = 0; a < d; ++a)
        if (!used[a]) {
            std::ostringstream os;
            os << "spectrum not closed under conjugation: no partner for " << lam(a);
            throw std::domain_error(os.str());
        }
    return dec;
}

cmat branch_log(const spectral_decomposition& dec, const std::vector<int>& x, double period)
{
    if (static_cast<int>(x.size()) != dec.n_c()) throw std::invalid_argument("branch_log: x must have n_c entries");
    double scale = 0;
    for (const auto& r : dec.real_eigs) scale = std::max(scale, std::abs(r.lambda));
    for (const auto& c : dec.complex_pairs) scale = std::max(scale, std::abs(c.lambda));

    Eigen::Index d = 0;
    if (!dec.real_eigs.empty()) d = dec.real_eigs.front().projector.rows();
    else if (!dec.complex_pairs.empty()) d = dec.complex_pairs.front().projector.rows();
    cmat k = cmat::Zero(d, d);

    for (const auto& r : dec.real_eigs) {
        if (std::abs(r.lambda) <= 1e-14 * scale) throw singular_map("branch_log: zero eigenvalue");
        if (r.lambda < 0) {
            std::ostringstream os;
            os << "negative real eigenvalue " << r.lambda << " with multiplicity " << r.multiplicity;
            if (r.multiplicity % 2 == 1) throw no_hermitian_log(os.str(), r.lambda);
            // Even multiplicity would need a split of the eigenspace into conjugate halves.
            throw degenerate_spectrum(os.str(), r.lambda, r.lambda);
        }
        k += std::log(r.lambda) * r.projector;
    }
    for (size_t c = 0; c < dec.complex_pairs.size(); ++c) {
        const auto& pr = dec.complex_pairs[c];
        const cplx l = std::log(pr.lambda);
        k += l * pr.projector + std::conj(l) * pr.conj_projector;
        // i omega x T = 2 pi i x before the overall division by T.
        if (x[c] != 0) k += cplx(0, two_pi * x[c]) * (pr.projector - pr.conj_projector);
    }
    return k / period;
}

bool is_hermiticity_preserving(const cmat& k, double tol) { return hermiticity_violation<double>(k) <= tol; }

cmat choi_matrix(const cmat& k)
{
    const int n = operator_dim(k);
    cmat c(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < n; ++b)
                for (int j = 0; j < n; ++j) c(a * n + i, b * n + j) = k(a * n + b, i * n + j);
    return c;
}

cmat conditional_cp_matrix(const cmat& k)
{
    int row = 0, col = 0;
    const double hv = hermiticity_violation<double>(k, &row, &col);
    if (hv > 1e-9) {
        std::ostringstream os;
        os << "conditional_cp_matrix: input is not Hermiticity preserving at (" << row << "," << col << ")";
        throw hermiticity_error(os.str(), row, col);
    }
    const int n = operator_dim(k);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n * n);
    for (int i = 0; i < n; ++i) phi(i * n + i) = 1.0 / std::sqrt(static_cast<double>(n));
    const cmat perp = cmat::Identity(n * n, n * n) - phi * phi.adjoint();
    const cmat m = perp * choi_matrix(k) * perp;
    return (m + m.adjoint()) / 2.0;
}

cmat depolarizing_generator(int n)
{
    Eigen::VectorXcd vi = Eigen::VectorXcd::Zero(n * n);
    for (int i = 0; i < n; ++i) vi(i * n + i) = 1.0;
    return vi * vi.transpose() / static_cast<double>(n) - cmat::Identity(n * n, n * n);
}

static double min_eig(const cmat& h)
{
    return Eigen::SelfAdjointEigenSolver<cmat>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double candidate_mu(const cmat& k)
{
    if (!k.allFinite() || !is_hermiticity_preserving(k)) return std::numeric_limits<double>::infinity();
    const cmat noise = depolarizing_generator(operator_dim(k));
    auto feasible = [&](double mu) { return min_eig(conditional_cp_matrix(k + mu * noise)) >= -tol_psd; };
    if (feasible(0.0)) return 0.0;
    double hi = 1.0;
    while (!feasible(hi)) {
        hi *= 2.0;
        if (hi > 1024.0) return std::numeric_limits<double>::infinity();
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > tol_mu) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

static int l1(const std::vector<int>& x)
{
    int s = 0;
    for (int v : x) s += std::abs(v);
    return s;
}

markovianity_verdict mu_min(const spectral_decomposition& dec, double period, int x_range, const cmat* reference)
{
    double best_dist = std::numeric_limits<double>::infinity();
    if (x_range < 1) throw std::invalid_argument("x_range must be >= 1");
    markovianity_verdict v;
    const int nc = dec.n_c();
    std::vector<int> x(static_cast<size_t>(nc), -x_range);
    bool first = true;
    while (true) {
        cmat k;
        try {
            k = branch_log(dec, x, period);
        } catch (const no_hermitian_log&) {
            v.no_hermitian_log_flag = true;
            v.has_floquet_lindbladian = false;
            v.mu_min = std::numeric_limits<double>::infinity();
            return v;
        }
        const double mu = candidate_mu(k);
        const double dist = reference ? frobenius_distance(k, *reference) : 0.0;
        const bool closer = dist < best_dist - 1e-9 || (dist <= best_dist + 1e-9 && l1(x) < l1(v.best_branch));
        if (first || mu < v.mu_min || (mu == v.mu_min && closer)) {
            v.mu_min = mu;
            best_dist = dist;
            v.best_branch = x;
            v.generator = k;
            first = false;
        }
        int c = 0;
        while (c < nc && x[static_cast<size_t>(c)] == x_range) x[static_cast<size_t>(c++)] = -x_range;
        if (c == nc) break;
        ++x[static_cast<size_t>(c)];
    }
    v.has_floquet_lindbladian = v.mu_min < tol_mu;
    if (std::isfinite(v.mu_min)) v.quasi_form = superop_to_quasi_lindblad<double>(v.generator, 1e-9, 1e-9);
    return v;
}

markovianity_verdict assess_map(const cmat& p, double period, int x_range, const cmat* reference)
{
    try {
        return mu_min(spectral_decompose(p, reference), period, x_range, reference);
    } catch (const degenerate_spectrum&) {
        markovianity_verdict v;
        v.degenerate_spectrum_flag = true;
        v.mu_min = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
}

markovianity_verdict assess_generator(const cmat& k)
{
    markovianity_verdict v;
    v.best_branch = {};
    v.generator = k;
    v.mu_min = candidate_mu(k);
    v.has_floquet_lindbladian = v.mu_min < tol_mu;
    if (std::isfinite(v.mu_min)) v.quasi_form = superop_to_quasi_lindblad<double>(k, 1e-9, 1e-9);
    return v;
}

}  // namespace floq
