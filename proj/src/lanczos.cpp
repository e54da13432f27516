#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "isvp/spectrum.hpp"

namespace isvp {

// Thick-restart Lanczos with full reorthogonalization. The projected matrix is
// rebuilt from the orthogonalization coefficients, so after a restart the
// arrowhead coupling between kept Ritz vectors and the new residual direction
// is picked up without special bookkeeping.
std::vector<double> lanczos_lowest(const std::function<void(std::span<const double>, std::span<double>)>& op,
                                   std::size_t dim, std::size_t count, const EigenOptions& opts) {
    if (count == 0 || count > dim) throw std::invalid_argument("lanczos: bad eigenvalue count");
    const std::size_t kmax = std::min(dim, std::max(opts.krylov_dim, 2 * count + 20));
    const std::size_t keep = std::max(count + 4, kmax / 2);

    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(kmax));
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kmax), static_cast<Eigen::Index>(kmax));
    Eigen::VectorXd w(n);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = gauss(rng);
    v.col(0) = start.normalized();

    auto orthogonalize = [&](Eigen::VectorXd& x, Eigen::Index upto) {
        Eigen::VectorXd coef = Eigen::VectorXd::Zero(upto);
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd c = v.leftCols(upto).transpose() * x;
            x -= v.leftCols(upto) * c;
            coef += c;
        }
        return coef;
    };

    std::size_t j0 = 0;
    std::vector<double> residuals(count, 0.0);
    for (std::size_t restart = 0; restart <= opts.max_restarts; ++restart) {
        double beta = 0.0;
        std::size_t filled = kmax;
        for (std::size_t j = j0; j < kmax; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            op(std::span<const double>(v.col(jj).data(), dim), std::span<double>(w.data(), dim));
            const Eigen::VectorXd c = orthogonalize(w, jj + 1);
            for (Eigen::Index i = 0; i <= jj; ++i) t(i, jj) = t(jj, i) = c(i);
            beta = w.norm();
            if (j + 1 == kmax) break;
            if (beta < 1e-12 * std::max(1.0, t.topLeftCorner(jj + 1, jj + 1).norm())) {
                // Invariant subspace; the projected spectrum is exact.
                filled = j + 1;
                beta = 0.0;
                break;
            }
            v.col(jj + 1) = w / beta;
        }

        const auto f = static_cast<Eigen::Index>(filled);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(f, f));
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& y = es.eigenvectors();

        if (filled < count)
            throw ConvergenceError("lanczos: Krylov space exhausted below requested count", {});

        bool done = true;
        for (std::size_t i = 0; i < count; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            residuals[i] = beta * std::abs(y(f - 1, ii));
            if (residuals[i] > opts.tol * std::max(1.0, std::abs(theta(ii)))) done = false;
        }
        if (done || filled < kmax) return std::vector<double>(theta.data(), theta.data() + count);

        // Thick restart: keep the lowest Ritz vectors plus the residual direction.
        const auto k = static_cast<Eigen::Index>(std::min(keep, kmax - 1));
        const Eigen::MatrixXd kept = v.leftCols(f) * y.leftCols(k);
        v.leftCols(k) = kept;
        t.setZero();
        for (Eigen::Index i = 0; i < k; ++i) t(i, i) = theta(i);
        // Re-orthogonalize the residual against the rotated basis for safety.
        orthogonalize(w, k);
        const double rn = w.norm();
        if (rn == 0.0) return std::vector<double>(theta.data(), theta.data() + count);
        v.col(k) = w / rn;
        j0 = static_cast<std::size_t>(k);
    }

    std::string msg = "lanczos did not converge; residuals:";
    for (double r : residuals) msg += " " + std::to_string(r);
    throw ConvergenceError(msg, residuals);
}

}  // namespace isvp
