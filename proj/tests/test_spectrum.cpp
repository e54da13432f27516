#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "isvp/spectrum.hpp"

using namespace isvp;

namespace {

// Reference dense H(s) built from the Pauli definition, independent of the library.
Eigen::MatrixXd reference_dense(const ProblemDiagonal& d, double h0, double s) {
    const std::size_t dim = d.values.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = s * static_cast<double>(d.values[i]);
        for (std::size_t q = 0; q < d.n_qubits; ++q)
            m(static_cast<Eigen::Index>(i ^ (1ULL << q)), static_cast<Eigen::Index>(i)) -= (1 - s) * h0;
    }
    return m;
}

ProblemDiagonal random_diagonal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> v(0, 40);
    ProblemDiagonal d{n, {}};
    for (std::size_t i = 0; i < (1ULL << n); ++i) d.values.push_back(v(rng));
    return d;
}

std::vector<Complex> random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> psi(dim);
    for (auto& z : psi) z = {g(rng), g(rng)};
    return psi;
}

IsingModel small_model(QuditFamily fam, int lo, int hi, std::uint64_t seed = 3) {
    return compile(gram(generate_instance(2, seed).bad_basis()), QuditEncoding::from_range(fam, lo, hi));
}

long binom(long n, long k) {
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST(ProblemDiagonal, MatchesModelEnergies) {
    const auto model = small_model(QuditFamily::Binary, -2, 1);
    const auto d = problem_diagonal(model);
    ASSERT_EQ(d.values.size(), 1u << model.n_qubits());
    for (std::size_t c = 0; c < d.values.size(); ++c)
        EXPECT_EQ(mpq_class(d.values[c]), model.energy(spins_from_index(c, model.n_qubits())));
}

TEST(ApplyHamiltonian, EndpointsOnExamples) {
    const auto d = random_diagonal(3, 1);
    const auto psi = random_state(8, 2);
    const auto at1 = apply_hamiltonian(d, DriverSpec{1.0}, 1.0, psi);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(at1[i] - static_cast<double>(d.values[i]) * psi[i]), 0, 1e-12);
    const std::vector<Complex> uniform(8, Complex(1.0 / std::sqrt(8.0)));
    const auto at0 = apply_hamiltonian(d, DriverSpec{0.5}, 0.0, uniform);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(at0[i] + 0.5 * 3 * uniform[i]), 0, 1e-12);
}

TEST(ApplyHamiltonian, RejectsBadInput) {
    const auto d = random_diagonal(2, 1);
    const std::vector<Complex> psi(4);
    EXPECT_THROW(apply_hamiltonian(d, DriverSpec{1.0}, 1.5, psi), std::invalid_argument);
    EXPECT_THROW(apply_hamiltonian(d, DriverSpec{1.0}, 0.5, std::vector<Complex>(3)), std::invalid_argument);
    EXPECT_THROW(apply_hamiltonian(d, DriverSpec{0.0}, 0.5, psi), std::invalid_argument);
    EXPECT_THROW(SweepHamiltonian::full(ProblemDiagonal{2, {1, 2, 3}}, DriverSpec{}), std::invalid_argument);
}

TEST(ApplyHamiltonian, MatchesDenseReferenceAndIsHermitian) {
    for (std::size_t n = 1; n <= 10; n += 3) {
        const auto d = random_diagonal(n, n);
        const auto h = SweepHamiltonian::full(d, DriverSpec{0.7});
        const std::size_t dim = h.dim();
        for (double s : {0.0, 0.3, 0.77, 1.0}) {
            const auto ref = reference_dense(d, 0.7, s);
            EXPECT_LE((h.dense(s) - ref).cwiseAbs().maxCoeff(), 1e-12);
            const auto psi = random_state(dim, 10 + n);
            const auto phi = random_state(dim, 20 + n);
            std::vector<Complex> hpsi(dim), hphi(dim);
            h.apply(s, psi, hpsi);
            h.apply(s, phi, hphi);
            Complex a = 0, b = 0;
            double err = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                a += std::conj(phi[i]) * hpsi[i];
                b += std::conj(hphi[i]) * psi[i];
                Complex r = 0;
                for (std::size_t k = 0; k < dim; ++k)
                    r += ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * psi[k];
                err = std::max(err, std::abs(r - hpsi[i]));
            }
            EXPECT_LE(err, 1e-12 * (1 + std::abs(a)));
            EXPECT_LE(std::abs(a - b), 1e-10 * (1 + std::abs(a)));
        }
    }
}

TEST(LowSpectrum, DriverSpectrumIsBinomialLadder) {
    const std::size_t n = 6;
    const auto d = random_diagonal(n, 5);
    const double h0 = 1.3;
    const auto ev = low_spectrum(d, DriverSpec{h0}, 0.0, 1u << n);
    std::size_t pos = 0;
    for (std::size_t w = 0; w <= n; ++w) {
        const double want = -h0 * (static_cast<double>(n) - 2.0 * static_cast<double>(w));
        for (long k = 0; k < binom(n, static_cast<long>(w)); ++k) EXPECT_NEAR(ev[pos++], want, 1e-10);
    }
}

TEST(LowSpectrum, ProblemEndpointIsDiagonal) {
    const auto model = small_model(QuditFamily::Binary, -2, 1);
    const auto d = problem_diagonal(model);
    auto sorted = d.values;
    std::sort(sorted.begin(), sorted.end());
    const auto ev = low_spectrum(d, DriverSpec{}, 1.0, 5);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(ev[i], static_cast<double>(sorted[i]), 1e-10);
    EXPECT_EQ(sorted[0], 0);
    EXPECT_THROW(low_spectrum(d, DriverSpec{}, 0.5, 0), std::invalid_argument);
    EXPECT_THROW(low_spectrum(d, DriverSpec{}, 0.5, d.values.size() + 1), std::invalid_argument);
}

TEST(LowSpectrum, LanczosAgreesWithDense) {
    const auto d = random_diagonal(9, 7);
    const auto h = SweepHamiltonian::full(d, DriverSpec{1.0});
    EigenOptions krylov;
    krylov.dense_limit = 16;
    for (double s : {0.1, 0.5, 0.9}) {
        const auto dense = low_spectrum(h, s, 3);
        const auto iter = low_spectrum(h, s, 3, krylov);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(iter[i], dense[i], 1e-7 * (1 + std::abs(dense[i])));
    }
}

TEST(DistinctLevels, Examples) {
    const std::vector<std::int64_t> v{5, 0, 3, 0, 5, 9};
    EXPECT_EQ(distinct_levels(v, 2), (std::vector<std::int64_t>{0, 3}));
    EXPECT_EQ(distinct_levels(v, 10), (std::vector<std::int64_t>{0, 3, 5, 9}));
}

TEST(GapScan, SingleQubitMatchesClosedForm) {
    // Diagonal (1, 0) with driver -h0 X: eigenvalues s/2 +- sqrt(s^2/4 + (1-s)^2 h0^2).
    const double h0 = 0.8;
    const auto h = SweepHamiltonian::full(ProblemDiagonal{1, {1, 0}}, DriverSpec{h0});
    const auto p = gap_scan(h, 41);
    ASSERT_EQ(p.s_grid.size(), 41u);
    for (std::size_t k = 0; k < p.s_grid.size(); ++k) {
        const double s = p.s_grid[k];
        const double want = 2.0 * std::sqrt(s * s / 4.0 + (1 - s) * (1 - s) * h0 * h0);
        EXPECT_NEAR(p.gaps[k], want, 1e-9);
        EXPECT_NEAR(p.e0[k], s / 2 - want / 2, 1e-9);
    }
    // Minimum of s^2/4 + (1-s)^2 h0^2.
    const double s_star = h0 * h0 / (0.25 + h0 * h0);
    EXPECT_NEAR(p.min_s, s_star, 1e-5);
    EXPECT_NEAR(p.min_gap, 2.0 * std::sqrt(s_star * s_star / 4 + (1 - s_star) * (1 - s_star) * h0 * h0), 1e-9);
    EXPECT_THROW(gap_scan(h, 2), std::invalid_argument);
}

TEST(GapScan, EndpointsAreExact) {
    const auto model = small_model(QuditFamily::Binary, -2, 1);
    const auto h = SweepHamiltonian::full(model, DriverSpec{1.0});
    const auto p = gap_scan(h, 11);
    EXPECT_NEAR(p.gaps.front(), 2.0, 1e-9);
    const auto lv = distinct_levels(h.diagonal(), 2);
    EXPECT_NEAR(p.gaps.back(), static_cast<double>(lv[1] - lv[0]), 1e-9);
}

TEST(GapScan, RefinementNeverRaisesTheMinimum) {
    const auto model = small_model(QuditFamily::Binary, -2, 1, 5);
    const auto h = SweepHamiltonian::full(model, DriverSpec{1.0});
    GapScanOptions coarse_opts;
    coarse_opts.refine = false;
    const auto coarse = gap_scan(h, 11, coarse_opts);
    const auto fine = gap_scan(h, 21, coarse_opts);  // contains every coarse point
    const auto refined = gap_scan(h, 11);
    EXPECT_LE(fine.min_gap, coarse.min_gap + 1e-12);
    EXPECT_LE(refined.min_gap, coarse.min_gap + 1e-12);
}

TEST(Sector, DimensionsAndDecoding) {
    const auto model = small_model(QuditFamily::Hamming, -2, 2);
    const auto h = SweepHamiltonian::qudit_symmetric(model, DriverSpec{1.0});
    EXPECT_EQ(h.space(), SweepSpace::QuditSymmetric);
    EXPECT_EQ(h.dim(), 25u);
    EXPECT_EQ(h.ladder_sizes(), (std::vector<std::size_t>{5, 5}));
    double total = 0;
    for (std::size_t i = 0; i < h.dim(); ++i) total += h.multiplicity(i);
    EXPECT_DOUBLE_EQ(total, 256.0);
    EXPECT_EQ(SweepHamiltonian::for_model(model, DriverSpec{}).space(), SweepSpace::QuditSymmetric);
    EXPECT_EQ(SweepHamiltonian::for_model(small_model(QuditFamily::Binary, -2, 1), DriverSpec{}).space(),
              SweepSpace::Full);
    EXPECT_THROW(SweepHamiltonian::qudit_symmetric(small_model(QuditFamily::Binary, -2, 1), DriverSpec{}),
                 std::invalid_argument);
}

TEST(Sector, SpectrumIsContainedInFullSpectrum) {
    const auto model = small_model(QuditFamily::Hamming, -2, 2);
    const auto full = SweepHamiltonian::full(model, DriverSpec{1.0});
    const auto sector = SweepHamiltonian::qudit_symmetric(model, DriverSpec{1.0});
    for (double s : {0.0, 0.25, 0.6, 0.95}) {
        const auto all = low_spectrum(full, s, full.dim());
        const auto sub = low_spectrum(sector, s, sector.dim());
        EXPECT_NEAR(sub[0], all[0], 1e-9);
        for (double e : sub) {
            const auto it = std::lower_bound(all.begin(), all.end(), e - 1e-8);
            ASSERT_NE(it, all.end());
            EXPECT_NEAR(*it, e, 1e-8);
        }
    }
}

TEST(Sector, SpectralBoundsEnclose) {
    for (const auto& h : {SweepHamiltonian::full(small_model(QuditFamily::Binary, -2, 1), DriverSpec{0.6}),
                          SweepHamiltonian::qudit_symmetric(small_model(QuditFamily::Hamming, -2, 2), DriverSpec{0.6})}) {
        for (double s : {0.0, 0.5, 1.0}) {
            const auto ev = low_spectrum(h, s, h.dim());
            const auto [lo, hi] = h.spectral_bounds(s);
            EXPECT_LE(lo, ev.front() + 1e-9);
            EXPECT_GE(hi, ev.back() - 1e-9);
        }
    }
}
