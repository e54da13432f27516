#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "isvp/experiments.hpp"
#include "oracles.hpp"

using namespace isvp;

namespace {

OracleResult oracle_with(std::int64_t l1, std::size_t dim) {
    OracleResult r;
    r.lambda1_sq = l1;
    r.witnesses = {CoefficientVector(dim, 0)};
    return r;
}

// Baseline fractions counted over every spin configuration of the compiled model.
std::pair<double, double> configuration_baseline(const Basis& b, const QuditEncoding& enc) {
    const auto model = compile(gram(b), enc);
    const auto lens = basis_lengths(b);
    const auto lo = lens.front(), med = lens[lens.size() / 2];
    std::uint64_t below_min = 0, below_med = 0, total = 0;
    for (std::uint64_t c = 0; c < (1ULL << model.n_qubits()); ++c) {
        const auto e = model.energy(spins_from_index(c, model.n_qubits()));
        ++total;
        if (e > 0 && e < lo) ++below_min;
        if (e > 0 && e < med) ++below_med;
    }
    return {static_cast<double>(below_min) / static_cast<double>(total),
            static_cast<double>(below_med) / static_cast<double>(total)};
}

}  // namespace

TEST(BasisLengths, MinAndMedian) {
    const Basis b(IntMatrix{{3, 0, 0}, {0, 1, 0}, {1, 1, 1}});
    EXPECT_EQ(basis_lengths(b), (std::vector<std::int64_t>{1, 3, 9}));
    EXPECT_EQ(min_basis_length(b), 1);
    EXPECT_EQ(median_basis_length(b), 3);
    const Basis even(IntMatrix{{2, 0}, {0, 3}});
    EXPECT_EQ(median_basis_length(even), 9);  // upper middle of {4, 9}
}

TEST(FiguresOfMerit, HandWorkedDistribution) {
    const Basis b(IntMatrix{{3, 0, 0}, {0, 2, 0}, {0, 0, 4}});  // lengths 4, 9, 16
    const LengthDistribution d{{0, 0.1}, {2, 0.2}, {4, 0.3}, {5, 0.15}, {9, 0.25}};
    const auto f = figures_of_merit(d, b, oracle_with(2, 3));
    EXPECT_DOUBLE_EQ(f.p_zero, 0.1);
    EXPECT_DOUBLE_EQ(f.p_shortest, 0.2);
    EXPECT_DOUBLE_EQ(f.p_shorter_min, 0.2);           // strict: 4 is not shorter than 4
    EXPECT_DOUBLE_EQ(f.p_shorter_median, 0.2 + 0.3 + 0.15);
    EXPECT_THROW(figures_of_merit(d, b, oracle_with(0, 3)), std::invalid_argument);
    EXPECT_THROW(figures_of_merit(LengthDistribution{{-1, 1.0}}, b, oracle_with(2, 3)), std::invalid_argument);
}

TEST(FiguresOfMerit, SamplesUseFrequencies) {
    const Basis b(IntMatrix{{2, 0}, {0, 3}});
    SampleSet s;
    for (double e : {0.0, 4.0, 4.0, 9.0}) s.samples.push_back({{}, e, 0.0});
    const auto f = figures_of_merit(s, b, oracle_with(4, 2));
    EXPECT_DOUBLE_EQ(f.p_zero, 0.25);
    EXPECT_DOUBLE_EQ(f.p_shortest, 0.5);
    EXPECT_DOUBLE_EQ(f.p_shorter_min, 0.0);
    EXPECT_DOUBLE_EQ(f.p_shorter_median, 0.5);
}

TEST(Baseline, MatchesConfigurationCount) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Basis b = generate_instance(3, seed).bad_basis();
        for (const auto& enc : {QuditEncoding::hamming(1), QuditEncoding::binary(2)}) {
            const auto [want_min, want_med] = configuration_baseline(b, enc);
            const auto got = baseline(b, enc, lattice_oracle(b));
            EXPECT_NEAR(got.p_shorter_min, want_min, 1e-12);
            EXPECT_NEAR(got.p_shorter_median, want_med, 1e-12);
            double total = 0;
            for (const auto& [len, p] : uniform_distribution(b, enc, BaselineWeighting::Configurations)) total += p;
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(Baseline, CoefficientWeightingCountsVectors) {
    const Basis b = generate_instance(2, 4).bad_basis();
    const auto enc = QuditEncoding::hamming(1);
    const auto lens = basis_lengths(b);
    std::uint64_t hit = 0, total = 0;
    const auto rows = oracle::to_rows(b.rows());
    for (std::int64_t x = -2; x <= 2; ++x)
        for (std::int64_t y = -2; y <= 2; ++y) {
            const auto l = oracle::norm_sq(oracle::combine(rows, {x, y}));
            ++total;
            if (l > 0 && l < lens.front()) ++hit;
        }
    const auto got = baseline(b, enc, lattice_oracle(b), BaselineWeighting::Coefficients);
    EXPECT_NEAR(got.p_shorter_min, static_cast<double>(hit) / static_cast<double>(total), 1e-12);
}

TEST(Baseline, OneDimensionalIsZero) {
    const Basis b(IntMatrix{{5}});
    const auto got = baseline(b, QuditEncoding::binary(3), lattice_oracle(b));
    EXPECT_EQ(got.p_shorter_min, 0.0);
    EXPECT_EQ(got.p_shorter_median, 0.0);
}

TEST(Baseline, EncodingsWeightDifferently) {
    const Basis b = generate_instance(3, 2).bad_basis();
    const auto ham = uniform_distribution(b, QuditEncoding::hamming(2), BaselineWeighting::Configurations);
    const auto flat = uniform_distribution(b, QuditEncoding::hamming(2), BaselineWeighting::Coefficients);
    // Hamming redundancy piles weight on the zero vector.
    EXPECT_GT(ham.at(0), flat.at(0));
    EXPECT_THROW(uniform_distribution(b, QuditEncoding::binary(4), BaselineWeighting::Configurations, 100),
                 ResourceLimitError);
}

TEST(LatticeOracle, MatchesShortestVectorScan) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 10; ++t) {
        const auto lat = oracle::random_optimal_lattice(3, rng, 40);
        const auto [want, vecs] = oracle::shortest_vectors(lat);
        EXPECT_EQ(lattice_oracle(Basis(oracle::to_matrix(lat.rows()))).lambda1_sq, want);
    }
}

TEST(Estimate, StandardErrorExamples) {
    const std::vector<double> same{0.3, 0.3, 0.3};
    EXPECT_DOUBLE_EQ(estimate(same).mean, 0.3);
    EXPECT_NEAR(estimate(same).stderr_, 0.0, 1e-15);
    const std::vector<double> two{0.0, 1.0};
    EXPECT_DOUBLE_EQ(estimate(two).mean, 0.5);
    EXPECT_NEAR(estimate(two).stderr_, 0.5, 1e-15);
    EXPECT_THROW(estimate(std::vector<double>{}), std::invalid_argument);
}

TEST(Aggregate, CellsAndCsv) {
    std::vector<InstanceReport> reps;
    for (int i = 0; i < 4; ++i) {
        InstanceReport r;
        r.dim = 3;
        r.family = i % 2 ? QuditFamily::Binary : QuditFamily::Hamming;
        r.fom = {0.1 * i, 0.2, 0.3, 0.4};
        r.baseline = {0.01 * i, 0.05};
        reps.push_back(r);
    }
    const auto report = aggregate(reps);
    ASSERT_EQ(report.cells.size(), 2u);
    const auto* ham = report.find(3, QuditFamily::Hamming);
    ASSERT_NE(ham, nullptr);
    EXPECT_EQ(ham->instances, 2u);
    EXPECT_NEAR(ham->fom[0].mean, 0.1, 1e-12);
    EXPECT_NEAR(ham->fom[0].stderr_, 0.1, 1e-12);
    EXPECT_NEAR(ham->baseline.p_shorter_min, 0.01, 1e-12);
    for (const auto* cell : {ham, report.find(3, QuditFamily::Binary)})
        for (const auto& e : cell->fom) {
            EXPECT_GE(e.mean, 0.0);
            EXPECT_LE(e.mean, 1.0);
        }
    EXPECT_EQ(report.find(4, QuditFamily::Hamming), nullptr);

    std::istringstream csv(report.to_csv());
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "dim,encoding,fom,mean,stderr,baseline");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 8u);

    reps.pop_back();
    EXPECT_THROW(aggregate(reps), std::invalid_argument);
}

TEST(Histogram, BinsAndMarkers) {
    const Basis b(IntMatrix{{2, 0}, {1, 3}});
    const std::vector<std::int64_t> lens{0, 4, 4, 10, 1};
    const auto h = histogram(lens, b, oracle_with(4, 2));
    EXPECT_EQ(h.total, 5u);
    std::uint64_t sum = 0;
    for (const auto& [len, c] : h.bins) sum += c;
    EXPECT_EQ(sum, h.total);
    EXPECT_EQ(h.bins.at(4), 2u);
    EXPECT_EQ(h.basis_sq, (std::vector<std::int64_t>{4, 10}));
    const auto csv = h.to_csv();
    EXPECT_NE(csv.find("bin,0,,1\n"), std::string::npos);
    std::ostringstream ln4;
    ln4 << std::setprecision(12) << std::log(4.0);
    EXPECT_NE(csv.find("bin,4," + ln4.str() + ",2\n"), std::string::npos);
    EXPECT_NE(csv.find("lambda1,4,"), std::string::npos);
    EXPECT_NE(csv.find("basis,10,"), std::string::npos);
}
