#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "isvp/dynamics.hpp"
#include "isvp/emulator.hpp"

namespace isvp {

/// Squared lattice-vector length -> probability (or frequency).
using LengthDistribution = std::map<std::int64_t, double>;

LengthDistribution length_distribution(const SweepResult& result);
/// Empirical frequencies; sample energies are exact squared lengths.
LengthDistribution length_distribution(const SampleSet& samples);

/// Ascending squared lengths of the basis rows.
std::vector<std::int64_t> basis_lengths(const Basis& basis);
std::int64_t min_basis_length(const Basis& basis);
/// Element floor(N/2) of the ascending list (upper-middle for even N).
std::int64_t median_basis_length(const Basis& basis);

struct FiguresOfMerit {
    double p_zero = 0.0;
    double p_shortest = 0.0;
    double p_shorter_min = 0.0;
    double p_shorter_median = 0.0;

    std::array<double, 4> values() const { return {p_zero, p_shortest, p_shorter_min, p_shorter_median}; }
};

inline constexpr std::array<const char*, 4> kFomNames = {"p_zero", "p_shortest", "p_shorter_than_min_basis",
                                                         "p_shorter_than_median_basis"};

/// Thresholds use strict inequality. Only the squared length of an outcome
/// matters: x = 0 is the only vector of length zero.
FiguresOfMerit figures_of_merit(const LengthDistribution& outcomes, const Basis& basis, const OracleResult& oracle);
FiguresOfMerit figures_of_merit(const SweepResult& result, const Basis& basis, const OracleResult& oracle);
FiguresOfMerit figures_of_merit(const SampleSet& samples, const Basis& basis, const OracleResult& oracle);

enum class BaselineWeighting {
    Configurations,  // every spin configuration equally likely
    Coefficients,    // every coefficient vector in the range equally likely
};

struct Baseline {
    double p_shorter_min = 0.0;
    double p_shorter_median = 0.0;
};

/// Distribution of squared lengths under uniform sampling of the encoding's
/// search space. Throws ResourceLimitError above `cap` coefficient vectors.
LengthDistribution uniform_distribution(const Basis& basis, const QuditEncoding& encoding, BaselineWeighting weighting,
                                        std::uint64_t cap = 50'000'000);

Baseline baseline(const Basis& basis, const QuditEncoding& encoding, const OracleResult& oracle,
                  BaselineWeighting weighting = BaselineWeighting::Configurations);

/// The lattice's true lambda1 via the HNF coordinate box.
OracleResult lattice_oracle(const Basis& basis);

/// One instance's measurements within a (dimension, encoding) cell.
struct InstanceReport {
    std::size_t dim = 0;
    QuditFamily family = QuditFamily::Hamming;
    FiguresOfMerit fom;
    Baseline baseline;
    std::string label;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample stddev / sqrt(count)
};

Estimate estimate(std::span<const double> values);

struct FoMCell {
    std::size_t dim = 0;
    QuditFamily family = QuditFamily::Hamming;
    std::size_t instances = 0;
    std::array<Estimate, 4> fom;
    Baseline baseline;  // ensemble mean
};

struct FoMReport {
    std::vector<FoMCell> cells;  // sorted by (dim, family)

    const FoMCell* find(std::size_t dim, QuditFamily family) const;
    /// Columns dim, encoding, fom, mean, stderr, baseline (empty for the
    /// figures of merit without a baseline).
    std::string to_csv() const;
};

/// Needs at least two reports per (dim, family) cell present.
FoMReport aggregate(std::span<const InstanceReport> reports);

struct LengthHistogram {
    std::map<std::int64_t, std::uint64_t> bins;
    std::int64_t lambda1_sq = 0;
    std::vector<std::int64_t> basis_sq;  // one marker per basis row
    std::uint64_t total = 0;

    /// Rows `kind,len_sq,ln_len_sq,count`; kind is bin, lambda1 or basis.
    /// ln_len_sq is empty for the zero vector.
    std::string to_csv() const;
};

LengthHistogram histogram(const SampleSet& samples, const Basis& basis, const OracleResult& oracle);
LengthHistogram histogram(std::span<const std::int64_t> lengths, const Basis& basis, const OracleResult& oracle);

}  // namespace isvp
