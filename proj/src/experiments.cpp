#include "isvp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace isvp {

namespace {

std::string number(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

// Exact weight per squared length over the encoding's coefficient cube.
std::map<std::int64_t, mpz_class> uniform_weights(const Basis& basis, const QuditEncoding& enc,
                                                  BaselineWeighting weighting, std::uint64_t cap) {
    const std::size_t n = basis.dim();
    const CoefficientBox box = encoding_box(enc, n);
    if (box.point_count() > cap) throw ResourceLimitError("uniform baseline would enumerate more than the cap");
    std::vector<mpz_class> redundancy_of(static_cast<std::size_t>(enc.hi() - enc.lo() + 1), 1);
    if (weighting == BaselineWeighting::Configurations)
        for (int v = enc.lo(); v <= enc.hi(); ++v)
            redundancy_of[static_cast<std::size_t>(v - enc.lo())] = redundancy(enc, v);

    std::map<std::int64_t, mpz_class> out;
    std::vector<std::int64_t> x(n, enc.lo());
    while (true) {
        mpz_class w = 1;
        for (auto xi : x) w *= redundancy_of[static_cast<std::size_t>(xi - enc.lo())];
        out[basis.squared_length(x)] += w;
        std::size_t i = 0;
        while (i < n && x[i] == enc.hi()) x[i++] = enc.lo();
        if (i == n) break;
        ++x[i];
    }
    return out;
}

double below(const std::map<std::int64_t, mpz_class>& weights, std::int64_t threshold) {
    mpz_class hit = 0, total = 0;
    for (const auto& [len, w] : weights) {
        total += w;
        if (len > 0 && len < threshold) hit += w;
    }
    return mpq_class(hit, total).get_d();
}

}  // namespace

LengthDistribution length_distribution(const SweepResult& result) { return result.grouped; }

LengthDistribution length_distribution(const SampleSet& samples) {
    if (samples.reads() == 0) throw std::invalid_argument("empty sample set");
    LengthDistribution d;
    const double share = 1.0 / static_cast<double>(samples.reads());
    for (const auto& s : samples.samples) d[std::llround(s.energy)] += share;
    return d;
}

std::vector<std::int64_t> basis_lengths(const Basis& basis) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto r = basis.row(i);
        out.push_back(std::inner_product(r.begin(), r.end(), r.begin(), std::int64_t{0}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t min_basis_length(const Basis& basis) { return basis_lengths(basis).front(); }

std::int64_t median_basis_length(const Basis& basis) {
    const auto l = basis_lengths(basis);
    return l[l.size() / 2];
}

FiguresOfMerit figures_of_merit(const LengthDistribution& outcomes, const Basis& basis, const OracleResult& oracle) {
    if (oracle.lambda1_sq <= 0) throw std::invalid_argument("oracle carries no shortest length");
    if (!oracle.witnesses.empty() && oracle.witnesses.front().size() != basis.dim())
        throw std::invalid_argument("oracle and basis dimensions differ");
    const auto lo = min_basis_length(basis);
    const auto med = median_basis_length(basis);
    FiguresOfMerit f;
    for (const auto& [len, p] : outcomes) {
        if (len < 0) throw std::invalid_argument("negative squared length");
        if (len == 0) f.p_zero += p;
        if (len == oracle.lambda1_sq) f.p_shortest += p;
        if (len > 0 && len < lo) f.p_shorter_min += p;
        if (len > 0 && len < med) f.p_shorter_median += p;
    }
    return f;
}

FiguresOfMerit figures_of_merit(const SweepResult& result, const Basis& basis, const OracleResult& oracle) {
    return figures_of_merit(length_distribution(result), basis, oracle);
}

FiguresOfMerit figures_of_merit(const SampleSet& samples, const Basis& basis, const OracleResult& oracle) {
    return figures_of_merit(length_distribution(samples), basis, oracle);
}

LengthDistribution uniform_distribution(const Basis& basis, const QuditEncoding& encoding, BaselineWeighting weighting,
                                        std::uint64_t cap) {
    const auto weights = uniform_weights(basis, encoding, weighting, cap);
    mpz_class total = 0;
    for (const auto& [len, w] : weights) total += w;
    LengthDistribution d;
    for (const auto& [len, w] : weights) d[len] = mpq_class(w, total).get_d();
    return d;
}

Baseline baseline(const Basis& basis, const QuditEncoding& encoding, const OracleResult&,
                  BaselineWeighting weighting) {
    const auto weights = uniform_weights(basis, encoding, weighting, 50'000'000);
    return {below(weights, min_basis_length(basis)), below(weights, median_basis_length(basis))};
}

OracleResult lattice_oracle(const Basis& basis) { return lattice_svp(basis); }

Estimate estimate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("no values to estimate from");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

const FoMCell* FoMReport::find(std::size_t dim, QuditFamily family) const {
    for (const auto& c : cells)
        if (c.dim == dim && c.family == family) return &c;
    return nullptr;
}

std::string FoMReport::to_csv() const {
    std::ostringstream os;
    os << "dim,encoding,fom,mean,stderr,baseline\n";
    for (const auto& c : cells)
        for (std::size_t k = 0; k < 4; ++k) {
            os << c.dim << ',' << to_string(c.family) << ',' << kFomNames[k] << ',' << number(c.fom[k].mean) << ','
               << number(c.fom[k].stderr_) << ',';
            if (k == 2) os << number(c.baseline.p_shorter_min);
            if (k == 3) os << number(c.baseline.p_shorter_median);
            os << '\n';
        }
    return os.str();
}

FoMReport aggregate(std::span<const InstanceReport> reports) {
    if (reports.empty()) throw std::invalid_argument("no reports to aggregate");
    std::map<std::pair<std::size_t, QuditFamily>, std::vector<const InstanceReport*>> groups;
    for (const auto& r : reports) groups[{r.dim, r.family}].push_back(&r);
    FoMReport out;
    for (const auto& [key, members] : groups) {
        if (members.size() < 2)
            throw std::invalid_argument("cell dim=" + std::to_string(key.first) + " encoding=" +
                                        std::string(to_string(key.second)) + " has fewer than two instances");
        FoMCell cell;
        cell.dim = key.first;
        cell.family = key.second;
        cell.instances = members.size();
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<double> v;
            for (const auto* m : members) v.push_back(m->fom.values()[k]);
            cell.fom[k] = estimate(v);
        }
        std::vector<double> bmin, bmed;
        for (const auto* m : members) {
            bmin.push_back(m->baseline.p_shorter_min);
            bmed.push_back(m->baseline.p_shorter_median);
        }
        cell.baseline = {estimate(bmin).mean, estimate(bmed).mean};
        out.cells.push_back(cell);
    }
    return out;
}

std::string LengthHistogram::to_csv() const {
    std::ostringstream os;
    os << "kind,len_sq,ln_len_sq,count\n";
    auto ln = [](std::int64_t v) { return v > 0 ? number(std::log(static_cast<double>(v))) : std::string(); };
    for (const auto& [len, count] : bins) os << "bin," << len << ',' << ln(len) << ',' << count << '\n';
    os << "lambda1," << lambda1_sq << ',' << ln(lambda1_sq) << ",\n";
    for (auto b : basis_sq) os << "basis," << b << ',' << ln(b) << ",\n";
    return os.str();
}

LengthHistogram histogram(std::span<const std::int64_t> lengths, const Basis& basis, const OracleResult& oracle) {
    LengthHistogram h;
    for (auto len : lengths) {
        if (len < 0) throw std::invalid_argument("negative squared length");
        ++h.bins[len];
    }
    h.total = lengths.size();
    h.lambda1_sq = oracle.lambda1_sq;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto r = basis.row(i);
        h.basis_sq.push_back(std::inner_product(r.begin(), r.end(), r.begin(), std::int64_t{0}));
    }
    return h;
}

LengthHistogram histogram(const SampleSet& samples, const Basis& basis, const OracleResult& oracle) {
    std::vector<std::int64_t> lengths;
    for (const auto& s : samples.samples) lengths.push_back(std::llround(s.energy));
    return histogram(lengths, basis, oracle);
}

}  // namespace isvp
