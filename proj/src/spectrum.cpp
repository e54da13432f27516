#include "isvp/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace isvp {

std::int64_t ProblemDiagonal::max_abs() const {
    std::int64_t m = 0;
    for (auto v : values) m = std::max(m, v < 0 ? -v : v);
    return m;
}

ProblemDiagonal problem_diagonal(const IsingModel& model) {
    const std::size_t n = model.n_qubits();
    if (n > kMaxDiagonalQubits)
        throw ResourceLimitError("problem diagonal for " + std::to_string(n) + " qubits exceeds the cap of " +
                                 std::to_string(kMaxDiagonalQubits));

    // Integer-scaled coefficients: L * H is integral.
    const mpz_class l = model.common_denominator();
    auto scaled = [&](const mpq_class& v) {
        mpq_class t = v * l;
        t.canonicalize();
        if (t.get_den() != 1 || !t.get_num().fits_slong_p())
            throw std::overflow_error("scaled Ising coefficient does not fit 64 bits");
        return static_cast<std::int64_t>(t.get_num().get_si());
    };
    std::vector<std::int64_t> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = scaled(model.h()[i]);
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj(n);
    std::int64_t e = scaled(model.offset());
    for (auto v : h) e += v;
    for (const auto& [ij, v] : model.couplings()) {
        const std::int64_t sv = scaled(v);
        adj[ij.first].emplace_back(ij.second, sv);
        adj[ij.second].emplace_back(ij.first, sv);
        e += sv;
    }
    const std::int64_t lv = l.get_si();

    ProblemDiagonal d;
    d.n_qubits = n;
    d.values.assign(std::size_t{1} << n, 0);
    std::vector<std::int8_t> spin(n, 1);
    auto store = [&](std::uint64_t idx, std::int64_t scaled_e) {
        if (scaled_e % lv != 0)
            throw std::logic_error("compiled energy of configuration " + std::to_string(idx) + " is not an integer");
        d.values[idx] = scaled_e / lv;
    };
    // Gray-code walk: one spin flip per step.
    std::uint64_t gray = 0;
    store(0, e);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
        const auto u = static_cast<std::size_t>(std::countr_zero(i));
        std::int64_t field = h[u];
        for (const auto& [v, j] : adj[u]) field += j * spin[v];
        e -= 2 * spin[u] * field;
        spin[u] = static_cast<std::int8_t>(-spin[u]);
        gray ^= std::uint64_t{1} << u;
        store(gray, e);
    }
    return d;
}

SweepHamiltonian SweepHamiltonian::full(ProblemDiagonal diag, DriverSpec driver) {
    if (driver.h0 <= 0) throw std::invalid_argument("transverse field h0 must be positive");
    if (diag.values.size() != (std::size_t{1} << diag.n_qubits))
        throw std::invalid_argument("diagonal length is not 2^n");
    SweepHamiltonian h;
    h.space_ = SweepSpace::Full;
    h.n_qubits_ = diag.n_qubits;
    h.driver_ = driver;
    h.diag_ = std::move(diag.values);
    return h;
}

SweepHamiltonian SweepHamiltonian::full(const IsingModel& model, DriverSpec driver) {
    SweepHamiltonian h = full(problem_diagonal(model), driver);
    h.layout_ = model.layout();
    return h;
}

SweepHamiltonian SweepHamiltonian::qudit_symmetric(const IsingModel& model, DriverSpec driver) {
    if (driver.h0 <= 0) throw std::invalid_argument("transverse field h0 must be positive");
    const QuditLayout& layout = model.layout();
    if (layout.encoding.family() != QuditFamily::Hamming)
        throw std::invalid_argument("the qudit-symmetric sector needs Hamming-encoded qudits");

    SweepHamiltonian h;
    h.space_ = SweepSpace::QuditSymmetric;
    h.n_qubits_ = model.n_qubits();
    h.driver_ = driver;
    h.layout_ = layout;
    std::size_t dim = 1;
    for (const auto& q : layout.qudits) {
        const std::size_t m = q.size();
        h.strides_.push_back(dim);
        h.ladders_.push_back(m + 1);
        std::vector<double> hop(m);
        for (std::size_t w = 0; w < m; ++w) hop[w] = std::sqrt(static_cast<double>((w + 1) * (m - w)));
        h.hop_.push_back(std::move(hop));
        dim *= m + 1;
    }
    h.diag_.resize(dim);
    SpinConfig config(model.n_qubits());
    for (std::size_t state = 0; state < dim; ++state) {
        std::fill(config.begin(), config.end(), std::int8_t{1});
        for (std::size_t j = 0; j < layout.qudits.size(); ++j) {
            const std::size_t w = (state / h.strides_[j]) % h.ladders_[j];
            for (std::size_t p = 0; p < w; ++p) config[static_cast<std::size_t>(layout.qudits[j][p])] = -1;
        }
        const mpq_class e = model.energy(config);
        if (e.get_den() != 1) throw std::logic_error("compiled energy is not an integer");
        h.diag_[state] = e.get_num().get_si();
    }
    return h;
}

SweepHamiltonian SweepHamiltonian::for_model(const IsingModel& model, DriverSpec driver) {
    if (model.layout().encoding.family() == QuditFamily::Hamming) return qudit_symmetric(model, driver);
    return full(model, driver);
}

std::int64_t SweepHamiltonian::max_abs_diagonal() const {
    std::int64_t m = 0;
    for (auto v : diag_) m = std::max(m, v < 0 ? -v : v);
    return m;
}

template <class S>
void SweepHamiltonian::apply_impl(double s, std::span<const S> in, std::span<S> out) const {
    const std::size_t d = dim();
    if (in.size() != d || out.size() != d)
        throw std::invalid_argument("state vector length " + std::to_string(in.size()) + " does not match dimension " +
                                    std::to_string(d));
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("normalized time outside [0, 1]");
    for (std::size_t c = 0; c < d; ++c) out[c] = (s * static_cast<double>(diag_[c])) * in[c];
    const double coef = -(1.0 - s) * driver_.h0;
    if (coef == 0.0) return;

    if (space_ == SweepSpace::Full) {
        for (std::size_t q = 0; q < n_qubits_; ++q) {
            const std::size_t bit = std::size_t{1} << q;
            for (std::size_t base = 0; base < d; base += 2 * bit) {
                S* lo = out.data() + base;
                S* hi = lo + bit;
                const S* ilo = in.data() + base;
                const S* ihi = ilo + bit;
                for (std::size_t k = 0; k < bit; ++k) {
                    lo[k] += coef * ihi[k];
                    hi[k] += coef * ilo[k];
                }
            }
        }
        return;
    }

    for (std::size_t j = 0; j < ladders_.size(); ++j) {
        const std::size_t stride = strides_[j];
        const std::size_t len = ladders_[j];
        const std::size_t block = stride * len;
        const auto& hop = hop_[j];
        for (std::size_t base = 0; base < d; base += block) {
            for (std::size_t w = 0; w + 1 < len; ++w) {
                const double a = coef * hop[w];
                S* lo = out.data() + base + w * stride;
                S* hi = lo + stride;
                const S* ilo = in.data() + base + w * stride;
                const S* ihi = ilo + stride;
                for (std::size_t k = 0; k < stride; ++k) {
                    lo[k] += a * ihi[k];
                    hi[k] += a * ilo[k];
                }
            }
        }
    }
}

void SweepHamiltonian::apply(double s, std::span<const double> in, std::span<double> out) const {
    apply_impl<double>(s, in, out);
}

void SweepHamiltonian::apply(double s, std::span<const Complex> in, std::span<Complex> out) const {
    apply_impl<Complex>(s, in, out);
}

std::pair<double, double> SweepHamiltonian::spectral_bounds(double s) const {
    const auto [mn, mx] = std::minmax_element(diag_.begin(), diag_.end());
    const double driver = (1.0 - s) * driver_.h0 * static_cast<double>(n_qubits_);
    return {s * static_cast<double>(*mn) - driver, s * static_cast<double>(*mx) + driver};
}

Eigen::MatrixXd SweepHamiltonian::dense(double s) const {
    const std::size_t d = dim();
    Eigen::MatrixXd m(d, d);
    std::vector<double> e(d, 0.0), col(d);
    for (std::size_t c = 0; c < d; ++c) {
        e[c] = 1.0;
        apply(s, e, col);
        e[c] = 0.0;
        for (std::size_t r = 0; r < d; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    }
    return m;
}

std::vector<Complex> SweepHamiltonian::initial_state() const {
    if (space_ == SweepSpace::Full)
        return std::vector<Complex>(dim(), Complex(std::pow(2.0, -0.5 * static_cast<double>(n_qubits_)), 0.0));
    std::vector<Complex> psi(dim());
    for (std::size_t state = 0; state < dim(); ++state)
        psi[state] = std::sqrt(multiplicity(state) * std::pow(2.0, -static_cast<double>(n_qubits_)));
    return psi;
}

double SweepHamiltonian::multiplicity(std::size_t state) const {
    if (space_ == SweepSpace::Full) return 1.0;
    double m = 1.0;
    for (std::size_t j = 0; j < ladders_.size(); ++j) {
        const std::size_t w = (state / strides_[j]) % ladders_[j];
        m *= static_cast<double>(redundancy(layout_->encoding, static_cast<int>(ladders_[j] - 1) / 2 - static_cast<int>(w)));
    }
    return m;
}

CoefficientVector SweepHamiltonian::coefficients(std::size_t state) const {
    if (!layout_) throw std::logic_error("Hamiltonian was built without a qudit layout");
    if (state >= dim()) throw std::out_of_range("basis state out of range");
    if (space_ == SweepSpace::Full) return decode(*layout_, spins_from_index(state, n_qubits_));
    CoefficientVector x(ladders_.size());
    for (std::size_t j = 0; j < ladders_.size(); ++j) {
        const auto w = static_cast<std::int64_t>((state / strides_[j]) % ladders_[j]);
        x[j] = static_cast<std::int64_t>(ladders_[j] - 1) / 2 - w;
    }
    return x;
}

std::vector<Complex> apply_hamiltonian(const ProblemDiagonal& diag, const DriverSpec& driver, double s,
                                       std::span<const Complex> psi) {
    const auto h = SweepHamiltonian::full(diag, driver);
    std::vector<Complex> out(h.dim());
    h.apply(s, psi, out);
    return out;
}

std::vector<double> low_spectrum(const SweepHamiltonian& h, double s, std::size_t count, const EigenOptions& opts) {
    if (count < 1) throw std::invalid_argument("low_spectrum needs count >= 1");
    if (count > h.dim()) throw std::invalid_argument("requested more eigenvalues than the dimension");
    if (h.dim() <= opts.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(s), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return std::vector<double>(ev.data(), ev.data() + count);
    }
    auto op = [&](std::span<const double> in, std::span<double> out) { h.apply(s, in, out); };
    return lanczos_lowest(op, h.dim(), count, opts);
}

std::vector<double> low_spectrum(const ProblemDiagonal& diag, const DriverSpec& driver, double s, std::size_t count,
                                 const EigenOptions& opts) {
    return low_spectrum(SweepHamiltonian::full(diag, driver), s, count, opts);
}

std::vector<std::int64_t> distinct_levels(std::span<const std::int64_t> diag, std::size_t count) {
    std::vector<std::int64_t> v(diag.begin(), diag.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() > count) v.resize(count);
    return v;
}

namespace {

std::pair<double, double> lowest_pair(const SweepHamiltonian& h, double s, const EigenOptions& opts) {
    if (s >= 1.0) {
        const auto lv = distinct_levels(h.diagonal(), 2);
        if (lv.size() < 2) throw std::invalid_argument("problem diagonal has a single level");
        return {static_cast<double>(lv[0]), static_cast<double>(lv[1])};
    }
    const auto ev = low_spectrum(h, s, 2, opts);
    return {ev[0], ev[1]};
}

}  // namespace

GapProfile gap_scan(const SweepHamiltonian& h, std::size_t grid, const GapScanOptions& opts) {
    if (grid < 3) throw std::invalid_argument("gap scan needs at least 3 grid points");
    GapProfile p;
    p.s_grid.resize(grid);
    p.e0.resize(grid);
    p.e1.resize(grid);
    p.gaps.resize(grid);
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < grid; ++k) {
        const double s = k + 1 == grid ? 1.0 : static_cast<double>(k) / static_cast<double>(grid - 1);
        p.s_grid[k] = s;
        try {
            const auto [e0, e1] = lowest_pair(h, s, opts.eigen);
            p.e0[k] = e0;
            p.e1[k] = e1;
            p.gaps[k] = std::max(0.0, e1 - e0);
        } catch (const std::exception& ex) {
#pragma omp critical
            failure = "gap scan failed at s=" + std::to_string(s) + ": " + ex.what();
        }
    }
    if (!failure.empty()) throw std::runtime_error(failure);

    const auto it = std::min_element(p.gaps.begin(), p.gaps.end());
    auto k = static_cast<std::size_t>(it - p.gaps.begin());
    p.min_s = p.s_grid[k];
    p.min_gap = *it;

    if (opts.refine && k > 0 && k + 1 < grid) {
        auto gap_at = [&](double s) {
            const auto [e0, e1] = lowest_pair(h, s, opts.eigen);
            return e1 - e0;
        };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = p.s_grid[k - 1];
        double b = p.s_grid[k + 1];
        if (b >= 1.0) b = std::nextafter(1.0, 0.0);
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double fc = gap_at(c);
        double fd = gap_at(d);
        while (b - a > 1e-7) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = gap_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = gap_at(d);
            }
        }
        const double s_best = fc < fd ? c : d;
        const double g_best = std::min(fc, fd);
        if (g_best < p.min_gap) {
            p.min_gap = g_best;
            p.min_s = s_best;
        }
    }
    return p;
}

}  // namespace isvp
