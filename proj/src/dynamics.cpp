#include "isvp/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace isvp {

namespace {

// J_0(z) .. J_K(z) by Miller's backward recurrence, truncated once the terms
// beyond z fall under tol.
std::vector<double> bessel_sequence(double z, double tol) {
    if (z < 1e-300) return {1.0};
    const auto start = static_cast<std::size_t>(std::ceil(1.5 * z)) + 60;
    std::vector<double> j(start + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for (std::size_t k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * static_cast<double>(k) / z) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (std::size_t i = k - 1; i <= start + 1; ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (std::size_t k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    for (auto& v : j) v /= norm;
    std::size_t last = j.size() - 1;
    while (last > 0 && (static_cast<double>(last) > z ? std::abs(j[last]) < tol : false)) --last;
    j.resize(last + 1);
    return j;
}

}  // namespace

std::size_t SweepSchedule::resolve_windows(const SweepHamiltonian& h) const {
    if (!(T > 0.0)) throw std::invalid_argument("sweep duration T must be positive");
    if (windows > 0) return windows;
    const double spread =
        static_cast<double>(h.max_abs_diagonal()) + h.h0() * static_cast<double>(h.n_qubits());
    const double by_phase = std::ceil(T * spread / window_phase);
    const double by_rate = std::ceil(std::pow(T, 0.75) * std::sqrt(spread) / rate_coefficient);
    return std::max({min_windows, static_cast<std::size_t>(by_phase), static_cast<std::size_t>(by_rate)});
}

std::vector<Complex> initial_state(std::size_t n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("initial state needs at least one qubit");
    return std::vector<Complex>(std::size_t{1} << n_qubits,
                                Complex(std::pow(2.0, -0.5 * static_cast<double>(n_qubits)), 0.0));
}

std::size_t propagate_fixed(const SweepHamiltonian& h, double s, double tau, std::span<Complex> psi, double tol) {
    const std::size_t d = h.dim();
    if (psi.size() != d) throw std::invalid_argument("state length does not match Hamiltonian");
    const auto [lo, hi] = h.spectral_bounds(s);
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo) * (1.0 + 1e-12) + 1e-300;
    const double z = tau * r;
    const auto bessel = bessel_sequence(z, tol);

    std::vector<Complex> prev(psi.begin(), psi.end());
    std::vector<Complex> cur(d), next(d), acc(d);
    auto scaled_apply = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
        h.apply(s, in, out);
        for (std::size_t i = 0; i < d; ++i) out[i] = (out[i] - c * in[i]) / r;
    };

    for (std::size_t i = 0; i < d; ++i) acc[i] = bessel[0] * prev[i];
    std::size_t matvecs = 0;
    if (bessel.size() > 1) {
        scaled_apply(prev, cur);
        ++matvecs;
        Complex phase(0.0, -1.0);  // (-i)^k
        for (std::size_t i = 0; i < d; ++i) acc[i] += 2.0 * bessel[1] * phase * cur[i];
        for (std::size_t k = 2; k < bessel.size(); ++k) {
            scaled_apply(cur, next);
            ++matvecs;
            phase *= Complex(0.0, -1.0);
            const Complex coef = 2.0 * bessel[k] * phase;
            for (std::size_t i = 0; i < d; ++i) {
                next[i] = 2.0 * next[i] - prev[i];
                acc[i] += coef * next[i];
            }
            std::swap(prev, cur);
            std::swap(cur, next);
        }
    }
    const Complex global = std::exp(Complex(0.0, -tau * c));
    for (std::size_t i = 0; i < d; ++i) psi[i] = global * acc[i];
    return matvecs;
}

std::vector<Complex> evolve_state(const SweepHamiltonian& h, const SweepSchedule& schedule, std::vector<Complex> psi,
                                  std::size_t* matvecs) {
    const std::size_t w = schedule.resolve_windows(h);
    const double dt = schedule.T / static_cast<double>(w);
    // Fourth-order commutator-free Magnus: Gauss nodes c1, c2 and weights
    // a1, a2; since H is affine in s, a1 H(s1) + a2 H(s2) = H(sa) / 2.
    const double g = std::sqrt(3.0) / 6.0;
    const double a1 = 0.25 + g;
    const double a2 = 0.25 - g;
    std::size_t count = 0;
    for (std::size_t k = 0; k < w; ++k) {
        const double s1 = (static_cast<double>(k) + 0.5 - g) / static_cast<double>(w);
        const double s2 = (static_cast<double>(k) + 0.5 + g) / static_cast<double>(w);
        const double sa = std::clamp(2.0 * (a1 * s1 + a2 * s2), 0.0, 1.0);
        const double sb = std::clamp(2.0 * (a2 * s1 + a1 * s2), 0.0, 1.0);
        count += propagate_fixed(h, sa, 0.5 * dt, psi);
        count += propagate_fixed(h, sb, 0.5 * dt, psi);
    }
    if (matvecs) *matvecs = count;
    return psi;
}

SweepResult summarize(const SweepHamiltonian& h, double T, std::vector<double> probs) {
    SweepResult r;
    r.T = T;
    const auto diag = h.diagonal();
    for (std::size_t c = 0; c < diag.size(); ++c) r.grouped[diag[c]] += probs[c];
    r.probs = std::move(probs);
    const auto levels = distinct_levels(diag, 3);
    auto at = [&](std::int64_t level) {
        const auto it = r.grouped.find(level);
        return it == r.grouped.end() ? 0.0 : it->second;
    };
    r.p_zero = at(0);
    std::size_t first_nonzero = levels.empty() || levels[0] != 0 ? 0 : 1;
    if (levels.size() > first_nonzero) {
        r.level1 = levels[first_nonzero];
        r.p_lambda1 = at(r.level1);
    }
    if (levels.size() > first_nonzero + 1) {
        r.level2 = levels[first_nonzero + 1];
        r.p_second = at(r.level2);
    }
    return r;
}

SweepResult evolve(const SweepHamiltonian& h, const SweepSchedule& schedule) {
    const bool too_wide = h.space() == SweepSpace::Full ? h.n_qubits() > schedule.max_qubits
                                                        : h.dim() > (std::size_t{1} << schedule.max_qubits);
    if (too_wide) throw ResourceLimitError("sweep exceeds the configured qubit cap");
    std::size_t matvecs = 0;
    auto psi = evolve_state(h, schedule, h.initial_state(), &matvecs);
    double norm2 = 0.0;
    for (const auto& a : psi) norm2 += std::norm(a);
    const double drift = std::abs(norm2 - 1.0);
    if (!(drift <= schedule.max_norm_drift))
        throw IntegratorError("norm drift " + std::to_string(drift) + " exceeds bound at T=" +
                                  std::to_string(schedule.T),
                              drift);
    std::vector<double> probs(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi[i]) / norm2;
    SweepResult r = summarize(h, schedule.T, std::move(probs));
    r.norm_drift = drift;
    r.windows = schedule.resolve_windows(h);
    r.matvecs = matvecs;
    return r;
}

SweepResult evolve(const ProblemDiagonal& diag, const DriverSpec& driver, const SweepSchedule& schedule) {
    return evolve(SweepHamiltonian::full(diag, driver), schedule);
}

std::vector<double> configuration_probabilities(const SweepHamiltonian& h, const SweepResult& r) {
    if (h.space() == SweepSpace::Full) return r.probs;
    if (h.n_qubits() > kMaxDiagonalQubits) throw ResourceLimitError("configuration space too large to expand");
    const auto& ladders = h.ladder_sizes();
    std::vector<double> out(std::size_t{1} << h.n_qubits());
    for (std::uint64_t c = 0; c < out.size(); ++c) {
        std::size_t state = 0, stride = 1, bit = 0;
        for (auto len : ladders) {
            const std::size_t m = len - 1;
            const auto column = (c >> bit) & ((std::uint64_t{1} << m) - 1);
            state += static_cast<std::size_t>(std::popcount(column)) * stride;
            stride *= len;
            bit += m;
        }
        out[c] = r.probs[state] / h.multiplicity(state);
    }
    return out;
}

std::vector<ScanEntry> sweep_scan(const SweepHamiltonian& h, std::span<const double> T_list,
                                  const SweepSchedule& base) {
    if (T_list.empty()) throw std::invalid_argument("sweep scan needs at least one sweep length");
    std::vector<ScanEntry> out(T_list.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < T_list.size(); ++i) {
        out[i].T = T_list[i];
        try {
            SweepSchedule sched = base;
            sched.T = T_list[i];
            out[i].result = evolve(h, sched);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    }
    return out;
}

std::vector<ScanEntry> sweep_scan(const Instance& instance, const QuditEncoding& encoding,
                                  std::span<const double> T_list, const DriverSpec& driver,
                                  const SweepSchedule& base) {
    const IsingModel model = compile(gram(instance.bad_basis()), encoding);
    return sweep_scan(SweepHamiltonian::for_model(model, driver), T_list, base);
}

std::vector<double> powers_of_two(int lo, int hi) {
    std::vector<double> t;
    for (int e = lo; e <= hi; ++e) t.push_back(std::ldexp(1.0, e));
    return t;
}

}  // namespace isvp
