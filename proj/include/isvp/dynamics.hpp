#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isvp/spectrum.hpp"

namespace isvp {

/// Linear sweep s(t) = t / T of duration T (hbar = 1, T in inverse energy units).
struct SweepSchedule {
    double T = 1.0;
    /// Integration windows; 0 picks the larger of ceil(T * R / window_phase)
    /// and ceil(T^(3/4) * sqrt(R) / rate_coefficient), R = max|diag| + h0 n.
    /// The second term governs short sweeps, where the Hamiltonian changes
    /// fastest relative to its scale.
    std::size_t windows = 0;
    /// Phase budget per window in the automatic rule.
    double window_phase = 12.0;
    double rate_coefficient = 0.12;
    std::size_t min_windows = 8;
    /// Largest |norm^2 - 1| tolerated before the final renormalization.
    double max_norm_drift = 1e-9;
    /// Largest qubit count simulated in the full basis (sector simulations
    /// are bounded by dimension 2^max_qubits instead).
    std::size_t max_qubits = 24;

    std::size_t resolve_windows(const SweepHamiltonian& h) const;
};

/// Final-state outcome of one sweep.
struct SweepResult {
    double T = 0.0;
    /// Probability of each basis state of the simulation space. For the full
    /// space this is the 2^n configuration distribution.
    std::vector<double> probs;
    /// Squared lattice-vector length -> total probability.
    std::map<std::int64_t, double> grouped;
    double p_zero = 0.0;
    double p_lambda1 = 0.0;  // smallest nonzero squared length of H_P
    double p_second = 0.0;   // second-smallest nonzero squared length
    std::int64_t level1 = 0;
    std::int64_t level2 = 0;
    double norm_drift = 0.0;  // |norm^2 - 1| before renormalization
    std::size_t windows = 0;
    std::size_t matvecs = 0;
};

/// Uniform superposition 2^(-n/2) over n qubits.
std::vector<Complex> initial_state(std::size_t n_qubits);

/// psi <- exp(-i tau H(s)) psi by Chebyshev expansion; returns matvec count.
std::size_t propagate_fixed(const SweepHamiltonian& h, double s, double tau, std::span<Complex> psi,
                            double tol = 1e-15);

/// Integrate i dpsi/dt = H(t/T) psi from the driver ground state. Each
/// window applies the fourth-order commutator-free Magnus pair of
/// exponentials at the two Gauss points.
SweepResult evolve(const SweepHamiltonian& h, const SweepSchedule& schedule);
SweepResult evolve(const ProblemDiagonal& diag, const DriverSpec& driver, const SweepSchedule& schedule);

/// Integrate from an arbitrary state; returns the final state.
std::vector<Complex> evolve_state(const SweepHamiltonian& h, const SweepSchedule& schedule,
                                  std::vector<Complex> psi, std::size_t* matvecs = nullptr);

/// Group final probabilities by squared length and fill the summary fields.
SweepResult summarize(const SweepHamiltonian& h, double T, std::vector<double> probs);

/// Configuration-space probabilities (length 2^n) of a result.
std::vector<double> configuration_probabilities(const SweepHamiltonian& h, const SweepResult& r);

struct ScanEntry {
    double T = 0.0;
    std::optional<SweepResult> result;
    std::string error;
};

/// One evolve per sweep length; a failure at one T is recorded, not thrown.
std::vector<ScanEntry> sweep_scan(const SweepHamiltonian& h, std::span<const double> T_list,
                                  const SweepSchedule& base = {});

/// Compile the instance's bad basis under `encoding` and scan.
std::vector<ScanEntry> sweep_scan(const Instance& instance, const QuditEncoding& encoding,
                                  std::span<const double> T_list, const DriverSpec& driver = {},
                                  const SweepSchedule& base = {});

/// 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<double> powers_of_two(int lo, int hi);

}  // namespace isvp
