#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isvp/encoding.hpp"

namespace isvp {

using Complex = std::complex<double>;

/// Eigenvalues of H_P on the computational basis, indexed by configuration
/// (qubit q is bit q of the index). Values are exact squared lengths.
struct ProblemDiagonal {
    std::size_t n_qubits = 0;
    std::vector<std::int64_t> values;

    std::int64_t max_abs() const;
};

inline constexpr std::size_t kMaxDiagonalQubits = 30;

/// Every configuration's compiled energy. Throws if an energy is not an
/// integer or the model is wider than kMaxDiagonalQubits.
ProblemDiagonal problem_diagonal(const IsingModel& model);

struct DriverSpec {
    double h0 = 1.0;
};

/// Which basis the sweep runs in. Hamming-encoded problems and the
/// transverse-field driver commute with qubit permutations inside a qudit, and
/// the driver ground state is permutation symmetric, so sweeps never leave the
/// product of per-qudit symmetric (Dicke) subspaces.
enum class SweepSpace { Full, QuditSymmetric };

/// H(s) = (1 - s) H_0 + s H_P with H_0 = -h0 sum_i X_i, applied matrix-free.
class SweepHamiltonian {
public:
    /// Full 2^n computational basis.
    static SweepHamiltonian full(ProblemDiagonal diag, DriverSpec driver);

    /// Same, keeping the layout so basis states can be decoded to coefficients.
    static SweepHamiltonian full(const IsingModel& model, DriverSpec driver);

    /// Product of per-qudit Hamming-weight ladders; only valid for
    /// Hamming-encoded models. Basis state index = sum_j w_j * stride_j with w_j
    /// the number of -1 spins in qudit j.
    static SweepHamiltonian qudit_symmetric(const IsingModel& model, DriverSpec driver);

    /// QuditSymmetric for Hamming models, Full otherwise.
    static SweepHamiltonian for_model(const IsingModel& model, DriverSpec driver);

    SweepSpace space() const { return space_; }
    std::size_t dim() const { return diag_.size(); }
    std::size_t n_qubits() const { return n_qubits_; }
    double h0() const { return driver_.h0; }

    /// H_P value of each basis state.
    std::span<const std::int64_t> diagonal() const { return diag_; }
    std::int64_t max_abs_diagonal() const;

    /// out = H(s) in.
    void apply(double s, std::span<const double> in, std::span<double> out) const;
    void apply(double s, std::span<const Complex> in, std::span<Complex> out) const;

    /// Guaranteed enclosure of the spectrum of H(s).
    std::pair<double, double> spectral_bounds(double s) const;

    Eigen::MatrixXd dense(double s) const;

    /// Ground state of H_0 (normalized).
    std::vector<Complex> initial_state() const;

    /// Number of computational configurations a basis state stands for.
    double multiplicity(std::size_t state) const;

    /// Coefficient vector of a basis state; needs a model-backed Hamiltonian.
    CoefficientVector coefficients(std::size_t state) const;
    bool can_decode() const { return layout_.has_value(); }

    /// Sector only: Hamming weight ladder length (m_j + 1) per qudit.
    const std::vector<std::size_t>& ladder_sizes() const { return ladders_; }

private:
    SweepHamiltonian() = default;

    template <class S>
    void apply_impl(double s, std::span<const S> in, std::span<S> out) const;

    SweepSpace space_ = SweepSpace::Full;
    std::size_t n_qubits_ = 0;
    DriverSpec driver_;
    std::vector<std::int64_t> diag_;
    std::optional<QuditLayout> layout_;
    // sector data
    std::vector<std::size_t> ladders_;
    std::vector<std::size_t> strides_;
    std::vector<std::vector<double>> hop_;  // hop_[j][w] = <w+1| sum X |w>
};

/// H(s) psi on the full computational basis, built from a bare diagonal.
std::vector<Complex> apply_hamiltonian(const ProblemDiagonal& diag, const DriverSpec& driver, double s,
                                       std::span<const Complex> psi);

struct EigenOptions {
    double tol = 1e-9;               // relative residual tolerance
    std::size_t dense_limit = 2048;  // dense solver at or below this dimension
    std::size_t krylov_dim = 60;
    std::size_t max_restarts = 400;
    std::uint64_t seed = 0x5eed;
};

/// Lowest `count` eigenvalues of H(s), ascending. The Krylov path (dim above
/// dense_limit) resolves distinct levels only; exact degeneracies may appear once.
std::vector<double> low_spectrum(const SweepHamiltonian& h, double s, std::size_t count,
                                 const EigenOptions& opts = {});
std::vector<double> low_spectrum(const ProblemDiagonal& diag, const DriverSpec& driver, double s, std::size_t count,
                                 const EigenOptions& opts = {});

/// Thick-restart Lanczos on a real symmetric operator.
std::vector<double> lanczos_lowest(const std::function<void(std::span<const double>, std::span<double>)>& op,
                                   std::size_t dim, std::size_t count, const EigenOptions& opts);

struct GapProfile {
    std::vector<double> s_grid;
    std::vector<double> e0;
    std::vector<double> e1;
    std::vector<double> gaps;
    double min_s = 0.0;
    double min_gap = 0.0;
};

struct GapScanOptions {
    bool refine = true;  // golden-section search around the grid minimum
    EigenOptions eigen;
};

/// E1 - E0 on a uniform grid over [0, 1]. At s = 1 the levels are the
/// distinct values of H_P, so degenerate ground manifolds do not read as zero gap.
GapProfile gap_scan(const SweepHamiltonian& h, std::size_t grid, const GapScanOptions& opts = {});

/// Ascending distinct values of the diagonal.
std::vector<std::int64_t> distinct_levels(std::span<const std::int64_t> diag, std::size_t count);

}  // namespace isvp
