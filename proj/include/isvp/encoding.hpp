#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "isvp/lattice.hpp"
#include "isvp/qudit_family.hpp"

namespace isvp {

/// How one integer coefficient is carried by a column of qubits.
///
/// Hamming: value = (sum of spins) / 2 over m qubits (m even), range
/// [-m/2, m/2]. Binary: value = -sum_p 2^(p-1) s_p - 1/2 over k+1 qubits,
/// range [-2^k, 2^k - 1].
///
/// Spin convention: bit 0 <-> s = +1, bit 1 <-> s = -1.
class QuditEncoding {
public:
    /// 2^(k+1) qubits, range [-2^k, 2^k].
    static QuditEncoding hamming(int k);
    /// k+1 qubits, range [-2^k, 2^k - 1].
    static QuditEncoding binary(int k);
    /// Explicit range; throws unless some qubit count realizes it exactly.
    static QuditEncoding from_range(QuditFamily family, int lo, int hi);

    QuditFamily family() const { return family_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int qubits_per_qudit() const { return qubits_; }

    /// Per-qubit operator weight a_p and constant c with Q = c + sum_p a_p Z_p.
    mpq_class weight(int p) const;
    mpq_class constant() const;

    friend bool operator==(const QuditEncoding&, const QuditEncoding&) = default;

private:
    QuditEncoding(QuditFamily f, int lo, int hi, int qubits) : family_(f), lo_(lo), hi_(hi), qubits_(qubits) {}
    QuditFamily family_;
    int lo_;
    int hi_;
    int qubits_;
};

/// Spins in {-1, +1}.
using SpinConfig = std::vector<std::int8_t>;

/// Spin configuration of `n` qubits from the bits of `index` (qubit q is bit q).
SpinConfig spins_from_index(std::uint64_t index, std::size_t n);

int qudit_value(const QuditEncoding& enc, std::span<const std::int8_t> column);

/// Number of spin columns mapping to `value`: binomial(m, m/2 + value) for
/// Hamming, 1 for Binary.
std::uint64_t redundancy(const QuditEncoding& enc, int value);

/// Qudit j -> its qubit indices, least significant (p = 0) first.
struct QuditLayout {
    QuditEncoding encoding;
    std::vector<std::vector<int>> qudits;

    std::size_t n_qubits() const;
    friend bool operator==(const QuditLayout&, const QuditLayout&) = default;
};

/// Contiguous columns: qudit j owns qubits [j*m, (j+1)*m).
QuditLayout contiguous_layout(const QuditEncoding& enc, std::size_t n_qudits);

/// Ising energy offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j, with exact
/// rational coefficients taken literally from the expansion of
/// sum_{i,j} G_ij Q_i Q_j.
class IsingModel {
public:
    using Pair = std::pair<int, int>;

    IsingModel(std::size_t n_qubits, QuditLayout layout);

    std::size_t n_qubits() const { return h_.size(); }
    const mpq_class& offset() const { return offset_; }
    const std::vector<mpq_class>& h() const { return h_; }
    const std::map<Pair, mpq_class>& couplings() const { return couplings_; }
    const QuditLayout& layout() const { return layout_; }

    void add_offset(const mpq_class& v) { offset_ += v; }
    void add_field(int i, const mpq_class& v);
    /// Symmetric; rejects i == j.
    void add_coupling(int i, int j, const mpq_class& v);
    /// Drop couplings and fields that cancelled to zero.
    void prune();

    mpq_class energy(std::span<const std::int8_t> config) const;
    double energy_value(std::span<const std::int8_t> config) const { return energy(config).get_d(); }

    /// Smallest positive integer L making every coefficient of L*H integral.
    mpz_class common_denominator() const;

    friend bool operator==(const IsingModel&, const IsingModel&) = default;

private:
    mpq_class offset_;
    std::vector<mpq_class> h_;
    std::map<Pair, mpq_class> couplings_;
    QuditLayout layout_;
};

IsingModel compile(const GramMatrix& gram, const QuditEncoding& encoding);

CoefficientVector decode(const IsingModel& model, std::span<const std::int8_t> config);
CoefficientVector decode(const QuditLayout& layout, std::span<const std::int8_t> config);

/// The coefficient ranges an encoding covers, as an oracle search box.
CoefficientBox encoding_box(const QuditEncoding& enc, std::size_t n_qudits);

}  // namespace isvp
