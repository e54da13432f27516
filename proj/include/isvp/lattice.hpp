#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "isvp/errors.hpp"
#include "isvp/matrix.hpp"
#include "isvp/qudit_family.hpp"

namespace isvp {

using IntMatrix = Matrix<std::int64_t>;
using BigMatrix = Matrix<mpz_class>;

/// Integer multipliers of the basis rows.
using CoefficientVector = std::vector<std::int64_t>;

/// Exact determinant by fraction-free (Bareiss) elimination.
mpz_class determinant(const IntMatrix& m);
mpz_class determinant(const BigMatrix& m);

/// A full-rank square integer row basis. Construction rejects anything else.
class Basis {
public:
    explicit Basis(IntMatrix rows);

    std::size_t dim() const { return rows_.rows(); }
    const IntMatrix& rows() const { return rows_; }
    std::span<const std::int64_t> row(std::size_t i) const { return rows_.row(i); }

    /// |det|, the covolume of the lattice.
    const mpz_class& covolume() const { return covolume_; }

    /// Lattice vector x . B.
    std::vector<std::int64_t> combine(std::span<const std::int64_t> x) const;
    std::int64_t squared_length(std::span<const std::int64_t> x) const;

private:
    IntMatrix rows_;
    mpz_class covolume_;
};

using GramMatrix = IntMatrix;

/// G_ij = b_i . b_j.
GramMatrix gram(const Basis& basis);

/// Row-style Hermite Normal Form: upper triangular, positive pivots, entries
/// above a pivot reduced into [0, pivot).
struct HnfBasis {
    BigMatrix rows;
    std::vector<std::size_t> pivots;  // pivot column of each row

    mpz_class pivot(std::size_t i) const { return rows(i, pivots[i]); }
    mpz_class covolume() const;
    Basis to_basis() const;  // throws std::overflow_error when entries exceed int64

    friend bool operator==(const HnfBasis&, const HnfBasis&) = default;
};

HnfBasis hnf(const BigMatrix& rows);
HnfBasis hnf(const IntMatrix& rows);
inline HnfBasis hnf(const Basis& basis) { return hnf(basis.rows()); }

/// True iff exactly one pivot differs from 1. The identity lattice (no
/// non-unit pivot) is not optimal.
bool is_optimal_hnf(const HnfBasis& h);

/// sqrt(n) * d^(1/n).
double minkowski_bound(std::size_t n, double d);

/// Exact test of lambda1^2 <= n * d^(2/n), i.e. lambda1_sq^n <= n^n d^2.
bool within_minkowski(std::int64_t lambda1_sq, std::size_t n, const mpz_class& d);

struct QubitBudget {
    std::int64_t per_qudit = 0;
    std::int64_t total = 0;
    friend bool operator==(const QubitBudget&, const QubitBudget&) = default;
};

/// Qubits needed so that the qudit range covers the coordinate bound for an
/// optimal-HNF lattice. Binary: ceil(1 + 1.5 log2 n + log2(d)/n) per qudit.
/// Hamming: ceil(2 n^1.5 d^(1/n)) per qudit. Both evaluated exactly.
QubitBudget qubit_budget(std::size_t n, const mpz_class& d, QuditFamily family);

/// Per-coordinate closed integer intervals.
class CoefficientBox {
public:
    CoefficientBox() = default;
    explicit CoefficientBox(std::vector<std::pair<std::int64_t, std::int64_t>> bounds);

    static CoefficientBox cube(std::size_t n, std::int64_t lo, std::int64_t hi);
    static CoefficientBox symmetric(std::size_t n, std::int64_t radius) { return cube(n, -radius, radius); }

    std::size_t dim() const { return bounds_.size(); }
    const std::pair<std::int64_t, std::int64_t>& operator[](std::size_t i) const { return bounds_[i]; }
    const auto& bounds() const { return bounds_; }

    mpz_class point_count() const;
    bool contains(std::span<const std::int64_t> x) const;

    friend bool operator==(const CoefficientBox&, const CoefficientBox&) = default;

private:
    std::vector<std::pair<std::int64_t, std::int64_t>> bounds_;
};

/// Coordinate box guaranteed to contain a shortest vector in HNF coordinates
/// of an optimal-HNF lattice: |x_i| <= sqrt(n) d^(1/n) for i < n and
/// |x_n| <= 2 n^1.5 d^(1/n), both floored exactly.
CoefficientBox theorem_box(std::size_t n, const mpz_class& d);

struct OracleResult {
    std::int64_t lambda1_sq = 0;
    std::vector<CoefficientVector> witnesses;  // lexicographic order
    CoefficientBox search_box;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000'000ULL;

/// Exhaustive shortest-vector search over every nonzero point of the box.
OracleResult brute_force_svp(const Basis& basis, const CoefficientBox& box,
                             std::uint64_t max_points = kDefaultEnumerationCap);

/// Box guaranteed to hold the coefficients of every lattice vector of squared
/// length <= radius_sq: |x_i| <= sqrt(radius_sq) * |column i of B^-1|.
CoefficientBox inverse_basis_box(const Basis& basis, std::int64_t radius_sq);

/// lambda1 of the lattice spanned by `basis`, searching the smaller of the
/// inverse-basis boxes of the basis and of its HNF, with radius the shortest row.
OracleResult lattice_svp(const Basis& basis, std::uint64_t max_points = kDefaultEnumerationCap);

struct Instance {
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    IntMatrix good;        // entries in {0,1}
    IntMatrix unimodular;  // entries in [-6,6], det = +-1
    IntMatrix bad;         // unimodular * good, same lattice as good

    Basis good_basis() const { return Basis(good); }
    Basis bad_basis() const { return Basis(bad); }
};

/// Seeded random SVP instance: a {0,1} good basis and a scrambled bad basis
/// of the same lattice.
Instance generate_instance(std::size_t n, std::uint64_t seed);

/// Solve x . rows = v over the rationals; returns x if it is integral.
std::optional<std::vector<mpz_class>> express_in_basis(const BigMatrix& rows,
                                                       std::span<const mpz_class> v);

/// Each basis is an integral combination of the other.
bool same_lattice(const BigMatrix& a, const BigMatrix& b);

BigMatrix to_big(const IntMatrix& m);

}  // namespace isvp
