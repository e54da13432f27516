#pragma once

// Deliberately naive reference implementations used to check the library.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "isvp/lattice.hpp"

namespace oracle {

using Rows = std::vector<std::vector<std::int64_t>>;

inline Rows to_rows(const isvp::IntMatrix& m) {
    Rows r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) r[i].assign(m.row(i).begin(), m.row(i).end());
    return r;
}

inline isvp::IntMatrix to_matrix(const Rows& r) {
    isvp::IntMatrix m(r.size(), r.front().size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r[i].size(); ++j) m(i, j) = r[i][j];
    return m;
}

// Cofactor expansion along the first row.
inline mpz_class laplace_det(const Rows& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    mpz_class det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c] == 0) continue;
        Rows minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<std::int64_t> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(row);
        }
        const mpz_class term = mpz_class(static_cast<long>(m[0][c])) * laplace_det(minor);
        det += (c % 2 == 0) ? term : mpz_class(-term);
    }
    return det;
}

// v lies in the row lattice of b iff every Cramer numerator is divisible by det b.
inline bool in_lattice(const Rows& b, const std::vector<std::int64_t>& v) {
    const mpz_class d = laplace_det(b);
    for (std::size_t k = 0; k < b.size(); ++k) {
        // Solve x b = v: x_k = det(b with row k replaced by v) / det(b).
        Rows m = b;
        m[k] = v;
        if (laplace_det(m) % d != 0) return false;
    }
    return true;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Column-by-column Euclid on rows by repeated remainder steps, then
// normalization of the entries above each pivot.
inline Rows naive_hnf(Rows m) {
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        while (true) {
            std::size_t best = n;
            for (std::size_t r = c; r < n; ++r)
                if (m[r][c] != 0 && (best == n || std::llabs(m[r][c]) < std::llabs(m[best][c]))) best = r;
            std::swap(m[c], m[best]);
            bool done = true;
            for (std::size_t r = c + 1; r < n; ++r) {
                if (m[r][c] == 0) continue;
                const std::int64_t q = floor_div(m[r][c], m[c][c]);
                for (std::size_t k = 0; k < n; ++k) m[r][k] -= q * m[c][k];
                if (m[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (m[c][c] < 0)
            for (auto& x : m[c]) x = -x;
        for (std::size_t r = 0; r < c; ++r) {
            const std::int64_t q = floor_div(m[r][c], m[c][c]);
            for (std::size_t k = 0; k < n; ++k) m[r][k] -= q * m[c][k];
        }
    }
    return m;
}

inline std::int64_t norm_sq(const std::vector<std::int64_t>& v) {
    std::int64_t s = 0;
    for (auto x : v) s += x * x;
    return s;
}

inline std::vector<std::int64_t> combine(const Rows& b, const std::vector<std::int64_t>& x) {
    std::vector<std::int64_t> v(b.front().size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += x[i] * b[i][j];
    return v;
}

// Optimal HNF: rows e_i + a_i e_n for i < n, and D e_n.
struct OptimalLattice {
    std::size_t n;
    std::int64_t d;
    std::vector<std::int64_t> a;  // length n - 1

    Rows rows() const {
        Rows r(n, std::vector<std::int64_t>(n, 0));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            r[i][i] = 1;
            r[i][n - 1] = a[i];
        }
        r[n - 1][n - 1] = d;
        return r;
    }
    bool contains(const std::vector<std::int64_t>& v) const {
        std::int64_t t = v[n - 1];
        for (std::size_t i = 0; i + 1 < n; ++i) t -= a[i] * v[i];
        return t % d == 0;
    }
    // Coordinates of v in this basis.
    std::vector<std::int64_t> coordinates(const std::vector<std::int64_t>& v) const {
        std::vector<std::int64_t> x(v.begin(), v.end());
        std::int64_t t = v[n - 1];
        for (std::size_t i = 0; i + 1 < n; ++i) t -= a[i] * v[i];
        x[n - 1] = t / d;
        return x;
    }
};

inline OptimalLattice random_optimal_lattice(std::size_t n, std::mt19937_64& rng, std::int64_t max_d) {
    std::uniform_int_distribution<std::int64_t> dd(2, max_d);
    OptimalLattice l{n, dd(rng), {}};
    std::uniform_int_distribution<std::int64_t> ad(0, l.d - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) l.a.push_back(ad(rng));
    return l;
}

// All shortest nonzero vectors of an optimal lattice, found by scanning the
// ambient integer ball of squared radius n * d^(2/n) (Minkowski).
inline std::pair<std::int64_t, Rows> shortest_vectors(const OptimalLattice& l) {
    std::int64_t r2 = 0;
    while (true) {
        // largest r2 with r2^n <= n^n d^2
        mpz_class lhs, rhs;
        mpz_pow_ui(lhs.get_mpz_t(), mpz_class(static_cast<long>(r2 + 1)).get_mpz_t(), l.n);
        mpz_pow_ui(rhs.get_mpz_t(), mpz_class(static_cast<long>(l.n)).get_mpz_t(), l.n);
        rhs *= mpz_class(static_cast<long>(l.d)) * mpz_class(static_cast<long>(l.d));
        if (lhs > rhs) break;
        ++r2;
    }
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= r2) ++r;
    std::int64_t best = r2 + 1;
    Rows winners;
    std::vector<std::int64_t> v(l.n, -r);
    while (true) {
        const auto s = norm_sq(v);
        if (s > 0 && s <= best && l.contains(v)) {
            if (s < best) {
                best = s;
                winners.clear();
            }
            winners.push_back(v);
        }
        std::size_t i = 0;
        while (i < l.n && v[i] == r) v[i++] = -r;
        if (i == l.n) break;
        ++v[i];
    }
    return {best, winners};
}

}  // namespace oracle
