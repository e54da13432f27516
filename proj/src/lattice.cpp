#include "isvp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace isvp {

std::string_view to_string(QuditFamily f) { return f == QuditFamily::Hamming ? "ham" : "bin"; }

QuditFamily parse_family(std::string_view s) {
    if (s == "ham" || s == "hamming") return QuditFamily::Hamming;
    if (s == "bin" || s == "binary") return QuditFamily::Binary;
    throw std::invalid_argument("unknown qudit family '" + std::string(s) + "'");
}

BigMatrix to_big(const IntMatrix& m) {
    BigMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = static_cast<long>(m(i, j));
    return out;
}

mpz_class determinant(const BigMatrix& input) {
    if (!input.square()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = input.rows();
    if (n == 0) return 1;
    BigMatrix a = input;
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

mpz_class determinant(const IntMatrix& m) { return determinant(to_big(m)); }

Basis::Basis(IntMatrix rows) : rows_(std::move(rows)) {
    if (!rows_.square() || rows_.rows() == 0)
        throw std::invalid_argument("basis must be a non-empty square matrix");
    covolume_ = abs(determinant(rows_));
    if (covolume_ == 0) throw std::invalid_argument("basis is singular");
}

std::vector<std::int64_t> Basis::combine(std::span<const std::int64_t> x) const {
    if (x.size() != dim()) throw std::invalid_argument("coefficient vector has wrong length");
    std::vector<std::int64_t> v(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) v[j] += x[i] * rows_(i, j);
    return v;
}

std::int64_t Basis::squared_length(std::span<const std::int64_t> x) const {
    std::int64_t s = 0;
    for (auto c : combine(x)) s += c * c;
    return s;
}

GramMatrix gram(const Basis& basis) {
    const std::size_t n = basis.dim();
    GramMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < n; ++k) s += basis.rows()(i, k) * basis.rows()(j, k);
            g(i, j) = g(j, i) = s;
        }
    return g;
}

mpz_class HnfBasis::covolume() const {
    mpz_class d = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) d *= pivot(i);
    return d;
}

Basis HnfBasis::to_basis() const {
    IntMatrix m(rows.rows(), rows.cols());
    for (std::size_t i = 0; i < rows.rows(); ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            if (!rows(i, j).fits_slong_p()) throw std::overflow_error("HNF entry exceeds 64 bits");
            m(i, j) = rows(i, j).get_si();
        }
    return Basis(std::move(m));
}

HnfBasis hnf(const BigMatrix& input) {
    if (!input.square() || input.rows() == 0)
        throw std::invalid_argument("HNF needs a non-empty square matrix");
    if (determinant(input) == 0) throw std::invalid_argument("HNF input is singular");

    const std::size_t n = input.rows();
    BigMatrix a = input;
    HnfBasis out;
    std::size_t r = 0;
    mpz_class g, p, q, ra, rb;
    for (std::size_t col = 0; col < n && r < n; ++col) {
        for (std::size_t i = r + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            if (a(r, col) == 0) {
                for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(i, j));
                continue;
            }
            mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a(r, col).get_mpz_t(),
                       a(i, col).get_mpz_t());
            ra = a(r, col) / g;
            rb = a(i, col) / g;
            // [[p, q], [-rb, ra]] has determinant 1.
            for (std::size_t j = 0; j < n; ++j) {
                mpz_class top = p * a(r, j) + q * a(i, j);
                mpz_class bottom = ra * a(i, j) - rb * a(r, j);
                a(r, j) = std::move(top);
                a(i, j) = std::move(bottom);
            }
        }
        if (a(r, col) == 0) continue;
        if (a(r, col) < 0)
            for (std::size_t j = 0; j < n; ++j) a(r, j) = -a(r, j);
        for (std::size_t k = 0; k < r; ++k) {
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), a(k, col).get_mpz_t(), a(r, col).get_mpz_t());
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) a(k, j) -= f * a(r, j);
        }
        out.pivots.push_back(col);
        ++r;
    }
    out.rows = std::move(a);
    return out;
}

HnfBasis hnf(const IntMatrix& rows) { return hnf(to_big(rows)); }

bool is_optimal_hnf(const HnfBasis& h) {
    std::size_t non_unit = 0;
    for (std::size_t i = 0; i < h.pivots.size(); ++i)
        if (h.pivot(i) != 1) ++non_unit;
    return non_unit == 1;
}

double minkowski_bound(std::size_t n, double d) {
    return std::sqrt(static_cast<double>(n)) * std::pow(d, 1.0 / static_cast<double>(n));
}

namespace {

mpz_class pow_ui(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// 2^(2n) n^(3n) d^2: the 2n-th power of 2 n^1.5 d^(1/n).
mpz_class last_coordinate_power(std::size_t n, const mpz_class& d) {
    const auto un = static_cast<unsigned long>(n);
    return pow_ui(2, 2 * un) * pow_ui(mpz_class(un), 3 * un) * d * d;
}

mpz_class floor_root(const mpz_class& x, unsigned long k) {
    mpz_class r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

}  // namespace

bool within_minkowski(std::int64_t lambda1_sq, std::size_t n, const mpz_class& d) {
    const auto un = static_cast<unsigned long>(n);
    return pow_ui(mpz_class(static_cast<long>(lambda1_sq)), un) <= pow_ui(mpz_class(un), un) * d * d;
}

QubitBudget qubit_budget(std::size_t n, const mpz_class& d, QuditFamily family) {
    if (n == 0 || d < 1) throw std::invalid_argument("qubit budget needs n >= 1 and d >= 1");
    const mpz_class x = last_coordinate_power(n, d);
    const auto two_n = static_cast<unsigned long>(2 * n);
    QubitBudget b;
    if (family == QuditFamily::Binary) {
        // smallest p with 2^(2pn) >= x
        const mpz_class xm1 = x - 1;
        const std::size_t bits = xm1 == 0 ? 0 : mpz_sizeinbase(xm1.get_mpz_t(), 2);
        b.per_qudit = static_cast<std::int64_t>((bits + two_n - 1) / two_n);
    } else {
        // smallest q with q^(2n) >= x
        mpz_class r = floor_root(x, two_n);
        if (pow_ui(r, two_n) < x) r += 1;
        b.per_qudit = r.get_si();
    }
    b.total = b.per_qudit * static_cast<std::int64_t>(n);
    return b;
}

CoefficientBox::CoefficientBox(std::vector<std::pair<std::int64_t, std::int64_t>> bounds)
    : bounds_(std::move(bounds)) {
    for (const auto& [lo, hi] : bounds_)
        if (lo > hi) throw std::invalid_argument("empty coefficient interval");
}

CoefficientBox CoefficientBox::cube(std::size_t n, std::int64_t lo, std::int64_t hi) {
    return CoefficientBox(std::vector<std::pair<std::int64_t, std::int64_t>>(n, {lo, hi}));
}

mpz_class CoefficientBox::point_count() const {
    mpz_class c = 1;
    for (const auto& [lo, hi] : bounds_) c *= mpz_class(static_cast<long>(hi - lo + 1));
    return c;
}

bool CoefficientBox::contains(std::span<const std::int64_t> x) const {
    if (x.size() != bounds_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < bounds_[i].first || x[i] > bounds_[i].second) return false;
    return true;
}

CoefficientBox theorem_box(std::size_t n, const mpz_class& d) {
    if (n == 0 || d < 1) throw std::invalid_argument("theorem box needs n >= 1 and d >= 1");
    const auto un = static_cast<unsigned long>(n);
    const mpz_class inner = floor_root(pow_ui(mpz_class(un), un) * d * d, 2 * un);
    const mpz_class last = floor_root(last_coordinate_power(n, d), 2 * un);
    if (!inner.fits_slong_p() || !last.fits_slong_p()) throw ResourceLimitError("theorem box exceeds 64 bits");
    std::vector<std::pair<std::int64_t, std::int64_t>> b(n, {-inner.get_si(), inner.get_si()});
    b.back() = {-last.get_si(), last.get_si()};
    return CoefficientBox(std::move(b));
}

OracleResult brute_force_svp(const Basis& basis, const CoefficientBox& box, std::uint64_t max_points) {
    const std::size_t n = basis.dim();
    if (box.dim() != n) throw std::invalid_argument("box dimension does not match basis");
    if (!box.contains(std::vector<std::int64_t>(n, 0)))
        throw std::invalid_argument("search box must contain the zero vector");
    if (box.point_count() > mpz_class(std::to_string(max_points)))
        throw ResourceLimitError("search box has " + box.point_count().get_str() + " points, cap is " +
                                 std::to_string(max_points));

    const IntMatrix& b = basis.rows();
    CoefficientVector x(n);
    std::vector<std::int64_t> v(n, 0);
    for (std::size_t i = 0; i < n; ++i) x[i] = box[i].first;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[j] += x[i] * b(i, j);

    OracleResult res;
    res.search_box = box;
    res.lambda1_sq = std::numeric_limits<std::int64_t>::max();
    for (;;) {
        std::int64_t len = 0;
        for (auto c : v) len += c * c;
        if (len > 0 && len <= res.lambda1_sq) {
            if (len < res.lambda1_sq) {
                res.lambda1_sq = len;
                res.witnesses.clear();
            }
            res.witnesses.push_back(x);
        }
        // odometer, last coordinate fastest
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (x[j] < box[j].second) {
                ++x[j];
                for (std::size_t k = 0; k < n; ++k) v[k] += b(j, k);
                break;
            }
            const std::int64_t span = box[j].second - box[j].first;
            for (std::size_t k = 0; k < n; ++k) v[k] -= span * b(j, k);
            x[j] = box[j].first;
            if (j == 0) {
                j = n;  // sentinel: wrapped around
                break;
            }
        }
        if (j == n) break;
    }
    if (res.witnesses.empty()) throw std::invalid_argument("search box contains no nonzero point");
    return res;
}

namespace {

IntMatrix random_good_basis(std::size_t n, std::mt19937_64& rng) {
    std::bernoulli_distribution bit(0.5);
    for (;;) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = bit(rng) ? 1 : 0;
        if (determinant(m) != 0) return m;
    }
}

// Product of elementary row operations; an operation that would push any
// entry outside [-6, 6] is rejected and redrawn.
IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
    constexpr std::int64_t kBound = 6;
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<std::int64_t> mult(-3, 3);
    const std::size_t target = 6 * n;
    std::size_t applied = 0;
    for (std::size_t attempt = 0; applied < target && attempt < 1000 * target; ++attempt) {
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        const int k = kind(rng);
        if (k == 0) {  // swap
            if (i == j) continue;
            for (std::size_t c = 0; c < n; ++c) std::swap(u(i, c), u(j, c));
        } else if (k == 1) {  // sign flip
            for (std::size_t c = 0; c < n; ++c) u(i, c) = -u(i, c);
        } else {  // row_i += m * row_j
            if (i == j) continue;
            const std::int64_t m = mult(rng);
            if (m == 0) continue;
            bool ok = true;
            for (std::size_t c = 0; c < n && ok; ++c) ok = std::abs(u(i, c) + m * u(j, c)) <= kBound;
            if (!ok) continue;
            for (std::size_t c = 0; c < n; ++c) u(i, c) += m * u(j, c);
        }
        ++applied;
    }
    return u;
}

}  // namespace

Instance generate_instance(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("instances need dimension >= 2");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.dim = n;
    inst.seed = seed;
    inst.good = random_good_basis(n, rng);
    inst.unimodular = random_unimodular(n, rng);
    inst.bad = inst.unimodular * inst.good;
    return inst;
}

std::optional<std::vector<mpz_class>> express_in_basis(const BigMatrix& rows, std::span<const mpz_class> v) {
    const std::size_t n = rows.rows();
    if (!rows.square() || v.size() != n) throw std::invalid_argument("express_in_basis dimension mismatch");
    // Solve rows^T x = v, augmented system over Q.
    Matrix<mpq_class> a(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rows(j, i);
        a(i, n) = v[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) throw std::invalid_argument("express_in_basis: singular basis");
        if (p != c)
            for (std::size_t j = 0; j <= n; ++j) std::swap(a(p, j), a(c, j));
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const mpq_class f = a(i, c) / a(c, c);
            for (std::size_t j = c; j <= n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    std::vector<mpz_class> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class xi = a(i, n) / a(i, i);
        xi.canonicalize();
        if (xi.get_den() != 1) return std::nullopt;
        x[i] = xi.get_num();
    }
    return x;
}

CoefficientBox inverse_basis_box(const Basis& basis, std::int64_t radius_sq) {
    if (radius_sq < 0) throw std::invalid_argument("radius must be non-negative");
    const std::size_t n = basis.dim();
    // Gauss-Jordan on [B | I] over Q.
    Matrix<mpq_class> a(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = basis.rows()(i, j);
        a(i, n + i) = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a(p, c) == 0) ++p;
        if (p != c)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a(p, j), a(c, j));
        const mpq_class pivot = a(c, c);
        for (std::size_t j = 0; j < 2 * n; ++j) a(c, j) /= pivot;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const mpq_class f = a(i, c);
            for (std::size_t j = 0; j < 2 * n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> bounds(n);
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class col_sq = 0;
        for (std::size_t j = 0; j < n; ++j) col_sq += a(j, n + i) * a(j, n + i);
        const mpq_class r2 = col_sq * radius_sq;
        const mpz_class floor_r2 = r2.get_num() / r2.get_den();
        const mpz_class r = sqrt(floor_r2);
        if (!r.fits_slong_p()) throw ResourceLimitError("inverse-basis box exceeds 64-bit coordinates");
        bounds[i] = {-r.get_si(), r.get_si()};
    }
    return CoefficientBox(std::move(bounds));
}

OracleResult lattice_svp(const Basis& basis, std::uint64_t max_points) {
    std::int64_t radius = basis.squared_length(std::vector<std::int64_t>(basis.dim(), 0));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        std::vector<std::int64_t> e(basis.dim(), 0);
        e[i] = 1;
        const auto len = basis.squared_length(e);
        if (i == 0 || len < radius) radius = len;
    }
    const Basis h = hnf(basis).to_basis();
    const CoefficientBox own = inverse_basis_box(basis, radius);
    const CoefficientBox via_hnf = inverse_basis_box(h, radius);
    OracleResult r = via_hnf.point_count() < own.point_count() ? brute_force_svp(h, via_hnf, max_points)
                                                               : brute_force_svp(basis, own, max_points);
    // Report witnesses in the coordinates of the given basis.
    if (via_hnf.point_count() < own.point_count()) {
        const BigMatrix rows = to_big(basis.rows());
        for (auto& w : r.witnesses) {
            const auto v = h.combine(w);
            std::vector<mpz_class> big(v.begin(), v.end());
            const auto x = express_in_basis(rows, big);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = (*x)[i].get_si();
        }
        std::sort(r.witnesses.begin(), r.witnesses.end());
        r.search_box = own;  // also holds every witness, in the given coordinates
    }
    return r;
}

bool same_lattice(const BigMatrix& a, const BigMatrix& b) {
    auto covers = [](const BigMatrix& basis, const BigMatrix& other) {
        for (std::size_t i = 0; i < other.rows(); ++i)
            if (!express_in_basis(basis, other.row(i))) return false;
        return true;
    };
    return a.rows() == b.rows() && covers(a, b) && covers(b, a);
}

}  // namespace isvp
