#include "isvp/encoding.hpp"

#include <stdexcept>
#include <string>

namespace isvp {

QuditEncoding QuditEncoding::hamming(int k) {
    if (k < 0 || k > 5) throw std::invalid_argument("Hamming range exponent must be in [0, 5]");
    const int half = 1 << k;
    return QuditEncoding(QuditFamily::Hamming, -half, half, 2 * half);
}

QuditEncoding QuditEncoding::binary(int k) {
    if (k < 0 || k > 30) throw std::invalid_argument("binary range exponent must be in [0, 30]");
    const int half = 1 << k;
    return QuditEncoding(QuditFamily::Binary, -half, half - 1, k + 1);
}

QuditEncoding QuditEncoding::from_range(QuditFamily family, int lo, int hi) {
    const std::string where = "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    if (family == QuditFamily::Hamming) {
        if (hi < 1 || lo != -hi || hi > 31)
            throw std::invalid_argument("Hamming qudits need a symmetric range [-r, r] with r >= 1, got " + where);
        return QuditEncoding(family, lo, hi, 2 * hi);
    }
    for (int k = 0; k <= 30; ++k)
        if (lo == -(1 << k) && hi == (1 << k) - 1) return binary(k);
    throw std::invalid_argument("binary qudits need a range [-2^k, 2^k - 1], got " + where);
}

mpq_class QuditEncoding::weight(int p) const {
    if (p < 0 || p >= qubits_) throw std::out_of_range("qubit position outside qudit");
    if (family_ == QuditFamily::Hamming) return mpq_class(1, 2);
    // -2^(p-1)
    mpq_class w = p == 0 ? mpq_class(1, 2) : mpq_class(mpz_class(1) << (p - 1));
    return -w;
}

mpq_class QuditEncoding::constant() const {
    return family_ == QuditFamily::Hamming ? mpq_class(0) : mpq_class(-1, 2);
}

SpinConfig spins_from_index(std::uint64_t index, std::size_t n) {
    SpinConfig s(n);
    for (std::size_t q = 0; q < n; ++q) s[q] = ((index >> q) & 1U) ? -1 : 1;
    return s;
}

int qudit_value(const QuditEncoding& enc, std::span<const std::int8_t> column) {
    if (static_cast<int>(column.size()) != enc.qubits_per_qudit())
        throw std::invalid_argument("qudit column has " + std::to_string(column.size()) + " spins, encoding needs " +
                                    std::to_string(enc.qubits_per_qudit()));
    if (enc.family() == QuditFamily::Hamming) {
        int sum = 0;
        for (auto s : column) sum += s;
        return sum / 2;
    }
    // Integer form of -sum 2^(p-1) s_p - 1/2: sum over set bits minus 2^k.
    int v = 0;
    for (std::size_t p = 0; p < column.size(); ++p)
        if (column[p] < 0) v += 1 << p;
    return v + enc.lo();
}

std::uint64_t redundancy(const QuditEncoding& enc, int value) {
    if (value < enc.lo() || value > enc.hi())
        throw std::out_of_range("value " + std::to_string(value) + " outside encoding range");
    if (enc.family() == QuditFamily::Binary) return 1;
    const int m = enc.qubits_per_qudit();
    const int k = m / 2 + value;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
    return b.get_ui();
}

std::size_t QuditLayout::n_qubits() const {
    std::size_t n = 0;
    for (const auto& q : qudits) n += q.size();
    return n;
}

QuditLayout contiguous_layout(const QuditEncoding& enc, std::size_t n_qudits) {
    QuditLayout layout{enc, {}};
    const int m = enc.qubits_per_qudit();
    for (std::size_t j = 0; j < n_qudits; ++j) {
        std::vector<int> col(m);
        for (int p = 0; p < m; ++p) col[p] = static_cast<int>(j) * m + p;
        layout.qudits.push_back(std::move(col));
    }
    return layout;
}

IsingModel::IsingModel(std::size_t n_qubits, QuditLayout layout)
    : offset_(0), h_(n_qubits, mpq_class(0)), layout_(std::move(layout)) {}

void IsingModel::add_field(int i, const mpq_class& v) { h_.at(static_cast<std::size_t>(i)) += v; }

void IsingModel::add_coupling(int i, int j, const mpq_class& v) {
    if (i == j) throw std::invalid_argument("self-coupling");
    if (i < 0 || j < 0 || static_cast<std::size_t>(std::max(i, j)) >= n_qubits())
        throw std::out_of_range("coupling index out of range");
    couplings_[{std::min(i, j), std::max(i, j)}] += v;
}

void IsingModel::prune() {
    std::erase_if(couplings_, [](const auto& kv) { return kv.second == 0; });
}

mpq_class IsingModel::energy(std::span<const std::int8_t> config) const {
    if (config.size() != n_qubits()) throw std::invalid_argument("configuration length does not match model");
    mpq_class e = offset_;
    for (std::size_t i = 0; i < h_.size(); ++i)
        if (config[i] > 0)
            e += h_[i];
        else
            e -= h_[i];
    for (const auto& [ij, v] : couplings_) {
        if (config[ij.first] == config[ij.second])
            e += v;
        else
            e -= v;
    }
    return e;
}

mpz_class IsingModel::common_denominator() const {
    mpz_class l = offset_.get_den();
    for (const auto& v : h_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& [ij, v] : couplings_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

IsingModel compile(const GramMatrix& gram, const QuditEncoding& encoding) {
    const std::size_t n = gram.rows();
    if (!gram.square() || n == 0) throw std::invalid_argument("Gram matrix must be square and non-empty");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (gram(i, j) != gram(j, i)) throw std::invalid_argument("Gram matrix is not symmetric");

    QuditLayout layout = contiguous_layout(encoding, n);
    const int m = encoding.qubits_per_qudit();
    IsingModel model(layout.n_qubits(), layout);

    const mpq_class c = encoding.constant();
    std::vector<mpq_class> a(m);
    for (int p = 0; p < m; ++p) a[p] = encoding.weight(p);

    // (c + sum_p a_p Z_ip)(c + sum_q a_q Z_jq) G_ij over ordered (i, j).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const mpq_class g(static_cast<long>(gram(i, j)));
            if (g == 0) continue;
            model.add_offset(g * c * c);
            for (int p = 0; p < m; ++p) {
                model.add_field(layout.qudits[i][p], g * c * a[p]);
                model.add_field(layout.qudits[j][p], g * c * a[p]);
            }
            for (int p = 0; p < m; ++p) {
                for (int q = 0; q < m; ++q) {
                    const int u = layout.qudits[i][p];
                    const int v = layout.qudits[j][q];
                    const mpq_class w = g * a[p] * a[q];
                    if (u == v)
                        model.add_offset(w);  // Z^2 = 1
                    else
                        model.add_coupling(u, v, w);
                }
            }
        }
    }
    model.prune();
    return model;
}

CoefficientVector decode(const QuditLayout& layout, std::span<const std::int8_t> config) {
    if (config.size() != layout.n_qubits())
        throw std::invalid_argument("configuration length does not match layout");
    CoefficientVector x;
    x.reserve(layout.qudits.size());
    std::vector<std::int8_t> column;
    for (const auto& qudit : layout.qudits) {
        column.clear();
        for (int q : qudit) column.push_back(config[static_cast<std::size_t>(q)]);
        x.push_back(qudit_value(layout.encoding, column));
    }
    return x;
}

CoefficientVector decode(const IsingModel& model, std::span<const std::int8_t> config) {
    return decode(model.layout(), config);
}

CoefficientBox encoding_box(const QuditEncoding& enc, std::size_t n_qudits) {
    return CoefficientBox::cube(n_qudits, enc.lo(), enc.hi());
}

}  // namespace isvp
