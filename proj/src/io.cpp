#include "isvp/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace isvp {

namespace {

std::string rational(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const Json& j) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    mpq_class q(j.get<std::string>());
    q.canonicalize();
    return q;
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<std::int64_t>(r.begin(), r.end()));
    }
    return rows;
}

IntMatrix matrix_from_json(const Json& j) {
    const auto rows = j.get<std::vector<std::vector<std::int64_t>>>();
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    IntMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged matrix");
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

Json instance_to_json(const Instance& inst) {
    return {{"dim", inst.dim},
            {"seed", inst.seed},
            {"good_basis", matrix_to_json(inst.good)},
            {"unimodular", matrix_to_json(inst.unimodular)},
            {"bad_basis", matrix_to_json(inst.bad)}};
}

Instance instance_from_json(const Json& j) {
    Instance inst;
    inst.bad = matrix_from_json(j.at("bad_basis"));
    inst.dim = j.value("dim", inst.bad.rows());
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.good = j.contains("good_basis") ? matrix_from_json(j.at("good_basis")) : inst.bad;
    inst.unimodular = j.contains("unimodular") ? matrix_from_json(j.at("unimodular")) : IntMatrix::identity(inst.dim);
    if (inst.bad.rows() != inst.dim) throw std::invalid_argument("instance dim does not match its basis");
    return inst;
}

Json encoding_to_json(const QuditEncoding& enc) {
    return {{"family", std::string(to_string(enc.family()))},
            {"lo", enc.lo()},
            {"hi", enc.hi()},
            {"qubits_per_qudit", enc.qubits_per_qudit()}};
}

QuditEncoding encoding_from_json(const Json& j) {
    return QuditEncoding::from_range(parse_family(j.at("family").get<std::string>()), j.at("lo").get<int>(),
                                     j.at("hi").get<int>());
}

Json model_to_json(const IsingModel& model, const IntMatrix& basis) {
    Json h = Json::array();
    for (const auto& v : model.h()) h.push_back(rational(v));
    Json couplings = Json::array();
    for (const auto& [ij, v] : model.couplings()) couplings.push_back({ij.first, ij.second, rational(v)});
    return {{"n_qubits", model.n_qubits()},
            {"offset", rational(model.offset())},
            {"h", h},
            {"J", couplings},
            {"layout", {{"encoding", encoding_to_json(model.layout().encoding)}, {"qudits", model.layout().qudits}}},
            {"basis", matrix_to_json(basis)}};
}

ModelFile model_from_json(const Json& j) {
    QuditLayout layout{encoding_from_json(j.at("layout").at("encoding")),
                       j.at("layout").at("qudits").get<std::vector<std::vector<int>>>()};
    const auto n = j.at("n_qubits").get<std::size_t>();
    if (layout.n_qubits() != n) throw std::invalid_argument("model layout does not cover n_qubits");
    IsingModel model(n, std::move(layout));
    model.add_offset(parse_rational(j.at("offset")));
    const auto& h = j.at("h");
    if (h.size() != n) throw std::invalid_argument("model h has the wrong length");
    for (std::size_t i = 0; i < n; ++i) model.add_field(static_cast<int>(i), parse_rational(h[i]));
    for (const auto& c : j.at("J")) model.add_coupling(c.at(0).get<int>(), c.at(1).get<int>(), parse_rational(c.at(2)));
    model.prune();
    ModelFile f{std::move(model), matrix_from_json(j.at("basis"))};
    if (f.basis.rows() != f.model.layout().qudits.size())
        throw std::invalid_argument("basis dimension does not match the number of qudits");
    return f;
}

Json sweep_results_to_json(std::span<const ScanEntry> entries, const ModelFile& source, double h0) {
    Json results = Json::array();
    for (const auto& e : entries) {
        if (!e.result) {
            results.push_back({{"T", e.T}, {"error", e.error}});
            continue;
        }
        const auto& r = *e.result;
        Json grouped = Json::object();
        for (const auto& [len, p] : r.grouped) grouped[std::to_string(len)] = p;
        results.push_back({{"T", r.T},
                           {"p_zero", r.p_zero},
                           {"p_lambda1", r.p_lambda1},
                           {"p_second", r.p_second},
                           {"level1", r.level1},
                           {"level2", r.level2},
                           {"norm_drift", r.norm_drift},
                           {"windows", r.windows},
                           {"grouped", grouped}});
    }
    return {{"encoding", encoding_to_json(source.model.layout().encoding)},
            {"basis", matrix_to_json(source.basis)},
            {"h0", h0},
            {"results", results}};
}

LengthDistribution sweep_distribution_from_json(const Json& j, std::optional<double> T) {
    const Json* pick = nullptr;
    for (const auto& e : j.at("results")) {
        if (!e.contains("grouped")) continue;
        const double t = e.at("T").get<double>();
        if (T ? t == *T : (!pick || t > pick->at("T").get<double>())) pick = &e;
    }
    if (!pick) throw std::invalid_argument("no successful sweep entry matches");
    LengthDistribution d;
    for (const auto& [len, p] : pick->at("grouped").items()) d[std::stoll(len)] = p.get<double>();
    return d;
}

Json samples_to_json(const EmulatorRun& run, const ModelFile& source, const NoiseSpec& noise, std::uint64_t seed) {
    Json samples = Json::array();
    for (const auto& s : run.samples.samples) {
        samples.push_back({{"logical_config", std::vector<int>(s.logical.begin(), s.logical.end())},
                           {"coefficients", decode(source.model, s.logical)},
                           {"energy", s.energy},
                           {"chain_break_fraction", s.chain_break_fraction}});
    }
    return {{"encoding", encoding_to_json(source.model.layout().encoding)},
            {"basis", matrix_to_json(source.basis)},
            {"reads", run.samples.reads()},
            {"sigma_J", noise.sigma_J},
            {"sigma_h", noise.sigma_h},
            {"seed", seed},
            {"chain_strength", run.embedding.chain_strength},
            {"rescale", run.physical.rescale},
            {"grid", run.grid},
            {"physical_qubits", run.physical.size()},
            {"samples", samples}};
}

SampleSet samples_from_json(const Json& j) {
    SampleSet set;
    for (const auto& s : j.at("samples")) {
        Sample smp;
        for (int v : s.at("logical_config").get<std::vector<int>>()) smp.logical.push_back(static_cast<std::int8_t>(v));
        smp.energy = s.at("energy").get<double>();
        smp.chain_break_fraction = s.at("chain_break_fraction").get<double>();
        set.samples.push_back(std::move(smp));
    }
    return set;
}

std::string gap_profile_csv(const GapProfile& p) {
    std::ostringstream os;
    os << std::setprecision(15) << "s,E0,E1,gap\n";
    for (std::size_t i = 0; i < p.s_grid.size(); ++i)
        os << p.s_grid[i] << ',' << p.e0[i] << ',' << p.e1[i] << ',' << p.gaps[i] << '\n';
    return os.str();
}

}  // namespace isvp
