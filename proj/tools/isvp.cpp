#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isvp/dynamics.hpp"
#include "isvp/emulator.hpp"
#include "isvp/experiments.hpp"
#include "isvp/io.hpp"
#include "isvp/spectrum.hpp"

namespace fs = std::filesystem;
using namespace isvp;

namespace {

std::string format_matrix(const BigMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += "[";
        for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? " " : "") + m(i, j).get_str();
        out += "]\n";
    }
    return out;
}

std::string format_vector(const CoefficientVector& x) {
    std::string out = "(";
    for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + std::to_string(x[i]);
    return out + ")";
}

// Either "2^a..2^b" or a comma-separated list.
std::vector<double> parse_sweep_lengths(const std::string& spec) {
    static const std::regex range(R"(\s*2\^(-?\d+)\s*\.\.\s*2\^(-?\d+)\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, range)) {
        const int lo = std::stoi(m[1]), hi = std::stoi(m[2]);
        if (lo > hi) throw CLI::ValidationError("--T", "empty exponent range");
        return powers_of_two(lo, hi);
    }
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double t = std::stod(item, &used);
        if (used != item.size() || !(t > 0)) throw CLI::ValidationError("--T", "bad sweep length '" + item + "'");
        out.push_back(t);
    }
    if (out.empty()) throw CLI::ValidationError("--T", "no sweep lengths given");
    return out;
}

std::pair<int, int> parse_range(const std::string& spec) {
    const auto colon = spec.find(':', spec.front() == '-' ? 1 : 0);
    if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected lo:hi");
    return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
}

Basis instance_basis(const fs::path& path) { return Basis(instance_from_json(read_json(path)).bad); }

int cmd_gen(std::size_t dim, std::uint64_t seed, const fs::path& out) {
    write_json(out, instance_to_json(generate_instance(dim, seed)));
    return 0;
}

int cmd_hnf(const fs::path& in) {
    const Basis b = instance_basis(in);
    const HnfBasis h = hnf(b);
    std::cout << format_matrix(h.rows) << "covolume " << h.covolume().get_str() << "\noptimal "
              << (is_optimal_hnf(h) ? "yes" : "no") << "\n";
    return 0;
}

int cmd_bound(std::size_t dim, const std::string& det, const std::string& family) {
    const mpz_class d(det);
    const auto fam = parse_family(family);
    const auto budget = qubit_budget(dim, d, fam);
    const auto box = theorem_box(dim, d);
    std::cout << "minkowski " << minkowski_bound(dim, d.get_d()) << "\n";
    std::cout << "box";
    for (const auto& [lo, hi] : box.bounds()) std::cout << " [" << lo << "," << hi << "]";
    std::cout << "\nqubits_per_qudit " << budget.per_qudit << "\nqubits_total " << budget.total << "\n";
    return 0;
}

int cmd_oracle(const fs::path& in, const std::string& box_spec) {
    const Basis b = instance_basis(in);
    OracleResult r;
    if (box_spec == "auto") {
        const HnfBasis h = hnf(b);
        if (is_optimal_hnf(h)) {
            r = brute_force_svp(h.to_basis(), theorem_box(b.dim(), b.covolume()));
            std::cout << "coordinates hnf\n";
        } else {
            r = lattice_svp(b);
            std::cout << "coordinates input (HNF not optimal; inverse-basis box)\n";
        }
    } else {
        r = brute_force_svp(b, CoefficientBox::symmetric(b.dim(), std::stoll(box_spec)));
        std::cout << "coordinates input\n";
    }
    std::cout << "lambda1_sq " << r.lambda1_sq << "\nwitnesses " << r.witnesses.size() << "\n";
    for (const auto& w : r.witnesses) std::cout << format_vector(w) << "\n";
    return 0;
}

int cmd_encode(const fs::path& in, const std::string& family, const std::string& range, const fs::path& out) {
    const Instance inst = instance_from_json(read_json(in));
    const auto [lo, hi] = parse_range(range);
    const auto enc = QuditEncoding::from_range(parse_family(family), lo, hi);
    const IsingModel model = compile(gram(inst.bad_basis()), enc);
    write_json(out, model_to_json(model, inst.bad));
    std::cout << "qubits " << model.n_qubits() << " couplings " << model.couplings().size() << "\n";
    return 0;
}

int cmd_gap_scan(const fs::path& model_path, std::size_t grid, double h0, const fs::path& out) {
    const ModelFile f = model_from_json(read_json(model_path));
    const auto h = SweepHamiltonian::for_model(f.model, DriverSpec{h0});
    const GapProfile p = gap_scan(h, grid);
    write_text(out, gap_profile_csv(p));
    std::cout << "min_gap " << p.min_gap << " at s " << p.min_s << "\n";
    return 0;
}

int cmd_simulate(const fs::path& model_path, const std::string& T_spec, double h0, const fs::path& out) {
    const ModelFile f = model_from_json(read_json(model_path));
    const auto T_list = parse_sweep_lengths(T_spec);
    const auto h = SweepHamiltonian::for_model(f.model, DriverSpec{h0});
    const auto entries = sweep_scan(h, T_list);
    write_json(out, sweep_results_to_json(entries, f, h0));
    int failures = 0;
    for (const auto& e : entries) {
        if (e.result)
            std::cout << "T " << e.T << " p_zero " << e.result->p_zero << " p_lambda1 " << e.result->p_lambda1
                      << " p_second " << e.result->p_second << "\n";
        else {
            std::cerr << "T " << e.T << " failed: " << e.error << "\n";
            ++failures;
        }
    }
    return failures ? 2 : 0;
}

int cmd_emulate(const fs::path& model_path, std::size_t reads, double sigma_j, double sigma_h,
                const std::string& chain, std::uint64_t seed, std::size_t sweeps, const fs::path& out) {
    const ModelFile f = model_from_json(read_json(model_path));
    double strength = 0.0;
    if (chain == "max-j")
        strength = max_coupling_chain_strength(f.model);
    else if (chain != "auto")
        strength = std::stod(chain);
    const NoiseSpec noise{sigma_j, sigma_h, seed};
    AnnealParams params;
    params.sweeps = sweeps;
    const EmulatorRun run = emulate(f.model, reads, noise, strength, params, seed);
    write_json(out, samples_to_json(run, f, noise, seed));
    double breaks = 0.0;
    for (const auto& s : run.samples.samples) breaks += s.chain_break_fraction;
    std::cout << "physical_qubits " << run.physical.size() << " rescale " << run.physical.rescale
              << " mean_chain_break " << breaks / static_cast<double>(reads) << "\n";
    return 0;
}

int cmd_analyze(const fs::path& dir, const fs::path& out, std::optional<double> T, bool coefficient_baseline) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    const auto weighting =
        coefficient_baseline ? BaselineWeighting::Coefficients : BaselineWeighting::Configurations;
    std::vector<InstanceReport> reports;
    for (const auto& path : files) {
        const Json j = read_json(path);
        if (!j.contains("basis") || !j.contains("encoding") || !(j.contains("samples") || j.contains("results")))
            continue;
        const Basis basis(matrix_from_json(j.at("basis")));
        const auto enc = encoding_from_json(j.at("encoding"));
        const auto dist = j.contains("samples") ? length_distribution(samples_from_json(j))
                                                : sweep_distribution_from_json(j, T);
        const auto oracle = lattice_oracle(basis);
        reports.push_back({basis.dim(), enc.family(), figures_of_merit(dist, basis, oracle),
                           baseline(basis, enc, oracle, weighting), path.filename().string()});
    }
    if (reports.empty()) throw std::runtime_error("no result or sample files in " + dir.string());
    write_text(out, aggregate(reports).to_csv());
    std::cout << "instances " << reports.size() << "\n";
    return 0;
}

int cmd_histogram(const fs::path& samples_path, const fs::path& instance_path, const fs::path& out) {
    const Json j = read_json(samples_path);
    const Basis basis = instance_basis(instance_path);
    if (j.contains("basis") && !(matrix_from_json(j.at("basis")) == basis.rows()))
        throw std::runtime_error("samples were drawn for a different basis than the instance's");
    const auto hist = histogram(samples_from_json(j), basis, lattice_oracle(basis));
    write_text(out, hist.to_csv());
    std::cout << "reads " << hist.total << " distinct_lengths " << hist.bins.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shortest-vector search on simulated and emulated quantum annealers"};
    app.require_subcommand(1);
    int rc = 0;

    std::size_t dim = 3;
    std::uint64_t seed = 0;
    std::string in, out, family, range, det, box = "auto", T_spec = "2^0..2^10", chain = "auto";
    std::string model_path, instance_path;
    std::size_t grid = 101, reads = 900, sweeps = 1000;
    double h0 = 1.0, sigma_j = 0.02, sigma_h = 0.02;
    std::optional<double> T_pick;
    bool coefficient_baseline = false;

    auto* gen = app.add_subcommand("gen", "Generate a seeded good/bad basis pair");
    gen->add_option("--dim", dim)->required()->check(CLI::Range(2, 64));
    gen->add_option("--seed", seed)->required();
    gen->add_option("--out", out)->required();
    gen->callback([&] { rc = cmd_gen(dim, seed, out); });

    auto* hnf_cmd = app.add_subcommand("hnf", "Print the Hermite normal form of an instance's bad basis");
    hnf_cmd->add_option("--in", in)->required()->check(CLI::ExistingFile);
    hnf_cmd->callback([&] { rc = cmd_hnf(in); });

    auto* bound = app.add_subcommand("bound", "Coefficient bounds and qubit budget for dimension and covolume");
    bound->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
    bound->add_option("--det", det)->required();
    bound->add_option("--encoding", family)->required()->check(CLI::IsMember({"ham", "bin", "hamming", "binary"}));
    bound->callback([&] { rc = cmd_bound(dim, det, family); });

    auto* oracle = app.add_subcommand("oracle", "Exhaustive shortest-vector search");
    oracle->add_option("--in", in)->required()->check(CLI::ExistingFile);
    oracle->add_option("--box", box, "auto or a cube radius R");
    oracle->callback([&] { rc = cmd_oracle(in, box); });

    auto* encode = app.add_subcommand("encode", "Compile an instance into an Ising model");
    encode->add_option("--in", in)->required()->check(CLI::ExistingFile);
    encode->add_option("--encoding", family)->required()->check(CLI::IsMember({"ham", "bin", "hamming", "binary"}));
    encode->add_option("--range", range, "lo:hi")->required();
    encode->add_option("--out", out)->required();
    encode->callback([&] { rc = cmd_encode(in, family, range, out); });

    auto* gap = app.add_subcommand("gap-scan", "Spectral gap along the sweep");
    gap->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    gap->add_option("--grid", grid)->check(CLI::Range(2, 100000));
    gap->add_option("--h0", h0)->check(CLI::PositiveNumber);
    gap->add_option("--out", out)->required();
    gap->callback([&] { rc = cmd_gap_scan(model_path, grid, h0, out); });

    auto* sim = app.add_subcommand("simulate", "Closed-system sweeps over a list of durations");
    sim->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    sim->add_option("--T", T_spec, "2^a..2^b or a comma list");
    sim->add_option("--h0", h0)->check(CLI::PositiveNumber);
    sim->add_option("--out", out)->required();
    sim->callback([&] { rc = cmd_simulate(model_path, T_spec, h0, out); });

    auto* emu = app.add_subcommand("emulate", "Chimera-embedded noisy annealer emulation");
    emu->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    emu->add_option("--reads", reads)->check(CLI::PositiveNumber);
    emu->add_option("--sigma-j", sigma_j)->check(CLI::NonNegativeNumber);
    emu->add_option("--sigma-h", sigma_h)->check(CLI::NonNegativeNumber);
    emu->add_option("--chain-strength", chain, "auto, max-j or a value");
    emu->add_option("--seed", seed);
    emu->add_option("--sweeps", sweeps)->check(CLI::PositiveNumber);
    emu->add_option("--out", out)->required();
    emu->callback([&] { rc = cmd_emulate(model_path, reads, sigma_j, sigma_h, chain, seed, sweeps, out); });

    auto* analyze = app.add_subcommand("analyze", "Figures of merit over a directory of runs");
    analyze->add_option("--in", in)->required()->check(CLI::ExistingDirectory);
    analyze->add_option("--out", out)->required();
    analyze->add_option("--T", T_pick, "sweep length to read from simulate output (default largest)");
    analyze->add_flag("--coefficient-baseline", coefficient_baseline,
                      "weight the uniform baseline by coefficient vector instead of configuration");
    analyze->callback([&] { rc = cmd_analyze(in, out, T_pick, coefficient_baseline); });

    auto* hist = app.add_subcommand("histogram", "Length histogram of emulator samples");
    hist->add_option("--in", in)->required()->check(CLI::ExistingFile);
    hist->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    hist->add_option("--out", out)->required();
    hist->callback([&] { rc = cmd_histogram(in, instance_path, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
