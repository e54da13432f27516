#include "isvp/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace isvp {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

void finalize(HardwareGraph& g) {
    for (auto& [u, v] : g.edges)
        if (u > v) std::swap(u, v);
    std::sort(g.edges.begin(), g.edges.end());
    g.adjacency.assign(g.n_vertices, {});
    for (const auto& [u, v] : g.edges) {
        g.adjacency[static_cast<std::size_t>(u)].push_back(v);
        g.adjacency[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
}

std::vector<int> index_map(const std::vector<int>& vertices, std::size_t n_vertices) {
    std::vector<int> idx(n_vertices, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) idx[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
    return idx;
}

std::vector<std::pair<int, int>> logical_couplings(const IsingModel& model) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [ij, v] : model.couplings())
        if (v != 0) out.push_back(ij);
    return out;
}

}  // namespace

bool HardwareGraph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_vertices) return false;
    const auto& a = adjacency[static_cast<std::size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
}

int chimera_vertex(int m, int row, int col, int side, int k) { return 8 * (row * m + col) + 4 * side + k; }

ChimeraGraph build_chimera(int m) {
    if (m < 1) throw std::invalid_argument("Chimera grid size must be at least 1");
    HardwareGraph g;
    g.m = m;
    g.n_vertices = static_cast<std::size_t>(8 * m * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    g.edges.emplace_back(chimera_vertex(m, r, c, 0, a), chimera_vertex(m, r, c, 1, b));
            for (int k = 0; k < 4; ++k) {
                if (r + 1 < m) g.edges.emplace_back(chimera_vertex(m, r, c, 0, k), chimera_vertex(m, r + 1, c, 0, k));
                if (c + 1 < m) g.edges.emplace_back(chimera_vertex(m, r, c, 1, k), chimera_vertex(m, r, c + 1, 1, k));
            }
        }
    finalize(g);
    return g;
}

HardwareGraph complete_graph(std::size_t n) {
    HardwareGraph g;
    g.n_vertices = n;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) g.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    finalize(g);
    return g;
}

std::vector<int> ChimeraEmbedding::physical_qubits() const {
    std::vector<int> q;
    for (const auto& c : chains) q.insert(q.end(), c.begin(), c.end());
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    return q;
}

std::size_t ChimeraEmbedding::physical_count() const { return physical_qubits().size(); }

int minimal_clique_grid(std::size_t n_logical) {
    return std::max(1, static_cast<int>((n_logical + 3) / 4));
}

ChimeraEmbedding embed_clique(std::size_t n_logical, const ChimeraGraph& graph, double chain_strength) {
    if (n_logical == 0) throw std::invalid_argument("nothing to embed");
    if (!(chain_strength > 0)) throw std::invalid_argument("chain strength must be positive");
    const int big_m = minimal_clique_grid(n_logical);
    if (graph.m < big_m)
        throw SizingError("K_" + std::to_string(n_logical) + " needs a Chimera grid of at least " +
                              std::to_string(big_m) + "x" + std::to_string(big_m),
                          big_m);
    ChimeraEmbedding emb;
    emb.chain_strength = chain_strength;
    for (std::size_t u = 0; u < n_logical; ++u) {
        const int g = static_cast<int>(u / 4);
        const int k = static_cast<int>(u % 4);
        std::vector<int> chain;
        for (int r = g; r < big_m; ++r) chain.push_back(chimera_vertex(graph.m, r, g, 0, k));
        for (int c = 0; c <= g; ++c) chain.push_back(chimera_vertex(graph.m, g, c, 1, k));
        emb.chains.push_back(std::move(chain));
    }
    return emb;
}

ChimeraEmbedding identity_embedding(std::size_t n_logical, double chain_strength) {
    ChimeraEmbedding emb;
    emb.chain_strength = chain_strength;
    for (std::size_t u = 0; u < n_logical; ++u) emb.chains.push_back({static_cast<int>(u)});
    return emb;
}

EmbeddingCheck validate_embedding(const ChimeraEmbedding& emb, const HardwareGraph& graph,
                                  std::span<const std::pair<int, int>> couplings) {
    auto fail = [](std::string why) { return EmbeddingCheck{false, std::move(why)}; };
    if (!(emb.chain_strength > 0)) return fail("chain strength must be positive");
    std::vector<int> owner(graph.n_vertices, -1);
    for (std::size_t u = 0; u < emb.chains.size(); ++u) {
        const auto& chain = emb.chains[u];
        if (chain.empty()) return fail("chain " + std::to_string(u) + " is empty");
        for (int v : chain) {
            if (v < 0 || static_cast<std::size_t>(v) >= graph.n_vertices)
                return fail("chain " + std::to_string(u) + " uses vertex " + std::to_string(v) + " outside the graph");
            if (owner[static_cast<std::size_t>(v)] != -1)
                return fail("vertex " + std::to_string(v) + " shared by chains " +
                            std::to_string(owner[static_cast<std::size_t>(v)]) + " and " + std::to_string(u));
            owner[static_cast<std::size_t>(v)] = static_cast<int>(u);
        }
        // Connectivity by flood fill restricted to the chain.
        std::vector<int> stack{chain.front()};
        std::vector<char> seen(graph.n_vertices, 0);
        seen[static_cast<std::size_t>(chain.front())] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : graph.adjacency[static_cast<std::size_t>(x)])
                if (!seen[static_cast<std::size_t>(y)] && owner[static_cast<std::size_t>(y)] == static_cast<int>(u)) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    ++reached;
                    stack.push_back(y);
                }
        }
        if (reached != chain.size()) return fail("chain " + std::to_string(u) + " is not connected");
    }
    for (const auto& [a, b] : couplings) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(std::max(a, b)) >= emb.chains.size())
            return fail("coupling refers to an unembedded logical qubit");
        bool joined = false;
        for (int x : emb.chains[static_cast<std::size_t>(a)]) {
            for (int y : graph.adjacency[static_cast<std::size_t>(x)])
                if (owner[static_cast<std::size_t>(y)] == b) {
                    joined = true;
                    break;
                }
            if (joined) break;
        }
        if (!joined)
            return fail("no physical edge between chains " + std::to_string(a) + " and " + std::to_string(b));
    }
    return {};
}

EmbeddingCheck validate_embedding(const ChimeraEmbedding& emb, const HardwareGraph& graph, const IsingModel& model) {
    if (emb.chains.size() != model.n_qubits()) return {false, "embedding does not cover every logical qubit"};
    const auto c = logical_couplings(model);
    return validate_embedding(emb, graph, c);
}

double PhysicalModel::energy(std::span<const std::int8_t> spins) const {
    if (spins.size() != h.size()) throw std::invalid_argument("configuration length does not match physical model");
    double e = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
    for (const auto& [i, j, v] : couplings) e += v * spins[static_cast<std::size_t>(i)] * spins[static_cast<std::size_t>(j)];
    return e;
}

double max_coupling_chain_strength(const IsingModel& model) {
    double m = 0.0;
    for (const auto& [ij, v] : model.couplings()) m = std::max(m, std::abs(v.get_d()));
    return m > 0 ? 1.5 * m : 1.0;
}

double chain_load_strength(const IsingModel& model) {
    std::vector<double> load(model.n_qubits(), 0.0);
    for (std::size_t u = 0; u < model.n_qubits(); ++u) load[u] = std::abs(model.h()[u].get_d());
    for (const auto& [ij, v] : model.couplings()) {
        load[static_cast<std::size_t>(ij.first)] += std::abs(v.get_d());
        load[static_cast<std::size_t>(ij.second)] += std::abs(v.get_d());
    }
    const double m = load.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
    return m > 0 ? m : 1.0;
}

double default_chain_strength(const IsingModel& model) { return chain_load_strength(model); }

PhysicalModel lower_to_physical(const IsingModel& model, const ChimeraEmbedding& emb, const HardwareGraph& graph,
                                const NoiseSpec& noise, const HardwareRange& range) {
    if (noise.sigma_J < 0 || noise.sigma_h < 0) throw std::invalid_argument("noise deviations must be non-negative");
    if (!(range.max_J > 0 && range.max_h > 0)) throw std::invalid_argument("hardware range must be positive");
    if (emb.chains.size() != model.n_qubits())
        throw std::invalid_argument("embedding covers " + std::to_string(emb.chains.size()) +
                                    " logical qubits, model has " + std::to_string(model.n_qubits()));
    PhysicalModel pm;
    pm.vertices = emb.physical_qubits();
    const auto idx = index_map(pm.vertices, graph.n_vertices);
    pm.h.assign(pm.vertices.size(), 0.0);
    std::map<std::pair<int, int>, double> j;
    auto add = [&](int x, int y, double v) {
        int a = idx[static_cast<std::size_t>(x)], b = idx[static_cast<std::size_t>(y)];
        if (a > b) std::swap(a, b);
        j[{a, b}] += v;
    };

    for (std::size_t u = 0; u < emb.chains.size(); ++u) {
        const auto& chain = emb.chains[u];
        const double share = model.h()[u].get_d() / static_cast<double>(chain.size());
        for (int v : chain) pm.h[static_cast<std::size_t>(idx[static_cast<std::size_t>(v)])] += share;
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (graph.has_edge(chain[a], chain[b])) add(chain[a], chain[b], -emb.chain_strength);
    }
    for (const auto& [uv, value] : model.couplings()) {
        if (value == 0) continue;
        std::vector<std::pair<int, int>> links;
        for (int x : emb.chains[static_cast<std::size_t>(uv.first)])
            for (int y : emb.chains[static_cast<std::size_t>(uv.second)])
                if (graph.has_edge(x, y)) links.emplace_back(x, y);
        if (links.empty())
            throw std::invalid_argument("no physical edge joins the chains of logical qubits " +
                                        std::to_string(uv.first) + " and " + std::to_string(uv.second));
        const double share = value.get_d() / static_cast<double>(links.size());
        for (const auto& [x, y] : links) add(x, y, share);
    }

    double max_j = 0.0, max_h = 0.0;
    for (const auto& [ab, v] : j) max_j = std::max(max_j, std::abs(v));
    for (double v : pm.h) max_h = std::max(max_h, std::abs(v));
    pm.rescale = std::max(max_j / range.max_J, max_h / range.max_h);
    if (!(pm.rescale > 0)) pm.rescale = 1.0;

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss;
    for (auto& v : pm.h) {
        if (v == 0.0) continue;
        v /= pm.rescale;
        if (noise.sigma_h > 0) v += noise.sigma_h * gauss(rng);
    }
    for (const auto& [ab, v0] : j) {
        if (v0 == 0.0) continue;
        double v = v0 / pm.rescale;
        if (noise.sigma_J > 0) v += noise.sigma_J * gauss(rng);
        pm.couplings.emplace_back(ab.first, ab.second, v);
    }
    return pm;
}

std::pair<double, double> auto_beta_range(const PhysicalModel& model) {
    std::vector<double> field(model.size(), 0.0);
    double smallest = 0.0;
    auto note = [&](double v) {
        const double a = std::abs(v);
        if (a > 0 && (smallest == 0.0 || a < smallest)) smallest = a;
    };
    for (std::size_t i = 0; i < model.size(); ++i) {
        field[i] += std::abs(model.h[i]);
        note(model.h[i]);
    }
    for (const auto& [i, j, v] : model.couplings) {
        field[static_cast<std::size_t>(i)] += std::abs(v);
        field[static_cast<std::size_t>(j)] += std::abs(v);
        note(v);
    }
    const double largest = field.empty() ? 0.0 : *std::max_element(field.begin(), field.end());
    if (largest == 0.0) return {0.1, 1.0};
    return {std::log(2.0) / (2.0 * largest), std::log(100.0) / (2.0 * smallest)};
}

std::vector<SpinConfig> sample(const PhysicalModel& model, std::size_t reads, const AnnealParams& params,
                               std::uint64_t seed) {
    if (reads == 0) throw std::invalid_argument("reads must be at least 1");
    const std::size_t n = model.size();
    auto [b0, b1] = auto_beta_range(model);
    if (params.beta_start > 0) b0 = params.beta_start;
    if (params.beta_end > 0) b1 = params.beta_end;
    const std::size_t sweeps = std::max<std::size_t>(params.sweeps, 1);
    std::vector<double> betas(sweeps);
    for (std::size_t t = 0; t < sweeps; ++t)
        betas[t] = sweeps == 1 ? b1 : b0 * std::pow(b1 / b0, static_cast<double>(t) / static_cast<double>(sweeps - 1));

    // Compressed neighbour lists.
    std::vector<std::size_t> start(n + 1, 0);
    for (const auto& [i, j, v] : model.couplings) {
        ++start[static_cast<std::size_t>(i) + 1];
        ++start[static_cast<std::size_t>(j) + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<int> nbr(start[n]);
    std::vector<double> weight(start[n]);
    {
        auto fill = start;
        for (const auto& [i, j, v] : model.couplings) {
            nbr[fill[static_cast<std::size_t>(i)]] = j;
            weight[fill[static_cast<std::size_t>(i)]++] = v;
            nbr[fill[static_cast<std::size_t>(j)]] = i;
            weight[fill[static_cast<std::size_t>(j)]++] = v;
        }
    }

    std::vector<SpinConfig> out(reads, SpinConfig(n));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < reads; ++r) {
        std::mt19937_64 rng(stream_seed(seed, r));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        SpinConfig& s = out[r];
        for (auto& x : s) x = (rng() & 1U) ? 1 : -1;
        for (double beta : betas) {
            for (std::size_t i = 0; i < n; ++i) {
                double f = model.h[i];
                for (std::size_t e = start[i]; e < start[i + 1]; ++e) f += weight[e] * s[static_cast<std::size_t>(nbr[e])];
                const double de = -2.0 * s[i] * f;
                if (de <= 0.0 || unit(rng) < std::exp(-beta * de)) s[i] = static_cast<std::int8_t>(-s[i]);
            }
        }
    }
    return out;
}

std::int8_t majority_spin(std::span<const std::int8_t> members, std::uint64_t seed, std::size_t read,
                          std::size_t chain) {
    int sum = 0;
    for (auto s : members) sum += s;
    if (sum > 0) return 1;
    if (sum < 0) return -1;
    return (stream_seed(seed, read, chain + 1) & 1U) ? 1 : -1;
}

SampleSet decode_majority(std::span<const SpinConfig> raw, const ChimeraEmbedding& emb, const IsingModel& model,
                          std::uint64_t seed) {
    if (emb.chains.size() != model.n_qubits()) throw std::invalid_argument("embedding does not match model");
    const auto vertices = emb.physical_qubits();
    const int top = vertices.empty() ? 0 : vertices.back() + 1;
    const auto idx = index_map(vertices, static_cast<std::size_t>(top));
    SampleSet set;
    set.samples.reserve(raw.size());
    std::vector<std::int8_t> members;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        if (raw[r].size() != vertices.size()) throw std::invalid_argument("raw sample length does not match embedding");
        Sample smp;
        smp.logical.resize(emb.chains.size());
        std::size_t broken = 0;
        for (std::size_t u = 0; u < emb.chains.size(); ++u) {
            members.clear();
            for (int v : emb.chains[u]) members.push_back(raw[r][static_cast<std::size_t>(idx[static_cast<std::size_t>(v)])]);
            if (std::any_of(members.begin(), members.end(), [&](auto x) { return x != members.front(); })) ++broken;
            smp.logical[u] = majority_spin(members, seed, r, u);
        }
        smp.chain_break_fraction = static_cast<double>(broken) / static_cast<double>(emb.chains.size());
        smp.energy = model.energy_value(smp.logical);
        set.samples.push_back(std::move(smp));
    }
    return set;
}

EmulatorRun emulate(const IsingModel& model, std::size_t reads, const NoiseSpec& noise, double chain_strength,
                    const AnnealParams& params, std::uint64_t seed) {
    EmulatorRun run;
    run.grid = minimal_clique_grid(model.n_qubits());
    const auto graph = build_chimera(run.grid);
    const double cs = chain_strength > 0 ? chain_strength : default_chain_strength(model);
    run.embedding = embed_clique(model.n_qubits(), graph, cs);
    if (const auto check = validate_embedding(run.embedding, graph, model); !check)
        throw std::logic_error("clique embedding failed validation: " + check.reason);
    run.physical = lower_to_physical(model, run.embedding, graph, noise);
    const auto raw = sample(run.physical, reads, params, stream_seed(seed, 1));
    run.samples = decode_majority(raw, run.embedding, model, stream_seed(seed, 2));
    return run;
}

}  // namespace isvp
