#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isvp/encoding.hpp"
#include "isvp/errors.hpp"

namespace isvp {

/// Undirected hardware graph. Chimera graphs carry their grid size `m`;
/// other graphs (complete graphs for tests) have m = 0.
struct HardwareGraph {
    int m = 0;
    std::size_t n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, sorted
    std::vector<std::vector<int>> adjacency;

    bool has_edge(int u, int v) const;
    std::size_t degree(int v) const { return adjacency.at(static_cast<std::size_t>(v)).size(); }
};

using ChimeraGraph = HardwareGraph;

/// Vertex id of qubit k (0..3) on `side` (0 vertical, 1 horizontal) of cell (row, col).
int chimera_vertex(int m, int row, int col, int side, int k);

/// m x m grid of K_{4,4} cells. Side-0 qubits couple to the same qubit of
/// the cell below, side-1 qubits to the same qubit of the cell to the right.
ChimeraGraph build_chimera(int m);

HardwareGraph complete_graph(std::size_t n);

struct ChimeraEmbedding {
    std::vector<std::vector<int>> chains;  // logical qubit -> hardware vertices
    double chain_strength = 1.0;

    /// Sorted union of all chains; position in this list is the physical index.
    std::vector<int> physical_qubits() const;
    std::size_t physical_count() const;
};

/// Smallest Chimera grid hosting the triangular clique embedding of K_n.
int minimal_clique_grid(std::size_t n_logical);

/// Triangular clique embedding. Logical qubit 4g + k owns qubit k of the
/// vertical side in column g for rows g..M-1 and of the horizontal side in
/// row g for columns 0..g, with M = minimal_clique_grid(n). Chains have
/// length M + 1. Throws SizingError when graph.m < M.
ChimeraEmbedding embed_clique(std::size_t n_logical, const ChimeraGraph& graph, double chain_strength);

/// One chain per vertex; for graphs that already contain every coupling.
ChimeraEmbedding identity_embedding(std::size_t n_logical, double chain_strength);

struct EmbeddingCheck {
    bool valid = true;
    std::string reason;
    explicit operator bool() const { return valid; }
};

/// Disjoint, connected, non-empty chains inside the graph, with a physical
/// edge between the chains of every listed logical coupling.
EmbeddingCheck validate_embedding(const ChimeraEmbedding& emb, const HardwareGraph& graph,
                                  std::span<const std::pair<int, int>> couplings);
EmbeddingCheck validate_embedding(const ChimeraEmbedding& emb, const HardwareGraph& graph, const IsingModel& model);

struct NoiseSpec {
    double sigma_J = 0.0;
    double sigma_h = 0.0;
    std::uint64_t seed = 0;
};

struct HardwareRange {
    double max_J = 1.0;
    double max_h = 2.0;
};

/// Ising model on physical qubits, energy = sum h_i s_i + sum J_ij s_i s_j.
struct PhysicalModel {
    std::vector<int> vertices;  // physical index -> hardware vertex
    std::vector<double> h;
    std::vector<std::tuple<int, int, double>> couplings;  // physical indices, i < j
    /// Divisor applied to every coefficient to fit the hardware range.
    double rescale = 1.0;

    std::size_t size() const { return h.size(); }
    double energy(std::span<const std::int8_t> spins) const;
};

/// 1.5 * max logical |J|.
double max_coupling_chain_strength(const IsingModel& model);

/// max_u (|h_u| + sum_v |J_uv|). Cutting a chain costs at least twice its
/// strength while flipping any part of it gains at most twice this load, so
/// at or above it every physical ground state has intact chains.
double chain_load_strength(const IsingModel& model);

/// chain_load_strength.
double default_chain_strength(const IsingModel& model);

/// Distribute the logical model over the embedding, add chain couplings,
/// rescale into `range`, then perturb every nonzero coefficient.
PhysicalModel lower_to_physical(const IsingModel& model, const ChimeraEmbedding& emb, const HardwareGraph& graph,
                                const NoiseSpec& noise, const HardwareRange& range = {});

struct AnnealParams {
    std::size_t sweeps = 1000;
    /// Inverse temperatures of the geometric schedule; non-positive values
    /// are derived from the model (hot: ln 2 over the largest flip cost,
    /// cold: ln 100 over the smallest).
    double beta_start = 0.0;
    double beta_end = 0.0;
};

std::pair<double, double> auto_beta_range(const PhysicalModel& model);

/// Single-spin-flip Metropolis annealing; read r uses its own stream derived
/// from (seed, r), so output depends only on the arguments.
std::vector<SpinConfig> sample(const PhysicalModel& model, std::size_t reads, const AnnealParams& params,
                               std::uint64_t seed);

struct Sample {
    SpinConfig logical;
    double energy = 0.0;  // noiseless logical energy
    double chain_break_fraction = 0.0;
};

struct SampleSet {
    std::vector<Sample> samples;
    std::size_t reads() const { return samples.size(); }
};

/// Logical spin of one chain: sign of the member sum, ties by a coin drawn
/// from (seed, read, chain).
std::int8_t majority_spin(std::span<const std::int8_t> members, std::uint64_t seed, std::size_t read,
                          std::size_t chain);

SampleSet decode_majority(std::span<const SpinConfig> raw, const ChimeraEmbedding& emb, const IsingModel& model,
                          std::uint64_t seed);

struct EmulatorRun {
    ChimeraEmbedding embedding;
    PhysicalModel physical;
    SampleSet samples;
    int grid = 0;
};

/// Embed into the smallest fitting Chimera grid, then anneal and decode.
/// chain_strength <= 0 selects default_chain_strength.
EmulatorRun emulate(const IsingModel& model, std::size_t reads, const NoiseSpec& noise, double chain_strength,
                    const AnnealParams& params, std::uint64_t seed);

}  // namespace isvp
