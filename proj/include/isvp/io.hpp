#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "isvp/dynamics.hpp"
#include "isvp/emulator.hpp"
#include "isvp/experiments.hpp"

namespace isvp {

using Json = nlohmann::json;

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

/// {dim, seed, good_basis, unimodular, bad_basis}
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Json encoding_to_json(const QuditEncoding& enc);
QuditEncoding encoding_from_json(const Json& j);

/// A compiled model plus the basis it was compiled from. Coefficients are
/// exact rationals written as strings ("3", "-1/2").
struct ModelFile {
    IsingModel model;
    IntMatrix basis;
};

/// {n_qubits, offset, h, J: [[i, j, value]], layout: {encoding, qudits}, basis}
Json model_to_json(const IsingModel& model, const IntMatrix& basis);
ModelFile model_from_json(const Json& j);

/// {encoding, basis, h0, results: [{T, p_zero, p_lambda1, p_second, level1,
/// level2, norm_drift, windows, grouped: {len_sq: prob}} | {T, error}]}
Json sweep_results_to_json(std::span<const ScanEntry> entries, const ModelFile& source, double h0);

/// Length distribution of a sweep entry; `T` picks the entry (largest T when absent).
LengthDistribution sweep_distribution_from_json(const Json& j, std::optional<double> T = std::nullopt);

/// {encoding, basis, reads, sigma_J, sigma_h, seed, chain_strength, rescale,
/// grid, physical_qubits, samples: [{logical_config, coefficients, energy,
/// chain_break_fraction}]}
Json samples_to_json(const EmulatorRun& run, const ModelFile& source, const NoiseSpec& noise, std::uint64_t seed);
SampleSet samples_from_json(const Json& j);

/// Columns s, E0, E1, gap.
std::string gap_profile_csv(const GapProfile& profile);

}  // namespace isvp
