#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qaa/evolution.hpp"
#include "qaa/instance.hpp"

namespace qaa {

struct MiningConfig {
    int n = 12;
    int m = 36; // clause density 3n, preserving the 60/20 ratio at desk scale
    double t_ref = 100.0;
    double hardness_cutoff = 1e-4; // retain P(T_ref) strictly below this
    double mf_threshold = 0.5;     // mean-field excess at or below this discards
    int mf_steps = 20000;
    std::uint64_t master_seed = 1;
    std::optional<std::uint64_t> target_count; // stop once this many hard instances found
    std::uint64_t max_instances = 1000;        // generation cap
    IntegratorConfig integrator;
};

/// One ledger line. A field is present exactly when its stage ran: the
/// mean-field excess only for unique-optimum instances, P(T_ref) only for
/// instances that also failed the filter (were not discarded as easy).
struct MiningRecord {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    bool unique = false;
    std::uint64_t multiplicity = 0;
    std::optional<double> mf_excess;
    std::optional<bool> mf_easy;
    std::optional<double> p_tref;
    std::optional<bool> hard;
};

struct MiningOutcome {
    std::vector<Instance> hard_instances; // certified, in index order
    std::vector<MiningRecord> ledger;
    std::uint64_t generated = 0;
    std::uint64_t non_unique = 0;
    std::uint64_t filtered_easy = 0;
    std::uint64_t simulated = 0;
    std::uint64_t hard_count = 0;
};

struct MiningSinks {
    std::filesystem::path ledger_path;  // empty: keep the ledger in memory only
    std::filesystem::path instance_dir; // empty: do not export hard instances
    bool resume = false;                // continue from an existing ledger prefix
    std::function<void(const MiningRecord&)> on_record; // progress hook
};

/// generate -> certify uniqueness -> mean-field filter -> full evolution at
/// T_ref -> retain P < cutoff. Instance k is generated from the child seed
/// derive_stream_seed(master_seed, k); the run is a pure function of the
/// config, so reruns (and resumed runs) yield byte-identical ledgers.
MiningOutcome mine(const MiningConfig& config, const MiningSinks& sinks = {});

/// P(T_ref) of every fully simulated instance, in ledger order.
std::vector<double> success_histogram(const std::vector<MiningRecord>& ledger);

// Ledger text format (see docs/FORMATS.md). The header encodes the config;
// resuming validates it byte-for-byte.
std::string ledger_header(const MiningConfig& config);
std::string ledger_row(const MiningRecord& record);
MiningRecord ledger_row_parse(const std::string& line);

} // namespace qaa
