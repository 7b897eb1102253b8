#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qaa/evolution.hpp"
#include "qaa/hamiltonian.hpp"
#include "qaa/instance.hpp"
#include "qaa/spectrum.hpp"

namespace qaa {

/// 12-significant-digit formatting used by every tabular output.
std::string format_g12(double value);

/// Comment header naming the manifest that produced a data file; written as
/// the first line of every CSV when a manifest reference is supplied.
std::string manifest_comment(const std::string& manifest_ref);

// Instance files (JSON; see docs/FORMATS.md). Write->read is the identity.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

// Extra-Hamiltonian files (JSON). Reloading reproduces the operator exactly.
std::string extra_to_json(const ExtraHamiltonian& extra);
ExtraHamiltonian extra_from_json(const std::string& text);
void save_extra(const ExtraHamiltonian& extra, const std::filesystem::path& path);
ExtraHamiltonian load_extra(const std::filesystem::path& path);

/// Header "t,s,energy_expectation,overlap_ground,overlap_first_excited,norm"
/// followed by one 12-significant-digit row per sample.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& rows,
                          const std::string& manifest_ref = "");

/// Header "s,lambda0,..." followed by one row per grid slice.
void write_spectrum_csv(std::ostream& out, const GapProfile& profile,
                        const std::string& manifest_ref = "");

/// {"g_min":..., "s_at_min":..., "grid_points":..., "refine_iters":...}
std::string gap_summary_json(const GapProfile& profile);

} // namespace qaa
