#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaa/evolution.hpp"
#include "qaa/instance.hpp"

namespace qaa {

struct SweepPoint {
    double t = 0.0;
    double p = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> grid; // every evaluated (T, P), refinement included, sorted by T
    double t_max = 0.0;
    double p_at_tmax = 0.0;
    double t_ref = 100.0;
    double p_at_tref = 0.0;
    double improvement_vs_ref = 0.0; // p_at_tmax / p_at_tref
};

/// Integer T from 1 to 40, the search interval used for T_max.
std::vector<double> default_sweep_grid();

/// Runs the evolution at every grid time, locates the argmax, optionally
/// refines it with 3 rounds of local bisection, and reports the improvement
/// over the reference time (evaluated separately if absent from the grid).
SweepResult sweep_total_time(const Instance& inst, const std::vector<double>& t_grid,
                             const IntegratorConfig& config = {}, bool refine = false,
                             double t_ref = 100.0);

struct ExcitedScanResult {
    std::vector<double> per_qubit; // success starting from excited_state(n, k)
    double average = 0.0;
    double maximum = 0.0;
};

/// Success probability at fixed T from each of the n first excited states
/// of H_B.
ExcitedScanResult excited_scan(const Instance& inst, double T,
                               const IntegratorConfig& config = {});

struct PathChangeTrial {
    std::uint64_t seed = 0; // child seed the extra Hamiltonian was drawn from
    double success = 0.0;
    std::optional<double> g_min;    // present when gaps were computed for this trial
    std::optional<double> s_at_min;
};

struct PathChangeCampaign {
    std::string instance_label;
    ExtraCategory category = ExtraCategory::Stoquastic;
    std::uint64_t master_seed = 0;
    double total_time = 100.0;
    std::vector<PathChangeTrial> trials;
    double chi = 1.0;               // geometric mean of failure probabilities
    double effective_success = 0.0; // 1 - chi
    std::size_t best_trial = 0;     // argmax success (lowest index on ties)
    std::optional<std::size_t> random_trial; // seeded pick used for gap data
};

/// Geometric mean of the failure probabilities 1 - P_i. Any trial with
/// success 1 yields chi = 0 exactly (no epsilon flooring).
double chi_statistic(const std::vector<double>& successes);

/// Aborted campaign carrying the trials finished so far.
class CampaignError : public std::runtime_error {
public:
    CampaignError(const std::string& what, PathChangeCampaign partial)
        : std::runtime_error(what), partial(std::move(partial)) {}
    PathChangeCampaign partial;
};

/// Runs `trials` independent path-change trials (trial i draws its extra
/// Hamiltonian from the child seed derive_stream_seed(seed, i)) and computes
/// the chi statistic. With want_gaps, g_min is computed for the most
/// successful trial and for one seeded-random trial.
PathChangeCampaign path_change_campaign(const Instance& inst, ExtraCategory category,
                                        int trials, double T, std::uint64_t seed,
                                        const IntegratorConfig& config = {},
                                        bool want_gaps = false, int gap_grid = 201,
                                        int gap_refine = 40,
                                        const std::string& instance_label = "");

enum class TrialSelector { Best, Random };

struct GapSuccessRow {
    std::string instance_label;
    ExtraCategory category = ExtraCategory::Stoquastic;
    TrialSelector selector = TrialSelector::Best;
    double success = 0.0;
    double g_min = 0.0;
};

/// Scatter data comparing success probability with the minimum gap: one row
/// per campaign for the selected trial. Throws std::invalid_argument when
/// the selected trial carries no gap data.
std::vector<GapSuccessRow> gap_success_table(const std::vector<PathChangeCampaign>& campaigns,
                                             TrialSelector selector);

} // namespace qaa
