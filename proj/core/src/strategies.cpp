#include "qaa/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qaa/errors.hpp"
#include "qaa/rng.hpp"
#include "qaa/spectrum.hpp"

namespace qaa {

namespace {

std::uint64_t certified_w(const Instance& inst) {
    if (!inst.optimum)
        throw std::invalid_argument("instance optimum not certified; run certify first");
    return inst.optimum->w;
}

double run_success(const Instance& inst, const CostVector& cost, double T,
                   const IntegratorConfig& config,
                   const std::optional<ExtraHamiltonian>& extra = {},
                   const StateVector* start = nullptr) {
    ScheduleSpec schedule;
    schedule.total_time = T;
    schedule.extra = extra;
    const StateVector init = start != nullptr ? *start : initial_state(inst.n);
    const EvolutionResult res =
        evolve(schedule, cost, init, config, ObservationPlan{}, certified_w(inst));
    return *res.success_probability;
}

} // namespace

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    for (int t = 1; t <= 40; ++t) grid.push_back(static_cast<double>(t));
    return grid;
}

SweepResult sweep_total_time(const Instance& inst, const std::vector<double>& t_grid,
                             const IntegratorConfig& config, bool refine, double t_ref) {
    certified_w(inst);
    if (t_grid.empty()) throw std::invalid_argument("sweep_total_time: empty grid");
    for (double t : t_grid)
        if (t < 0.0) throw std::invalid_argument("sweep_total_time: negative T");

    const CostVector cost = build_cost_vector(inst);
    SweepResult result;
    result.t_ref = t_ref;

    std::vector<double> sorted = t_grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    auto eval = [&](double t) {
        const double p = run_success(inst, cost, t, config);
        result.grid.push_back({t, p});
        return p;
    };

    std::size_t arg = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = eval(sorted[i]);
        if (p > result.grid[arg].p) arg = i;
    }
    double best_t = result.grid[arg].t;
    double best_p = result.grid[arg].p;

    if (refine && sorted.size() > 1) {
        double lo = arg > 0 ? sorted[arg - 1] : sorted[arg];
        double hi = arg + 1 < sorted.size() ? sorted[arg + 1] : sorted[arg];
        double center = best_t;
        double center_p = best_p;
        for (int round = 0; round < 3; ++round) {
            const double ml = 0.5 * (lo + center);
            const double mr = 0.5 * (center + hi);
            const double pl = ml < center ? eval(ml) : center_p;
            const double pr = mr > center ? eval(mr) : center_p;
            if (pl > center_p && pl >= pr) {
                hi = center;
                center = ml;
                center_p = pl;
            } else if (pr > center_p) {
                lo = center;
                center = mr;
                center_p = pr;
            } else {
                lo = ml;
                hi = mr;
            }
        }
        if (center_p > best_p) {
            best_p = center_p;
            best_t = center;
        }
    }

    result.t_max = best_t;
    result.p_at_tmax = best_p;

    const auto ref_it = std::find_if(result.grid.begin(), result.grid.end(),
                                     [&](const SweepPoint& p) { return p.t == t_ref; });
    result.p_at_tref = ref_it != result.grid.end() ? ref_it->p
                                                   : run_success(inst, cost, t_ref, config);
    result.improvement_vs_ref = result.p_at_tmax / result.p_at_tref;

    std::sort(result.grid.begin(), result.grid.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.t < b.t; });
    return result;
}

ExcitedScanResult excited_scan(const Instance& inst, double T,
                               const IntegratorConfig& config) {
    certified_w(inst);
    const CostVector cost = build_cost_vector(inst);
    ExcitedScanResult result;
    result.per_qubit.reserve(static_cast<std::size_t>(inst.n));
    for (int k = 0; k < inst.n; ++k) {
        const StateVector start = excited_state(inst.n, k);
        result.per_qubit.push_back(run_success(inst, cost, T, config, {}, &start));
    }
    double sum = 0.0;
    result.maximum = 0.0;
    for (double p : result.per_qubit) {
        sum += p;
        result.maximum = std::max(result.maximum, p);
    }
    result.average = sum / static_cast<double>(inst.n);
    return result;
}

double chi_statistic(const std::vector<double>& successes) {
    if (successes.empty()) throw std::invalid_argument("chi_statistic: no trials");
    double log_sum = 0.0;
    for (double p : successes) {
        // success probabilities may exceed 1 by integrator noise (<= 1e-8)
        const double failure = std::max(0.0, 1.0 - p);
        if (failure == 0.0) return 0.0;
        log_sum += std::log(failure);
    }
    return std::exp(log_sum / static_cast<double>(successes.size()));
}

PathChangeCampaign path_change_campaign(const Instance& inst, ExtraCategory category,
                                        int trials, double T, std::uint64_t seed,
                                        const IntegratorConfig& config, bool want_gaps,
                                        int gap_grid, int gap_refine,
                                        const std::string& instance_label) {
    certified_w(inst);
    if (trials < 1) throw std::invalid_argument("path_change_campaign: trials must be >= 1");

    const CostVector cost = build_cost_vector(inst);
    PathChangeCampaign campaign;
    campaign.instance_label = instance_label;
    campaign.category = category;
    campaign.master_seed = seed;
    campaign.total_time = T;

    for (int i = 0; i < trials; ++i) {
        PathChangeTrial trial;
        trial.seed = derive_stream_seed(seed, static_cast<std::uint64_t>(i));
        try {
            const ExtraHamiltonian extra = sample_extra(inst, category, trial.seed);
            trial.success = run_success(inst, cost, T, config, extra);
        } catch (const std::exception& e) {
            campaign.trials.push_back(trial);
            throw CampaignError("trial " + std::to_string(i) + " failed: " + e.what(),
                                std::move(campaign));
        }
        campaign.trials.push_back(trial);
    }

    campaign.best_trial = 0;
    std::vector<double> successes;
    for (std::size_t i = 0; i < campaign.trials.size(); ++i) {
        successes.push_back(campaign.trials[i].success);
        if (campaign.trials[i].success > campaign.trials[campaign.best_trial].success)
            campaign.best_trial = i;
    }
    campaign.chi = chi_statistic(successes);
    campaign.effective_success = 1.0 - campaign.chi;

    if (want_gaps) {
        Rng pick(derive_stream_seed(seed, 0x9a9d'5e1ull));
        campaign.random_trial =
            static_cast<std::size_t>(pick.next_below(static_cast<std::uint64_t>(trials)));
        for (const std::size_t idx : {campaign.best_trial, *campaign.random_trial}) {
            PathChangeTrial& trial = campaign.trials[idx];
            if (trial.g_min) continue;
            ScheduleSpec schedule;
            schedule.total_time = T;
            schedule.extra = sample_extra(inst, category, trial.seed);
            const GapProfile profile = gap_scan(schedule, cost, gap_grid, gap_refine, 2);
            trial.g_min = profile.g_min;
            trial.s_at_min = profile.s_at_min;
        }
    }
    return campaign;
}

std::vector<GapSuccessRow> gap_success_table(const std::vector<PathChangeCampaign>& campaigns,
                                             TrialSelector selector) {
    std::vector<GapSuccessRow> rows;
    for (const PathChangeCampaign& c : campaigns) {
        std::size_t idx = c.best_trial;
        if (selector == TrialSelector::Random) {
            if (!c.random_trial)
                throw std::invalid_argument("campaign for " + c.instance_label +
                                            " carries no random-trial gap data");
            idx = *c.random_trial;
        }
        const PathChangeTrial& trial = c.trials.at(idx);
        if (!trial.g_min)
            throw std::invalid_argument("selected trial of " + c.instance_label +
                                        " carries no gap data");
        rows.push_back({c.instance_label, c.category, selector, trial.success, *trial.g_min});
    }
    return rows;
}

} // namespace qaa
