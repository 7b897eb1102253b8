#include "qaa/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qaa/errors.hpp"
#include "qaa/spectrum.hpp"

namespace qaa {

StateVector initial_state(int n) {
    StateVector v(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(dim_of(n)));
    std::fill(v.amps.begin(), v.amps.end(), Amp{a, 0.0});
    return v;
}

StateVector excited_state(int n, int k) {
    if (k < 0 || k >= n) throw std::invalid_argument("excited_state: qubit index out of range");
    StateVector v(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(dim_of(n)));
    const std::int64_t dim = static_cast<std::int64_t>(v.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) {
        const auto u = static_cast<std::uint64_t>(z);
        v.amps[u] = Amp{bit_of(u, k) ? -a : a, 0.0};
    }
    return v;
}

namespace {

/// y = x + c*k, elementwise.
void set_sum(StateVector& y, const StateVector& x, Amp c, const StateVector& k) {
    const std::int64_t dim = static_cast<std::int64_t>(y.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) {
        const auto u = static_cast<std::uint64_t>(z);
        y.amps[u] = x.amps[u] + c * k.amps[u];
    }
}

/// y += w*k, elementwise (real weight).
void add_scaled(StateVector& y, double w, const StateVector& k) {
    const std::int64_t dim = static_cast<std::int64_t>(y.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) {
        const auto u = static_cast<std::uint64_t>(z);
        y.amps[u] += w * k.amps[u];
    }
}

struct Integrator {
    const ScheduleSpec& schedule;
    const CostVector& cost;
    double total_time;
    std::uint64_t max_steps;
    std::uint64_t steps_taken = 0;

    StateVector stage_in, stage_k, ksum;

    explicit Integrator(const ScheduleSpec& sched, const CostVector& c, std::uint64_t cap)
        : schedule(sched), cost(c), total_time(sched.total_time), max_steps(cap),
          stage_in(c.n), stage_k(c.n), ksum(c.n) {}

    double s_of(double t) const { return std::clamp(t / total_time, 0.0, 1.0); }

    void rk4_step(StateVector& psi, double t, double h) {
        const Amp half{0.0, -0.5 * h};
        const Amp full{0.0, -h};
        const Amp sixth{0.0, -h / 6.0};

        apply_ht(schedule, cost, s_of(t), psi, stage_k); // k1
        ksum = stage_k;
        set_sum(stage_in, psi, half, stage_k);

        apply_ht(schedule, cost, s_of(t + 0.5 * h), stage_in, stage_k); // k2
        add_scaled(ksum, 2.0, stage_k);
        set_sum(stage_in, psi, half, stage_k);

        apply_ht(schedule, cost, s_of(t + 0.5 * h), stage_in, stage_k); // k3
        add_scaled(ksum, 2.0, stage_k);
        set_sum(stage_in, psi, full, stage_k);

        apply_ht(schedule, cost, s_of(t + h), stage_in, stage_k); // k4
        add_scaled(ksum, 1.0, stage_k);
        set_sum(psi, psi, sixth, ksum);
    }

    /// Advances psi from t_a to t_b in uniform sub-steps no larger than h_cap.
    void advance(StateVector& psi, double t_a, double t_b, double h_cap) {
        const double span = t_b - t_a;
        if (span <= 0.0) return;
        const auto n_sub = static_cast<std::uint64_t>(std::ceil(span / h_cap - 1e-12));
        const std::uint64_t subs = std::max<std::uint64_t>(1, n_sub);
        const double h = span / static_cast<double>(subs);
        for (std::uint64_t i = 0; i < subs; ++i) {
            if (++steps_taken > max_steps)
                throw ConvergenceError("evolution exceeded max_steps", steps_taken - 1);
            rk4_step(psi, t_a + static_cast<double>(i) * h, h);
        }
    }
};

} // namespace

EvolutionResult evolve(const ScheduleSpec& schedule, const CostVector& cost,
                       const StateVector& initial, const IntegratorConfig& config,
                       const ObservationPlan& plan,
                       std::optional<std::uint64_t> success_index) {
    if (initial.n != cost.n || initial.dim() != cost.values.size())
        throw std::invalid_argument("evolve: initial state / cost dimension mismatch");
    if (schedule.total_time < 0.0) throw std::invalid_argument("evolve: T must be >= 0");
    if (config.base_step <= 0.0) throw std::invalid_argument("evolve: base_step must be > 0");
    if (success_index && *success_index >= initial.dim())
        throw std::invalid_argument("evolve: success index out of range");

    const double T = schedule.total_time;
    const double initial_norm = norm(initial);

    EvolutionResult result;
    StateVector psi = initial;

    const bool trajectory = plan.samples > 0 && T > 0.0;
    std::vector<double> sample_s;
    if (trajectory) {
        const int samples = std::max(plan.samples, 2);
        sample_s.reserve(static_cast<std::size_t>(samples));
        for (int j = 0; j < samples; ++j)
            sample_s.push_back(static_cast<double>(j) / (samples - 1));
    } else {
        sample_s = {0.0, 1.0}; // integrate [0,T] in one span, no recording
    }

    // observer state (instantaneous eigenbasis warm start)
    std::vector<StateVector> eig_warm;
    StateVector scratch(cost.n);
    auto record = [&](double t, double s) {
        TrajectorySample row;
        row.t = t;
        row.s = s;
        row.norm = norm(psi);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.energy = nan;
        row.overlap_ground = nan;
        row.overlap_first_excited = nan;
        if (plan.energy) {
            apply_ht(schedule, cost, s, psi, scratch);
            row.energy = inner(psi, scratch).real();
        }
        if (plan.overlaps) {
            EigensolverOptions opts;
            SpectrumSlice slice =
                lowest_eigenpairs(schedule, cost, s, 2, plan.eig_tol, opts,
                                  eig_warm.empty() ? nullptr : &eig_warm);
            const auto ov = eigenstate_overlaps(psi, slice.eigenvectors);
            row.overlap_ground = ov[0];
            row.overlap_first_excited = ov[1];
            eig_warm = std::move(slice.eigenvectors);
        }
        result.trajectory.push_back(row);
    };

    if (T == 0.0) {
        if (plan.samples > 0) record(0.0, 0.0);
    } else {
        Integrator integ(schedule, cost, config.max_steps);
        const double h_cap = std::min(config.base_step, T / 2000.0);
        if (trajectory) record(0.0, 0.0);
        for (std::size_t j = 0; j + 1 < sample_s.size(); ++j) {
            integ.advance(psi, sample_s[j] * T, sample_s[j + 1] * T, h_cap);
            if (trajectory) record(sample_s[j + 1] * T, sample_s[j + 1]);
        }
        result.steps = integ.steps_taken;
    }

    result.final_norm_drift = std::abs(norm(psi) - initial_norm);
    if (!std::isfinite(result.final_norm_drift) ||
        result.final_norm_drift > config.norm_drift_limit)
        throw IntegrationError("norm drift " + std::to_string(result.final_norm_drift) +
                               " exceeds limit " + std::to_string(config.norm_drift_limit));

    if (success_index) result.success_probability = std::norm(psi.amps[*success_index]);

    if (config.check_step_halving && success_index) {
        IntegratorConfig halved = config;
        halved.check_step_halving = false;
        halved.base_step = 0.5 * config.base_step;
        const EvolutionResult fine =
            evolve(schedule, cost, initial, halved, ObservationPlan{}, success_index);
        const double delta =
            std::abs(*fine.success_probability - *result.success_probability);
        if (delta >= config.tolerance)
            throw ConvergenceError("step-halving check failed: |dP| = " +
                                       std::to_string(delta) + " at base_step " +
                                       std::to_string(config.base_step),
                                   result.steps, delta);
    }

    result.final_state = std::move(psi);
    return result;
}

double energy_expectation(const ScheduleSpec& schedule, const CostVector& cost, double s,
                          const StateVector& state) {
    StateVector hpsi(state.n);
    apply_ht(schedule, cost, s, state, hpsi);
    const Amp e = inner(state, hpsi);
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real())))
        throw IntegrationError("energy expectation has non-vanishing imaginary part " +
                               std::to_string(e.imag()));
    return e.real();
}

std::vector<double> eigenstate_overlaps(const StateVector& state,
                                        const std::vector<StateVector>& eigenstates) {
    std::vector<double> out;
    out.reserve(eigenstates.size());
    double total = 0.0;
    for (const StateVector& e : eigenstates) {
        out.push_back(std::norm(inner(e, state)));
        total += out.back();
    }
    if (total > norm_squared(state) + 1e-8)
        throw std::invalid_argument("eigenstate_overlaps: overlaps exceed the state norm; "
                                    "eigenstates are not orthonormal");
    return out;
}

} // namespace qaa
