#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qaa/hamiltonian.hpp"
#include "qaa/state.hpp"

namespace qaa {

struct IntegratorConfig {
    /// Step ceiling; the actual step is min(base_step, T/2000) subdivided to
    /// land exactly on trajectory sample times.
    double base_step = 0.002;
    /// Step-halving convergence target for |P(T;h) - P(T;h/2)|.
    double tolerance = 1e-6;
    std::uint64_t max_steps = 100'000'000;
    /// When set, evolve() re-integrates at half step and fails loudly if the
    /// success probability moved by more than `tolerance`.
    bool check_step_halving = false;
    /// Hard error threshold on | ||psi(T)|| - ||psi(0)|| |.
    double norm_drift_limit = 1e-6;
};

struct TrajectorySample {
    double t = 0.0;
    double s = 0.0;
    double energy = 0.0;                // Re <psi|H(s)|psi>
    double overlap_ground = 0.0;        // |<psi_0(s)|psi>|^2 (NaN when off)
    double overlap_first_excited = 0.0; // |<psi_1(s)|psi>|^2 (NaN when off)
    double norm = 0.0;
};

struct ObservationPlan {
    /// Number of uniform s-grid samples (0 disables the trajectory; the
    /// conventional figure resolution is 201).
    int samples = 0;
    bool energy = true;
    /// Track overlaps with the two lowest instantaneous eigenstates
    /// (one Lanczos solve per sample, warm-started along the path).
    bool overlaps = false;
    double eig_tol = 1e-8;
};

struct EvolutionResult {
    std::optional<double> success_probability; // |<w|psi(T)>|^2 when requested
    double final_norm_drift = 0.0;             // | ||psi(T)|| - ||psi(0)|| |
    std::uint64_t steps = 0;
    std::vector<TrajectorySample> trajectory;
    StateVector final_state;
};

/// Ground state of H_B: the uniform superposition, every amplitude 2^(-n/2).
StateVector initial_state(int n);

/// First excited state of H_B with qubit k flipped to |->; amplitude at z is
/// (-1)^(bit k of z) * 2^(-n/2). These n states are orthonormal and have
/// H_B eigenvalue 1.
StateVector excited_state(int n, int k);

/// Integrates i d|psi>/dt = H(t)|psi> from t=0 to t=T with classical RK4 at
/// fixed step min(base_step, T/2000). No renormalization is performed; the
/// norm drift is measured and reported, and drift beyond
/// config.norm_drift_limit raises IntegrationError.
EvolutionResult evolve(const ScheduleSpec& schedule, const CostVector& cost,
                       const StateVector& initial, const IntegratorConfig& config = {},
                       const ObservationPlan& plan = {},
                       std::optional<std::uint64_t> success_index = {});

/// Re <psi|H(s)|psi>. The imaginary part is a diagnostic and must vanish to
/// 1e-10; a larger value raises IntegrationError.
double energy_expectation(const ScheduleSpec& schedule, const CostVector& cost, double s,
                          const StateVector& state);

/// |<e_j|psi>|^2 for each provided eigenstate.
std::vector<double> eigenstate_overlaps(const StateVector& state,
                                        const std::vector<StateVector>& eigenstates);

} // namespace qaa
