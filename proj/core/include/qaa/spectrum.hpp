#pragma once

#include <cstdint>
#include <vector>

#include "qaa/hamiltonian.hpp"
#include "qaa/state.hpp"

namespace qaa {

struct SpectrumSlice {
    double s = 0.0;
    std::vector<double> eigenvalues;       // ascending
    std::vector<StateVector> eigenvectors; // empty unless requested
    std::vector<double> residuals;         // ||H v - lambda v|| per pair
};

struct GapProfile {
    std::vector<SpectrumSlice> slices;
    double g_min = 0.0;
    double s_at_min = 0.0;
    int grid_points = 0;
    int refine_iters = 0;
};

struct EigensolverOptions {
    int max_basis = 40;      // Lanczos vectors kept before a restart
    int max_restarts = 200;
    std::uint64_t seed = 0x5eed;
    bool want_vectors = true;
};

/// Lowest k eigenpairs of H(s), matrix-free Lanczos with full
/// reorthogonalization; pairs are locked one at a time and deflated out.
/// `warm_start` seeds the Krylov start vectors (e.g. from a nearby s).
/// Throws ConvergenceError with the achieved residual when the restart
/// budget runs out.
SpectrumSlice lowest_eigenpairs(const ScheduleSpec& schedule, const CostVector& cost,
                                double s, int k, double tol = 1e-8,
                                const EigensolverOptions& opts = {},
                                const std::vector<StateVector>* warm_start = nullptr);

/// Evaluates the gap lambda_1 - lambda_0 on a uniform s-grid, then refines
/// around the grid minimum by golden-section search. The reported g_min is
/// never larger than the coarse-grid minimum. Slices carry eigenvalues only;
/// vectors are used internally for warm starts and not retained.
GapProfile gap_scan(const ScheduleSpec& schedule, const CostVector& cost,
                    int grid_points = 201, int refine_iters = 40, int k_levels = 3,
                    double tol = 1e-8, const EigensolverOptions& opts = {});

} // namespace qaa
