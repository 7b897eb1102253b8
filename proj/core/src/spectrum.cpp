#include "qaa/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qaa/errors.hpp"
#include "qaa/rng.hpp"

namespace qaa {

namespace {

StateVector random_state(int n, std::uint64_t seed) {
    StateVector v(n);
    Rng rng(seed);
    for (Amp& a : v.amps) a = Amp{rng.next_gaussian(), rng.next_gaussian()};
    const double s = 1.0 / norm(v);
    for (Amp& a : v.amps) a *= s;
    return v;
}

void axpy(StateVector& y, Amp c, const StateVector& x) {
    const std::int64_t dim = static_cast<std::int64_t>(y.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) y.amps[static_cast<std::uint64_t>(z)] += c * x.amps[static_cast<std::uint64_t>(z)];
}

void scale(StateVector& y, double c) {
    const std::int64_t dim = static_cast<std::int64_t>(y.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) y.amps[static_cast<std::uint64_t>(z)] *= c;
}

void orthogonalize_against(StateVector& w, const std::vector<StateVector>& basis) {
    for (const StateVector& u : basis) axpy(w, -inner(u, w), u);
}

/// Exact lowest-k slice of the diagonal operator H(1) = H_P.
SpectrumSlice diagonal_slice(const CostVector& cost, int k, bool want_vectors) {
    const std::uint64_t dim = cost.values.size();
    const std::size_t keep =
        static_cast<std::size_t>(std::min<std::uint64_t>(dim, static_cast<std::uint64_t>(k)));
    std::vector<std::uint64_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0ull);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                      [&](std::uint64_t a, std::uint64_t b) {
                          if (cost.values[a] != cost.values[b])
                              return cost.values[a] < cost.values[b];
                          return a < b;
                      });
    SpectrumSlice slice;
    slice.s = 1.0;
    for (std::size_t j = 0; j < keep; ++j) {
        const std::uint64_t z = idx[j];
        slice.eigenvalues.push_back(cost.values[z]);
        slice.residuals.push_back(0.0);
        if (want_vectors) {
            StateVector v(cost.n);
            v.amps[z] = Amp{1.0, 0.0};
            slice.eigenvectors.push_back(std::move(v));
        }
    }
    return slice;
}

struct LockedPair {
    double value = 0.0;
    double residual = 0.0;
    StateVector vector;
};

/// One Lanczos run with full reorthogonalization against both the growing
/// Krylov basis and the locked pairs, restarted on the best Ritz vector.
LockedPair solve_next(const ScheduleSpec& schedule, const CostVector& cost, double s,
                      const std::vector<LockedPair>& locked, const StateVector* warm,
                      double tol, const EigensolverOptions& opts, std::uint64_t pair_index) {
    const int n = cost.n;
    const std::uint64_t dim = dim_of(n);
    const int max_basis = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(opts.max_basis), dim));
    require_budget((static_cast<std::uint64_t>(max_basis) + 4) * dim * sizeof(Amp),
                   "Lanczos basis");

    std::vector<StateVector> locked_vecs;
    for (const LockedPair& p : locked) locked_vecs.push_back(p.vector);

    auto fresh_start = [&](std::uint64_t salt) {
        StateVector v = random_state(n, derive_stream_seed(opts.seed, pair_index * 977 + salt));
        orthogonalize_against(v, locked_vecs);
        const double nv = norm(v);
        if (nv > 1e-12) scale(v, 1.0 / nv);
        return v;
    };

    StateVector v0;
    if (warm != nullptr) {
        v0 = *warm;
        orthogonalize_against(v0, locked_vecs);
        const double nv = norm(v0);
        if (nv > 1e-6) {
            scale(v0, 1.0 / nv);
        } else {
            v0 = fresh_start(0);
        }
    } else {
        v0 = fresh_start(0);
    }

    double best_residual = std::numeric_limits<double>::infinity();
    StateVector work(n);

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        std::vector<StateVector> basis;
        basis.push_back(v0);
        std::vector<double> alpha;
        std::vector<double> beta;
        bool exhausted = false;

        for (int j = 0; j < max_basis; ++j) {
            apply_ht(schedule, cost, s, basis[static_cast<std::size_t>(j)], work);
            StateVector w = work;
            alpha.push_back(inner(basis[static_cast<std::size_t>(j)], w).real());
            axpy(w, -alpha.back(), basis[static_cast<std::size_t>(j)]);
            if (j > 0) axpy(w, -beta[static_cast<std::size_t>(j - 1)], basis[static_cast<std::size_t>(j - 1)]);
            // full reorthogonalization, locked pairs included
            orthogonalize_against(w, basis);
            orthogonalize_against(w, locked_vecs);
            const double b = norm(w);
            if (b < 1e-13 || j == max_basis - 1) {
                exhausted = b < 1e-13;
                if (!exhausted) beta.push_back(b);
                break;
            }
            beta.push_back(b);
            scale(w, 1.0 / b);
            basis.push_back(std::move(w));
        }

        // Ritz values of the tridiagonal section
        const int m = static_cast<int>(alpha.size());
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub(std::max(0, m - 1));
        for (int i = 0; i + 1 < m; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const double theta = tri.eigenvalues()(0);
        const Eigen::VectorXd y = tri.eigenvectors().col(0);

        // Ritz vector
        StateVector x(n);
        for (int i = 0; i < static_cast<int>(basis.size()) && i < m; ++i)
            axpy(x, Amp{y(i), 0.0}, basis[static_cast<std::size_t>(i)]);
        orthogonalize_against(x, locked_vecs);
        const double nx = norm(x);
        if (nx < 1e-12) {
            v0 = fresh_start(static_cast<std::uint64_t>(restart) + 1);
            continue;
        }
        scale(x, 1.0 / nx);

        apply_ht(schedule, cost, s, x, work);
        axpy(work, Amp{-theta, 0.0}, x);
        const double residual = norm(work);
        best_residual = std::min(best_residual, residual);
        if (residual <= tol) return LockedPair{theta, residual, std::move(x)};
        if (exhausted) {
            // Krylov space closed on an invariant subspace but the pair is
            // still off target: restart from a fresh direction
            v0 = fresh_start(static_cast<std::uint64_t>(restart) + 1);
        } else {
            v0 = std::move(x);
        }
    }
    throw ConvergenceError("Lanczos did not reach residual " + std::to_string(tol) +
                               " (best " + std::to_string(best_residual) + ") for pair " +
                               std::to_string(pair_index),
                           static_cast<std::uint64_t>(opts.max_restarts), best_residual);
}

} // namespace

SpectrumSlice lowest_eigenpairs(const ScheduleSpec& schedule, const CostVector& cost,
                                double s, int k, double tol,
                                const EigensolverOptions& opts,
                                const std::vector<StateVector>* warm_start) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("lowest_eigenpairs: s in [0,1]");
    if (k < 1 || dim_of(cost.n) < static_cast<std::uint64_t>(k))
        throw std::invalid_argument("lowest_eigenpairs: need 1 <= k <= 2^n");

    // H(1) = H_P is diagonal regardless of the extra term; report it exactly.
    if (s == 1.0) {
        SpectrumSlice slice = diagonal_slice(cost, k, opts.want_vectors);
        return slice;
    }

    std::vector<LockedPair> locked;
    for (int j = 0; j < k; ++j) {
        const StateVector* warm = nullptr;
        if (warm_start != nullptr && static_cast<std::size_t>(j) < warm_start->size())
            warm = &(*warm_start)[static_cast<std::size_t>(j)];
        locked.push_back(solve_next(schedule, cost, s, locked, warm, tol, opts,
                                    static_cast<std::uint64_t>(j)));
    }
    std::sort(locked.begin(), locked.end(),
              [](const LockedPair& a, const LockedPair& b) { return a.value < b.value; });

    SpectrumSlice slice;
    slice.s = s;
    for (LockedPair& p : locked) {
        slice.eigenvalues.push_back(p.value);
        slice.residuals.push_back(p.residual);
        if (opts.want_vectors) slice.eigenvectors.push_back(std::move(p.vector));
    }
    return slice;
}

GapProfile gap_scan(const ScheduleSpec& schedule, const CostVector& cost, int grid_points,
                    int refine_iters, int k_levels, double tol,
                    const EigensolverOptions& opts) {
    if (grid_points < 11) throw std::invalid_argument("gap_scan: need >= 11 grid points");
    if (k_levels < 2) throw std::invalid_argument("gap_scan: need k >= 2 for a gap");

    GapProfile profile;
    profile.grid_points = grid_points;
    profile.refine_iters = refine_iters;

    // Slices keep eigenvalues only; eigenvectors are used for warm starts
    // along the grid and dropped afterwards to bound memory at large n.
    EigensolverOptions inner = opts;
    inner.want_vectors = true;
    std::vector<StateVector> prev;
    std::vector<StateVector> vectors_at_min;
    double best_gap = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double s = static_cast<double>(i) / (grid_points - 1);
        SpectrumSlice slice =
            lowest_eigenpairs(schedule, cost, s, k_levels, tol, inner,
                              prev.empty() ? nullptr : &prev);
        const double g = slice.eigenvalues[1] - slice.eigenvalues[0];
        prev = std::move(slice.eigenvectors);
        slice.eigenvectors.clear();
        if (g < best_gap) {
            best_gap = g;
            best_s = s;
            vectors_at_min = prev;
        }
        profile.slices.push_back(std::move(slice));
    }

    // golden-section refinement in the bracket around the coarse minimum
    const double step = 1.0 / (grid_points - 1);
    double lo = std::max(0.0, best_s - step);
    double hi = std::min(1.0, best_s + step);
    const std::vector<StateVector>* refine_warm =
        vectors_at_min.empty() ? nullptr : &vectors_at_min;

    auto eval_gap = [&](double s) {
        SpectrumSlice sl = lowest_eigenpairs(schedule, cost, s, 2, tol, inner, refine_warm);
        const double g = sl.eigenvalues[1] - sl.eigenvalues[0];
        if (g < best_gap) {
            best_gap = g;
            best_s = s;
        }
        return g;
    };

    constexpr double kInvPhi = 0.6180339887498949;
    double c = hi - (hi - lo) * kInvPhi;
    double d = lo + (hi - lo) * kInvPhi;
    double fc = eval_gap(c);
    double fd = eval_gap(d);
    for (int it = 0; it < refine_iters; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - (hi - lo) * kInvPhi;
            fc = eval_gap(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + (hi - lo) * kInvPhi;
            fd = eval_gap(d);
        }
    }

    profile.g_min = best_gap;
    profile.s_at_min = best_s;
    return profile;
}

} // namespace qaa
