#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qaa/errors.hpp"
#include "qaa/spectrum.hpp"

using namespace qaa;

namespace {

ScheduleSpec plain_schedule() {
    ScheduleSpec s;
    s.total_time = 1.0;
    return s;
}

std::vector<double> dense_lowest(const ScheduleSpec& schedule, const CostVector& cost,
                                 double s, int k) {
    Eigen::SelfAdjointEigenSolver<qaatest::Mat> es(qaatest::dense_ht(schedule, cost, s));
    std::vector<double> out;
    for (int j = 0; j < k; ++j) out.push_back(es.eigenvalues()(j));
    return out;
}

} // namespace

TEST_CASE("H_B spectrum at s=0: eigenvalues 0 and 1, uniform ground state") {
    const Instance inst = generate_instance(5, 10, 6);
    const CostVector cost = build_cost_vector(inst);
    const SpectrumSlice slice = lowest_eigenpairs(plain_schedule(), cost, 0.0, 2);
    CHECK(slice.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(slice.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
    const double overlap = std::norm(inner(slice.eigenvectors[0], initial_state(5)));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("s=1 slice is the exact sorted diagonal") {
    Instance inst = generate_instance(6, 18, 8);
    certify_optimum(inst);
    const CostVector cost = build_cost_vector(inst);
    const SpectrumSlice slice = lowest_eigenpairs(plain_schedule(), cost, 1.0, 3);
    CHECK(slice.eigenvalues[0] == inst.optimum->cost_min); // exact

    std::vector<double> sorted = cost.values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(slice.eigenvalues[1] == sorted[1]);
    CHECK(slice.eigenvalues[2] == sorted[2]);
    CHECK(std::norm(slice.eigenvectors[0].amps[inst.optimum->w]) ==
          doctest::Approx(1.0));
}

TEST_CASE("lowest eigenpairs match dense diagonalization with extras") {
    const Instance inst = generate_instance(4, 10, 17);
    const CostVector cost = build_cost_vector(inst);
    for (ExtraCategory cat :
         {ExtraCategory::Stoquastic, ExtraCategory::Complex, ExtraCategory::Diagonal}) {
        ScheduleSpec schedule = plain_schedule();
        schedule.extra = sample_extra(inst, cat, 300 + static_cast<int>(cat));
        const SpectrumSlice slice = lowest_eigenpairs(schedule, cost, 0.5, 3, 1e-9);
        const auto ref = dense_lowest(schedule, cost, 0.5, 3);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(slice.eigenvalues[static_cast<std::size_t>(j)] -
                           ref[static_cast<std::size_t>(j)]) < 1e-9);
        for (double r : slice.residuals) CHECK(r < 1e-9);
        // pairwise orthonormality of the returned vectors
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const double dot = std::abs(inner(slice.eigenvectors[a], slice.eigenvectors[b]));
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
    }
}

TEST_CASE("degenerate levels are resolved with the right multiplicity") {
    // H_B at s=0 has lambda=1 with multiplicity n
    const Instance inst = generate_instance(4, 8, 5);
    const CostVector cost = build_cost_vector(inst);
    const SpectrumSlice slice = lowest_eigenpairs(plain_schedule(), cost, 0.0, 3);
    CHECK(slice.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(slice.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(slice.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("gap scan matches the closed form on one qubit") {
    Instance inst = Instance::explicit_diagonal({0.0, 1.0});
    const CostVector cost = build_cost_vector(inst);
    const GapProfile profile = gap_scan(plain_schedule(), cost, 101, 40, 2);
    // gap(s) = sqrt(s^2 + (1-s)^2), minimized at s = 1/2
    CHECK(std::abs(profile.g_min - std::sqrt(0.5)) < 1e-8);
    CHECK(std::abs(profile.s_at_min - 0.5) < 1e-4);
    for (const SpectrumSlice& slice : profile.slices) {
        const double expected =
            std::sqrt(slice.s * slice.s + (1.0 - slice.s) * (1.0 - slice.s));
        CHECK(std::abs((slice.eigenvalues[1] - slice.eigenvalues[0]) - expected) < 1e-8);
    }
}

TEST_CASE("gap scan against a dense scan on the Grover cost") {
    const Instance inst = Instance::grover(6, 11);
    const CostVector cost = build_cost_vector(inst);
    const GapProfile profile = gap_scan(plain_schedule(), cost, 101, 40, 2, 1e-9);

    double dense_min = 1e300;
    double dense_arg = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double s = i / 2000.0;
        const auto ref = dense_lowest(plain_schedule(), cost, s, 2);
        if (ref[1] - ref[0] < dense_min) {
            dense_min = ref[1] - ref[0];
            dense_arg = s;
        }
    }
    CHECK(std::abs(profile.g_min - dense_min) < 1e-6);
    CHECK(std::abs(profile.s_at_min - dense_arg) < 2e-3);
}

TEST_CASE("degenerate optimum gives a closing gap at s=1") {
    Instance inst = Instance::max2sat(3, {}); // f == 0 everywhere
    const CostVector cost = build_cost_vector(inst);
    const GapProfile profile = gap_scan(plain_schedule(), cost, 21, 10, 2);
    CHECK(profile.g_min == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(profile.s_at_min == doctest::Approx(1.0));
}

TEST_CASE("refinement never reports more than the coarse minimum") {
    const Instance inst = Instance::grover(5, 9);
    const CostVector cost = build_cost_vector(inst);
    const GapProfile profile = gap_scan(plain_schedule(), cost, 31, 25, 2);
    double coarse = 1e300;
    for (const SpectrumSlice& slice : profile.slices)
        coarse = std::min(coarse, slice.eigenvalues[1] - slice.eigenvalues[0]);
    CHECK(profile.g_min <= coarse + 1e-15);
}

TEST_CASE("warm starts do not change converged results") {
    const Instance inst = generate_instance(5, 12, 30);
    const CostVector cost = build_cost_vector(inst);
    const SpectrumSlice cold = lowest_eigenpairs(plain_schedule(), cost, 0.6, 2, 1e-10);
    const SpectrumSlice near = lowest_eigenpairs(plain_schedule(), cost, 0.61, 2, 1e-10);
    const SpectrumSlice warm =
        lowest_eigenpairs(plain_schedule(), cost, 0.6, 2, 1e-10, {}, &near.eigenvectors);
    CHECK(std::abs(cold.eigenvalues[0] - warm.eigenvalues[0]) < 1e-9);
    CHECK(std::abs(cold.eigenvalues[1] - warm.eigenvalues[1]) < 1e-9);
}

TEST_CASE("solver reports non-convergence with the achieved residual") {
    const Instance inst = generate_instance(4, 8, 2);
    const CostVector cost = build_cost_vector(inst);
    EigensolverOptions opts;
    opts.max_restarts = 0;
    CHECK_THROWS_AS(lowest_eigenpairs(plain_schedule(), cost, 0.5, 2, 1e-12, opts),
                    ConvergenceError);
}

TEST_CASE("argument validation") {
    const Instance inst = generate_instance(4, 8, 2);
    const CostVector cost = build_cost_vector(inst);
    CHECK_THROWS_AS(lowest_eigenpairs(plain_schedule(), cost, 1.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(lowest_eigenpairs(plain_schedule(), cost, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(gap_scan(plain_schedule(), cost, 5, 10, 2), std::invalid_argument);
    CHECK_THROWS_AS(gap_scan(plain_schedule(), cost, 21, 10, 1), std::invalid_argument);
}
