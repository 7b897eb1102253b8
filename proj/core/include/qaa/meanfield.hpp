#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qaa/instance.hpp"

namespace qaa {

/// Product-state ansatz: one unit Bloch vector (m_x, m_y, m_z) per qubit,
/// the expectation values of sigma_x, sigma_y, sigma_z.
struct BlochConfig {
    std::vector<std::array<double, 3>> m;

    /// All spins along +x: the exact ground configuration of H_B.
    static BlochConfig plus_x(int n) {
        BlochConfig c;
        c.m.assign(static_cast<std::size_t>(n), {1.0, 0.0, 0.0});
        return c;
    }
};

struct MeanFieldResult {
    double final_energy = 0.0;
    double excess = 0.0; // final_energy - cost_min
    bool passed_filter = false;
    double max_norm_err = 0.0; // max over steps of | ||m_i|| - 1 | before renormalization
};

/// Variational product-state energy
///   E(s) = (1-s) sum_i (1 - m_x^i)/2 + s * f_MF(m_z),
/// where f_MF replaces every <sigma_z^i> in the diagonal cost polynomial by
/// m_z^i. Equals the exact quantum expectation on the corresponding product
/// state.
double meanfield_energy(const Instance& inst, double s, const BlochConfig& config);

/// Mean-field approximation of the QAA: starts from +x, integrates the
/// precession dm_i/dt = 2 b_i x m_i with b_i = -grad_{m_i} E(s(t)) by RK4
/// with per-step renormalization, and reports the final energy at s=1 and
/// the filter verdict. Requires a certified optimum (for the excess).
MeanFieldResult meanfield_evolve(const Instance& inst, double T, int steps,
                                 double threshold = 0.5);

/// True ("easy", discard from hard mining) iff excess <= threshold.
/// The boundary is inclusive.
bool apply_filter(const MeanFieldResult& result, double threshold = 0.5);

} // namespace qaa
