#include "qaa/meanfield.hpp"

#include <cmath>
#include <stdexcept>

#include "qaa/errors.hpp"

namespace qaa {

namespace {

/// Diagonal cost as a polynomial in the sigma_z expectations. MAX 2-SAT uses
/// the exact per-clause 2-local form; other kinds fall back to the full
/// product-state expectation over the value table.
struct CostModel {
    int n = 0;
    const std::vector<Clause>* clauses = nullptr;
    std::vector<double> table;

    static CostModel of(const Instance& inst) {
        CostModel model;
        model.n = inst.n;
        if (inst.kind == CostKind::Max2Sat) {
            model.clauses = &inst.clauses;
        } else {
            model.table = build_cost_vector(inst).values;
        }
        return model;
    }

    // clause contribution: 1/4 (1 + ea mz_a)(1 + eb mz_b), e = +1 for a
    // positive literal, -1 for a negated one
    static double sign(bool neg) { return neg ? -1.0 : 1.0; }

    double energy(const std::vector<double>& mz) const {
        if (clauses != nullptr) {
            double e = 0.0;
            for (const Clause& c : *clauses) {
                const double ea = sign(c.neg_a), eb = sign(c.neg_b);
                e += 0.25 * (1.0 + ea * mz[static_cast<std::size_t>(c.var_a)]) *
                     (1.0 + eb * mz[static_cast<std::size_t>(c.var_b)]);
            }
            return e;
        }
        // product expectation: sum_z f(z) prod_i p_i(z_i)
        const std::uint64_t dim = dim_of(n);
        double e = 0.0;
        for (std::uint64_t z = 0; z < dim; ++z) {
            double p = 1.0;
            for (int i = 0; i < n; ++i) {
                const double mzi = mz[static_cast<std::size_t>(i)];
                p *= bit_of(z, i) ? 0.5 * (1.0 - mzi) : 0.5 * (1.0 + mzi);
            }
            e += table[z] * p;
        }
        return e;
    }

    void gradient(const std::vector<double>& mz, std::vector<double>& out) const {
        out.assign(static_cast<std::size_t>(n), 0.0);
        if (clauses != nullptr) {
            for (const Clause& c : *clauses) {
                const double ea = sign(c.neg_a), eb = sign(c.neg_b);
                const double fa = 1.0 + ea * mz[static_cast<std::size_t>(c.var_a)];
                const double fb = 1.0 + eb * mz[static_cast<std::size_t>(c.var_b)];
                out[static_cast<std::size_t>(c.var_a)] += 0.25 * ea * fb;
                out[static_cast<std::size_t>(c.var_b)] += 0.25 * eb * fa;
            }
            return;
        }
        // d/dmz_i of the product expectation via prefix/suffix products
        const std::uint64_t dim = dim_of(n);
        std::vector<double> p(static_cast<std::size_t>(n));
        std::vector<double> prefix(static_cast<std::size_t>(n) + 1);
        std::vector<double> suffix(static_cast<std::size_t>(n) + 1);
        for (std::uint64_t z = 0; z < dim; ++z) {
            for (int i = 0; i < n; ++i) {
                const double mzi = mz[static_cast<std::size_t>(i)];
                p[static_cast<std::size_t>(i)] =
                    bit_of(z, i) ? 0.5 * (1.0 - mzi) : 0.5 * (1.0 + mzi);
            }
            prefix[0] = 1.0;
            for (int i = 0; i < n; ++i)
                prefix[static_cast<std::size_t>(i) + 1] =
                    prefix[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
            suffix[static_cast<std::size_t>(n)] = 1.0;
            for (int i = n - 1; i >= 0; --i)
                suffix[static_cast<std::size_t>(i)] =
                    suffix[static_cast<std::size_t>(i) + 1] * p[static_cast<std::size_t>(i)];
            const double f = table[z];
            if (f == 0.0) continue;
            for (int i = 0; i < n; ++i) {
                const double dp = bit_of(z, i) ? -0.5 : 0.5;
                out[static_cast<std::size_t>(i)] +=
                    f * dp * prefix[static_cast<std::size_t>(i)] *
                    suffix[static_cast<std::size_t>(i) + 1];
            }
        }
    }
};

} // namespace

double meanfield_energy(const Instance& inst, double s, const BlochConfig& config) {
    if (config.m.size() != static_cast<std::size_t>(inst.n))
        throw std::invalid_argument("meanfield_energy: config size mismatch");
    const CostModel model = CostModel::of(inst);
    std::vector<double> mz(config.m.size());
    double driver = 0.0;
    for (std::size_t i = 0; i < config.m.size(); ++i) {
        driver += 0.5 * (1.0 - config.m[i][0]);
        mz[i] = config.m[i][2];
    }
    return (1.0 - s) * driver + s * model.energy(mz);
}

namespace {

using Spins = std::vector<std::array<double, 3>>;

/// dm_i/dt = 2 b_i x m_i with b = ((1-s)/2, 0, -s dE_P/dmz_i).
void derivative(const CostModel& model, double s, const Spins& m, Spins& out,
                std::vector<double>& mz, std::vector<double>& grad) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) mz[i] = m[i][2];
    model.gradient(mz, grad);
    const double bx = 0.5 * (1.0 - s);
    for (std::size_t i = 0; i < n; ++i) {
        const double bz = -s * grad[i];
        out[i][0] = 2.0 * (-bz * m[i][1]);
        out[i][1] = 2.0 * (bz * m[i][0] - bx * m[i][2]);
        out[i][2] = 2.0 * (bx * m[i][1]);
    }
}

} // namespace

MeanFieldResult meanfield_evolve(const Instance& inst, double T, int steps,
                                 double threshold) {
    if (T <= 0.0) throw std::invalid_argument("meanfield_evolve: T must be > 0");
    if (steps < 1) throw std::invalid_argument("meanfield_evolve: steps must be >= 1");
    if (!inst.optimum)
        throw std::invalid_argument("meanfield_evolve: instance optimum not certified");

    const CostModel model = CostModel::of(inst);
    const std::size_t n = static_cast<std::size_t>(inst.n);
    Spins m = BlochConfig::plus_x(inst.n).m;
    Spins k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<double> mz(n), grad(n);

    const double h = T / steps;
    double max_norm_err = 0.0;
    for (int step = 0; step < steps; ++step) {
        const double t = h * step;
        derivative(model, t / T, m, k1, mz, grad);
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) tmp[i][c] = m[i][c] + 0.5 * h * k1[i][c];
        derivative(model, (t + 0.5 * h) / T, tmp, k2, mz, grad);
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) tmp[i][c] = m[i][c] + 0.5 * h * k2[i][c];
        derivative(model, (t + 0.5 * h) / T, tmp, k3, mz, grad);
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) tmp[i][c] = m[i][c] + h * k3[i][c];
        derivative(model, std::min(1.0, (t + h) / T), tmp, k4, mz, grad);
        for (std::size_t i = 0; i < n; ++i) {
            for (int c = 0; c < 3; ++c)
                m[i][c] += h / 6.0 * (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]);
            const double len =
                std::sqrt(m[i][0] * m[i][0] + m[i][1] * m[i][1] + m[i][2] * m[i][2]);
            if (!std::isfinite(len) || len == 0.0)
                throw IntegrationError("mean-field state became non-finite");
            max_norm_err = std::max(max_norm_err, std::abs(len - 1.0));
            // precession conserves length; renormalize away integrator drift
            for (int c = 0; c < 3; ++c) m[i][c] /= len;
        }
    }

    for (std::size_t i = 0; i < n; ++i) mz[i] = m[i][2];
    MeanFieldResult result;
    result.final_energy = model.energy(mz);
    result.excess = result.final_energy - inst.optimum->cost_min;
    result.max_norm_err = max_norm_err;
    result.passed_filter = result.excess <= threshold;
    return result;
}

bool apply_filter(const MeanFieldResult& result, double threshold) {
    return result.excess <= threshold;
}

} // namespace qaa
