#pragma once

// Dense reference implementations built directly from Pauli matrices and
// Kronecker products. These are the oracles the matrix-free kernels are
// checked against, so they deliberately share no code with qaa_core's
// application paths.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "qaa/evolution.hpp"
#include "qaa/hamiltonian.hpp"
#include "qaa/instance.hpp"
#include "qaa/rng.hpp"
#include "qaa/state.hpp"

namespace qaatest {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char c) {
    Mat m(2, 2);
    const std::complex<double> i{0.0, 1.0};
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad Pauli label");
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Full-space operator with `op` on `qubit` (qubit 0 = least significant
/// index bit, i.e. the rightmost Kronecker factor).
inline Mat op_on(int n, int qubit, const Mat& op) {
    Mat acc = Mat::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) acc = kron(acc, q == qubit ? op : pauli('I'));
    return acc;
}

inline Mat two_site(int n, int qa, int qb, char ca, char cb) {
    Mat acc = Mat::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
        if (q == qa) {
            acc = kron(acc, pauli(ca));
        } else if (q == qb) {
            acc = kron(acc, pauli(cb));
        } else {
            acc = kron(acc, pauli('I'));
        }
    }
    return acc;
}

inline Mat dense_hb(int n) {
    const auto dim = static_cast<Eigen::Index>(qaa::dim_of(n));
    Mat h = Mat::Zero(dim, dim);
    for (int q = 0; q < n; ++q)
        h += 0.5 * (Mat::Identity(dim, dim) - op_on(n, q, pauli('X')));
    return h;
}

inline Mat dense_hp(const qaa::CostVector& cost) {
    const auto dim = static_cast<Eigen::Index>(cost.values.size());
    Mat h = Mat::Zero(dim, dim);
    for (Eigen::Index z = 0; z < dim; ++z) h(z, z) = cost.values[static_cast<std::size_t>(z)];
    return h;
}

/// Built from labels and coefficients, not from the cached term matrices.
inline Mat dense_extra(int n, const qaa::ExtraHamiltonian& extra) {
    const auto dim = static_cast<Eigen::Index>(qaa::dim_of(n));
    Mat h = Mat::Zero(dim, dim);
    const auto& labels = qaa::category_basis(extra.category);
    for (const qaa::ExtraTerm& term : extra.terms) {
        for (std::size_t k = 0; k < labels.size(); ++k) {
            h += term.coeffs[k] *
                 two_site(n, term.var_a, term.var_b, labels[k][0], labels[k][1]);
        }
    }
    return h;
}

inline Mat dense_ht(const qaa::ScheduleSpec& schedule, const qaa::CostVector& cost, double s) {
    Mat h = (1.0 - s) * dense_hb(cost.n) + s * dense_hp(cost);
    if (schedule.extra) h += s * (1.0 - s) * dense_extra(cost.n, *schedule.extra);
    return h;
}

inline Vec to_eigen(const qaa::StateVector& v) {
    Vec out(static_cast<Eigen::Index>(v.dim()));
    for (std::uint64_t z = 0; z < v.dim(); ++z) out(static_cast<Eigen::Index>(z)) = v.amps[z];
    return out;
}

inline qaa::StateVector from_eigen(int n, const Vec& v) {
    qaa::StateVector out(n);
    for (std::uint64_t z = 0; z < out.dim(); ++z) out.amps[z] = v(static_cast<Eigen::Index>(z));
    return out;
}

inline qaa::StateVector random_state(int n, std::uint64_t seed) {
    qaa::StateVector v(n);
    qaa::Rng rng(seed);
    for (qaa::Amp& a : v.amps) a = qaa::Amp{rng.next_gaussian(), rng.next_gaussian()};
    const double s = 1.0 / qaa::norm(v);
    for (qaa::Amp& a : v.amps) a *= s;
    return v;
}

/// Piecewise-exact propagator: splits [0, T] into `substeps` uniform
/// intervals and applies the exact matrix exponential of the midpoint
/// Hamiltonian on each, via dense diagonalization.
inline qaa::StateVector propagate_oracle(const qaa::ScheduleSpec& schedule,
                                         const qaa::CostVector& cost,
                                         const qaa::StateVector& initial, int substeps) {
    const double T = schedule.total_time;
    const Mat hb = dense_hb(cost.n);
    const Mat hp = dense_hp(cost);
    Mat he;
    if (schedule.extra) he = dense_extra(cost.n, *schedule.extra);

    Vec psi = to_eigen(initial);
    const double h = T / substeps;
    const std::complex<double> mi{0.0, -1.0};
    for (int step = 0; step < substeps; ++step) {
        const double s = (static_cast<double>(step) + 0.5) * h / T;
        Mat ham = (1.0 - s) * hb + s * hp;
        if (schedule.extra) ham += s * (1.0 - s) * he;
        Eigen::SelfAdjointEigenSolver<Mat> es(ham);
        const Vec phase =
            (mi * h * es.eigenvalues().array().cast<std::complex<double>>()).exp();
        psi = es.eigenvectors() * (phase.asDiagonal() * (es.eigenvectors().adjoint() * psi));
    }
    return from_eigen(cost.n, psi);
}

inline double max_amp_error(const qaa::StateVector& a, const qaa::StateVector& b) {
    double err = 0.0;
    for (std::uint64_t z = 0; z < a.dim(); ++z) err = std::max(err, std::abs(a.amps[z] - b.amps[z]));
    return err;
}

} // namespace qaatest
