#include "qaa/state.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "qaa/errors.hpp"

namespace qaa {

namespace {
std::atomic<std::uint64_t> g_memory_budget{6ull << 30};

constexpr std::uint64_t kReductionBlock = 4096;
} // namespace

std::uint64_t memory_budget() { return g_memory_budget.load(); }

void set_memory_budget(std::uint64_t bytes) { g_memory_budget.store(bytes); }

void require_budget(std::uint64_t bytes, const char* what) {
    if (bytes > memory_budget()) {
        throw ResourceError(std::string(what) + " requires " + std::to_string(bytes) +
                                " bytes, exceeding the configured memory budget of " +
                                std::to_string(memory_budget()) + " bytes",
                            bytes);
    }
}

StateVector::StateVector(int n_qubits) : n(n_qubits) {
    if (n_qubits < 1 || n_qubits > 62)
        throw std::invalid_argument("qubit count must be in [1, 62]");
    require_budget(dim_of(n_qubits) * sizeof(Amp), "state vector");
    amps.assign(dim_of(n_qubits), Amp{0.0, 0.0});
}

namespace {

template <typename BlockFn>
double blocked_real_sum(std::uint64_t dim, BlockFn&& fn) {
    const std::uint64_t blocks = (dim + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kReductionBlock;
        const std::uint64_t hi = std::min(dim, lo + kReductionBlock);
        partial[static_cast<std::uint64_t>(b)] = fn(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace

double norm_squared(const StateVector& v) {
    return blocked_real_sum(v.dim(), [&](std::uint64_t lo, std::uint64_t hi) {
        double s = 0.0;
        for (std::uint64_t z = lo; z < hi; ++z) s += std::norm(v.amps[z]);
        return s;
    });
}

double norm(const StateVector& v) { return std::sqrt(norm_squared(v)); }

Amp inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
    const double re = blocked_real_sum(a.dim(), [&](std::uint64_t lo, std::uint64_t hi) {
        double s = 0.0;
        for (std::uint64_t z = lo; z < hi; ++z) {
            s += a.amps[z].real() * b.amps[z].real() + a.amps[z].imag() * b.amps[z].imag();
        }
        return s;
    });
    const double im = blocked_real_sum(a.dim(), [&](std::uint64_t lo, std::uint64_t hi) {
        double s = 0.0;
        for (std::uint64_t z = lo; z < hi; ++z) {
            s += a.amps[z].real() * b.amps[z].imag() - a.amps[z].imag() * b.amps[z].real();
        }
        return s;
    });
    return {re, im};
}

} // namespace qaa
