#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qaa/bits.hpp"

namespace qaa {

using Amp = std::complex<double>;

/// 2^n complex amplitudes. Qubit i is bit i of the amplitude index
/// (qubit 0 = least significant bit).
struct StateVector {
    int n = 0;
    std::vector<Amp> amps;

    StateVector() = default;
    explicit StateVector(int n_qubits);

    std::uint64_t dim() const { return amps.size(); }
};

/// All reductions below sum fixed 4096-amplitude blocks first and then
/// combine the block sums left to right, so results do not depend on the
/// number of worker threads.
double norm(const StateVector& v);
double norm_squared(const StateVector& v);

/// <a|b> with the left argument conjugated.
Amp inner(const StateVector& a, const StateVector& b);

} // namespace qaa
