#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaa/instance.hpp"
#include "qaa/state.hpp"

namespace qaa {

/// Categories of the random path-change Hamiltonian. Stoquastic and Complex
/// terms have zero diagonal; Diagonal terms commute with the cost.
enum class ExtraCategory { Stoquastic, Complex, Diagonal };

std::string to_string(ExtraCategory category);
ExtraCategory extra_category_from_string(const std::string& name);

/// Two-character Pauli labels spanned by each category. In a label "AB",
/// A acts on the lower-indexed qubit of the term and B on the higher.
const std::vector<std::string>& category_basis(ExtraCategory category);

/// Dense 4x4 of sum_k coeffs[k] * labels[k], row-major, with local basis
/// index (bit of var_a) + 2*(bit of var_b).
std::array<Amp, 16> build_two_qubit_matrix(const std::vector<std::string>& labels,
                                           const std::vector<double>& coeffs);

/// Structure tag for the cached 4x4, picked up by specialized apply kernels.
enum class TermKind { Diagonal, RealSymmetric, General };

/// One 2-local term: unit-square-sum coefficients over the category basis,
/// acting on qubits var_a < var_b. The dense 4x4 is cached for application.
struct ExtraTerm {
    int var_a = 0;
    int var_b = 1;
    std::vector<double> coeffs;
    std::array<Amp, 16> matrix{};
    TermKind kind = TermKind::General;
};

/// Builds a term with its cached matrix and structure tag.
ExtraTerm make_extra_term(int var_a, int var_b, const std::vector<std::string>& labels,
                          std::vector<double> coeffs);

struct ExtraHamiltonian {
    ExtraCategory category = ExtraCategory::Stoquastic;
    std::uint64_t seed = 0;
    std::vector<ExtraTerm> terms;
};

/// Whether H_E carries one term per interaction-graph edge (default) or one
/// per clause (clauses on the same pair then contribute separate terms).
enum class ExtraGranularity { PerEdge, PerClause };

/// Draws the random path-change Hamiltonian: independent standard Gaussian
/// coefficients per term, normalized to unit square-sum; Stoquastic terms are
/// redrawn until every off-diagonal entry is real and non-positive. Term k
/// uses the child stream derive_stream_seed(seed, k).
ExtraHamiltonian sample_extra(const Instance& inst, ExtraCategory category,
                              std::uint64_t seed,
                              ExtraGranularity granularity = ExtraGranularity::PerEdge);

/// Time-dependent Hamiltonian description:
///   H(s) = (1-s) H_B + s(1-s) H_E + s H_P,  s = t/T.
/// The H_E term is absent when extra is empty.
struct ScheduleSpec {
    double total_time = 100.0;
    std::optional<ExtraHamiltonian> extra;
};

// Matrix-free applications. The out-parameter forms overwrite `out`
// entirely; value forms allocate. H_B = sum_i (1 - sigma_x^i)/2.
void apply_hb(const StateVector& in, StateVector& out);
void apply_hp(const CostVector& cost, const StateVector& in, StateVector& out);
void apply_extra(const ExtraHamiltonian& extra, const StateVector& in, StateVector& out);
void apply_ht(const ScheduleSpec& schedule, const CostVector& cost, double s,
              const StateVector& in, StateVector& out);

StateVector apply_hb(const StateVector& in);
StateVector apply_hp(const CostVector& cost, const StateVector& in);
StateVector apply_extra(const ExtraHamiltonian& extra, const StateVector& in);
StateVector apply_ht(const ScheduleSpec& schedule, const CostVector& cost, double s,
                     const StateVector& in);

} // namespace qaa
