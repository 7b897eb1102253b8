#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaa/bits.hpp"

namespace qaa {

/// Two-literal disjunction on distinct variables. Canonical form keeps
/// var_a < var_b; a negated literal has its neg flag set. The clause is
/// violated by an assignment iff both literals evaluate false (a positive
/// literal on variable v is false iff bit v of the assignment is 0).
struct Clause {
    int var_a = 0;
    int var_b = 1;
    bool neg_a = false;
    bool neg_b = false;

    /// Builds the canonical form, swapping literals so var_a < var_b.
    /// Throws std::invalid_argument if the two variables coincide.
    static Clause canonical(int va, bool na, int vb, bool nb);

    bool violated_by(std::uint64_t z) const {
        return (bit_of(z, var_a) != 0) == neg_a && (bit_of(z, var_b) != 0) == neg_b;
    }

    friend auto operator<=>(const Clause&, const Clause&) = default;
};

enum class CostKind { Max2Sat, GroverMarked, ExplicitDiagonal };

std::string to_string(CostKind kind);
CostKind cost_kind_from_string(const std::string& name);

struct Optimum {
    std::uint64_t w = 0;        // smallest minimizing assignment
    double cost_min = 0.0;      // integer-valued for Max2Sat and Grover costs
    std::uint64_t multiplicity = 1;

    friend bool operator==(const Optimum&, const Optimum&) = default;
};

/// A diagonal cost function on n bits: a MAX 2-SAT formula, the Grover cost
/// (0 on one marked string, 1 elsewhere), or an explicit value table.
struct Instance {
    int n = 0;
    CostKind kind = CostKind::Max2Sat;
    std::vector<Clause> clauses;   // Max2Sat only
    std::uint64_t marked = 0;      // GroverMarked only
    std::vector<double> diagonal;  // ExplicitDiagonal only
    std::optional<Optimum> optimum;
    std::uint64_t generator_seed = 0;

    static Instance max2sat(int n, std::vector<Clause> clauses, std::uint64_t seed = 0);
    static Instance grover(int n, std::uint64_t marked);
    static Instance explicit_diagonal(std::vector<double> values);

    /// Distinct unordered variable pairs appearing in clauses, sorted.
    /// For non-SAT costs this is every pair (the cost couples all bits).
    std::vector<std::pair<int, int>> interaction_edges() const;
};

struct CostVector {
    int n = 0;
    std::vector<double> values; // values[z] = f(z)
};

/// Number of distinct canonical clauses on n variables: 4 * n*(n-1)/2.
std::uint64_t max_distinct_clauses(int n);

/// f(z). Throws std::invalid_argument if z is not an n-bit assignment.
double evaluate_cost(const Instance& inst, std::uint64_t z);

/// Tabulates f over all 2^n assignments (ResourceError if over budget).
CostVector build_cost_vector(const Instance& inst);

/// m distinct canonical clauses sampled uniformly without replacement,
/// deterministically from the seed. Clauses are returned sorted.
Instance generate_instance(int n, int m, std::uint64_t seed);

/// Exhaustive scan of all 2^n assignments. Returns the smallest minimizing
/// assignment, the minimum cost, and the number of minimizers, and records
/// the result on the instance.
Optimum certify_optimum(Instance& inst);

bool has_unique_optimum(Instance& inst);

} // namespace qaa
