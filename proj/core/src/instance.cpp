#include "qaa/instance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qaa/errors.hpp"
#include "qaa/rng.hpp"

namespace qaa {

Clause Clause::canonical(int va, bool na, int vb, bool nb) {
    if (va == vb) throw std::invalid_argument("clause variables must be distinct");
    if (va < 0 || vb < 0) throw std::invalid_argument("clause variables must be non-negative");
    Clause c;
    if (va < vb) {
        c = Clause{va, vb, na, nb};
    } else {
        c = Clause{vb, va, nb, na};
    }
    return c;
}

std::string to_string(CostKind kind) {
    switch (kind) {
        case CostKind::Max2Sat: return "max2sat";
        case CostKind::GroverMarked: return "grover";
        case CostKind::ExplicitDiagonal: return "diagonal";
    }
    throw std::invalid_argument("unknown cost kind");
}

CostKind cost_kind_from_string(const std::string& name) {
    if (name == "max2sat") return CostKind::Max2Sat;
    if (name == "grover") return CostKind::GroverMarked;
    if (name == "diagonal") return CostKind::ExplicitDiagonal;
    throw std::invalid_argument("unknown cost kind: " + name);
}

namespace {

void check_clauses(int n, const std::vector<Clause>& clauses) {
    std::set<Clause> seen;
    for (const Clause& c : clauses) {
        if (c.var_a >= c.var_b) throw std::invalid_argument("clause not in canonical form");
        if (c.var_b >= n) throw std::invalid_argument("clause variable out of range");
        if (!seen.insert(c).second)
            throw std::invalid_argument("duplicate clause under canonicalization");
    }
}

} // namespace

Instance Instance::max2sat(int n, std::vector<Clause> clauses, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("MAX 2-SAT needs at least 2 variables");
    if (n > 62) throw std::invalid_argument("bit count must be <= 62");
    check_clauses(n, clauses);
    Instance inst;
    inst.n = n;
    inst.kind = CostKind::Max2Sat;
    inst.clauses = std::move(clauses);
    inst.generator_seed = seed;
    return inst;
}

Instance Instance::grover(int n, std::uint64_t marked) {
    if (n < 1 || n > 62) throw std::invalid_argument("bit count must be in [1, 62]");
    if (marked >= dim_of(n)) throw std::invalid_argument("marked string out of range");
    Instance inst;
    inst.n = n;
    inst.kind = CostKind::GroverMarked;
    inst.marked = marked;
    return inst;
}

Instance Instance::explicit_diagonal(std::vector<double> values) {
    if (values.empty() || (values.size() & (values.size() - 1)) != 0)
        throw std::invalid_argument("diagonal table size must be a power of two");
    Instance inst;
    inst.n = std::countr_zero(values.size());
    if (inst.n < 1) throw std::invalid_argument("diagonal table needs at least 2 entries");
    inst.kind = CostKind::ExplicitDiagonal;
    inst.diagonal = std::move(values);
    return inst;
}

std::vector<std::pair<int, int>> Instance::interaction_edges() const {
    std::set<std::pair<int, int>> edges;
    if (kind == CostKind::Max2Sat) {
        for (const Clause& c : clauses) edges.emplace(c.var_a, c.var_b);
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) edges.emplace(a, b);
    }
    return {edges.begin(), edges.end()};
}

std::uint64_t max_distinct_clauses(int n) {
    if (n < 2) return 0;
    return 4ull * (static_cast<std::uint64_t>(n) * (n - 1) / 2);
}

double evaluate_cost(const Instance& inst, std::uint64_t z) {
    if (z >= dim_of(inst.n))
        throw std::invalid_argument("assignment does not have the instance's bit count");
    switch (inst.kind) {
        case CostKind::Max2Sat: {
            int violated = 0;
            for (const Clause& c : inst.clauses) violated += c.violated_by(z) ? 1 : 0;
            return static_cast<double>(violated);
        }
        case CostKind::GroverMarked:
            return z == inst.marked ? 0.0 : 1.0;
        case CostKind::ExplicitDiagonal:
            return inst.diagonal[z];
    }
    throw std::invalid_argument("unknown cost kind");
}

CostVector build_cost_vector(const Instance& inst) {
    const std::uint64_t dim = dim_of(inst.n);
    require_budget(dim * sizeof(double), "cost vector");
    CostVector cost;
    cost.n = inst.n;
    cost.values.assign(dim, 0.0);
    switch (inst.kind) {
        case CostKind::Max2Sat: {
#pragma omp parallel for schedule(static)
            for (std::int64_t z = 0; z < static_cast<std::int64_t>(dim); ++z) {
                int violated = 0;
                for (const Clause& c : inst.clauses)
                    violated += c.violated_by(static_cast<std::uint64_t>(z)) ? 1 : 0;
                cost.values[static_cast<std::uint64_t>(z)] = static_cast<double>(violated);
            }
            break;
        }
        case CostKind::GroverMarked: {
            std::fill(cost.values.begin(), cost.values.end(), 1.0);
            cost.values[inst.marked] = 0.0;
            break;
        }
        case CostKind::ExplicitDiagonal:
            cost.values = inst.diagonal;
            break;
    }
    return cost;
}

Instance generate_instance(int n, int m, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("MAX 2-SAT needs at least 2 variables");
    const std::uint64_t capacity = max_distinct_clauses(n);
    if (m < 0 || static_cast<std::uint64_t>(m) > capacity)
        throw std::invalid_argument("clause count " + std::to_string(m) + " exceeds the " +
                                    std::to_string(capacity) +
                                    " distinct canonical clauses on " + std::to_string(n) +
                                    " variables");

    // all canonical clauses in lexicographic order
    std::vector<Clause> pool;
    pool.reserve(capacity);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int sa = 0; sa < 2; ++sa)
                for (int sb = 0; sb < 2; ++sb)
                    pool.push_back(Clause{a, b, sa != 0, sb != 0});

    // partial Fisher-Yates: uniform sample without replacement
    Rng rng(seed);
    std::vector<Clause> picked;
    picked.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const std::uint64_t j = i + rng.next_below(pool.size() - static_cast<std::uint64_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        picked.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(picked.begin(), picked.end());
    return Instance::max2sat(n, std::move(picked), seed);
}

Optimum certify_optimum(Instance& inst) {
    const std::uint64_t dim = dim_of(inst.n);
    require_budget(dim, "optimum certification scan");

    struct BlockBest {
        double cost = 0.0;
        std::uint64_t argmin = 0;
        std::uint64_t count = 0;
    };
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t blocks = (dim + kBlock - 1) / kBlock;
    std::vector<BlockBest> partial(blocks);

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t hi = std::min(dim, lo + kBlock);
        BlockBest best{evaluate_cost(inst, lo), lo, 1};
        for (std::uint64_t z = lo + 1; z < hi; ++z) {
            const double c = evaluate_cost(inst, z);
            if (c < best.cost) {
                best = BlockBest{c, z, 1};
            } else if (c == best.cost) {
                ++best.count;
            }
        }
        partial[static_cast<std::uint64_t>(b)] = best;
    }

    // merge left to right; ties keep the smallest assignment
    BlockBest overall = partial[0];
    for (std::uint64_t b = 1; b < blocks; ++b) {
        if (partial[b].cost < overall.cost) {
            overall = partial[b];
        } else if (partial[b].cost == overall.cost) {
            overall.count += partial[b].count;
        }
    }

    Optimum opt{overall.argmin, overall.cost, overall.count};
    inst.optimum = opt;
    return opt;
}

bool has_unique_optimum(Instance& inst) {
    if (!inst.optimum) certify_optimum(inst);
    return inst.optimum->multiplicity == 1;
}

} // namespace qaa
