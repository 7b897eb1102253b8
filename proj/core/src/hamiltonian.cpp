#include "qaa/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "qaa/errors.hpp"
#include "qaa/rng.hpp"

namespace qaa {

std::string to_string(ExtraCategory category) {
    switch (category) {
        case ExtraCategory::Stoquastic: return "stoquastic";
        case ExtraCategory::Complex: return "complex";
        case ExtraCategory::Diagonal: return "diagonal";
    }
    throw std::invalid_argument("unknown extra category");
}

ExtraCategory extra_category_from_string(const std::string& name) {
    if (name == "stoquastic") return ExtraCategory::Stoquastic;
    if (name == "complex") return ExtraCategory::Complex;
    if (name == "diagonal") return ExtraCategory::Diagonal;
    throw std::invalid_argument("unknown extra category: " + name);
}

const std::vector<std::string>& category_basis(ExtraCategory category) {
    static const std::vector<std::string> stoquastic = {"IX", "XI", "ZX",
                                                        "XZ", "XX", "YY"};
    static const std::vector<std::string> complex_basis = {
        "IX", "XI", "IY", "YI", "ZX", "XZ", "XX", "YY", "ZY", "YZ", "YX", "XY"};
    static const std::vector<std::string> diagonal = {"IZ", "ZI", "ZZ"};
    switch (category) {
        case ExtraCategory::Stoquastic: return stoquastic;
        case ExtraCategory::Complex: return complex_basis;
        case ExtraCategory::Diagonal: return diagonal;
    }
    throw std::invalid_argument("unknown extra category");
}

namespace {

std::array<Amp, 4> pauli2(char c) {
    constexpr Amp i{0.0, 1.0};
    switch (c) {
        case 'I': return {Amp{1}, Amp{0}, Amp{0}, Amp{1}};
        case 'X': return {Amp{0}, Amp{1}, Amp{1}, Amp{0}};
        case 'Y': return {Amp{0}, -i, i, Amp{0}};
        case 'Z': return {Amp{1}, Amp{0}, Amp{0}, Amp{-1}};
        default: throw std::invalid_argument("unknown Pauli label character");
    }
}

bool is_stoquastic(const std::array<Amp, 16>& m) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r == c) continue;
            const Amp v = m[static_cast<std::size_t>(4 * r + c)];
            if (v.imag() != 0.0 || v.real() > 0.0) return false;
        }
    }
    return true;
}

} // namespace

std::array<Amp, 16> build_two_qubit_matrix(const std::vector<std::string>& labels,
                                           const std::vector<double>& coeffs) {
    if (labels.size() != coeffs.size())
        throw std::invalid_argument("label/coefficient count mismatch");
    std::array<Amp, 16> m{};
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k].size() != 2) throw std::invalid_argument("Pauli label must be 2 chars");
        const auto a = pauli2(labels[k][0]); // acts on var_a (low local bit)
        const auto b = pauli2(labels[k][1]); // acts on var_b (high local bit)
        for (int rb = 0; rb < 2; ++rb)
            for (int ra = 0; ra < 2; ++ra)
                for (int cb = 0; cb < 2; ++cb)
                    for (int ca = 0; ca < 2; ++ca) {
                        const int row = ra + 2 * rb;
                        const int col = ca + 2 * cb;
                        m[static_cast<std::size_t>(4 * row + col)] +=
                            coeffs[k] * b[static_cast<std::size_t>(2 * rb + cb)] *
                            a[static_cast<std::size_t>(2 * ra + ca)];
                    }
    }
    return m;
}

ExtraTerm make_extra_term(int var_a, int var_b, const std::vector<std::string>& labels,
                          std::vector<double> coeffs) {
    if (var_a >= var_b) throw std::invalid_argument("extra term needs var_a < var_b");
    ExtraTerm term;
    term.var_a = var_a;
    term.var_b = var_b;
    term.matrix = build_two_qubit_matrix(labels, coeffs);
    term.coeffs = std::move(coeffs);
    bool diagonal = true;
    bool real = true;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const Amp v = term.matrix[static_cast<std::size_t>(4 * r + c)];
            if (v.imag() != 0.0) real = false;
            if (r != c && (v.real() != 0.0 || v.imag() != 0.0)) diagonal = false;
        }
    }
    term.kind = diagonal ? TermKind::Diagonal
                         : (real ? TermKind::RealSymmetric : TermKind::General);
    return term;
}

ExtraHamiltonian sample_extra(const Instance& inst, ExtraCategory category,
                              std::uint64_t seed, ExtraGranularity granularity) {
    std::vector<std::pair<int, int>> sites;
    if (granularity == ExtraGranularity::PerClause) {
        if (inst.kind != CostKind::Max2Sat)
            throw std::invalid_argument("per-clause extra terms need a MAX 2-SAT instance");
        for (const Clause& c : inst.clauses) sites.emplace_back(c.var_a, c.var_b);
    } else {
        sites = inst.interaction_edges();
    }
    if (sites.empty())
        throw std::invalid_argument("instance has no interactions to attach extra terms to");

    const auto& labels = category_basis(category);
    ExtraHamiltonian extra;
    extra.category = category;
    extra.seed = seed;
    extra.terms.reserve(sites.size());

    constexpr int kMaxRetries = 1'000'000;
    for (std::size_t t = 0; t < sites.size(); ++t) {
        Rng rng(derive_stream_seed(seed, t));
        ExtraTerm term;
        int attempts = 0;
        for (;;) {
            if (++attempts > kMaxRetries)
                throw ConvergenceError("stoquastic term rejection did not accept after " +
                                           std::to_string(kMaxRetries) + " draws",
                                       static_cast<std::uint64_t>(attempts - 1));
            std::vector<double> coeffs(labels.size(), 0.0);
            double sumsq = 0.0;
            for (double& c : coeffs) {
                c = rng.next_gaussian();
                sumsq += c * c;
            }
            if (sumsq < 1e-300) continue; // degenerate draw
            const double inv = 1.0 / std::sqrt(sumsq);
            for (double& c : coeffs) c *= inv;
            term = make_extra_term(sites[t].first, sites[t].second, labels, std::move(coeffs));
            if (category != ExtraCategory::Stoquastic || is_stoquastic(term.matrix)) break;
        }
        extra.terms.push_back(std::move(term));
    }
    return extra;
}

namespace {

void check_dims(const StateVector& in, int n, const char* what) {
    if (in.n != n || in.dim() != dim_of(n))
        throw std::invalid_argument(std::string(what) + ": state dimension mismatch");
}

void ensure_out(StateVector& out, int n) {
    out.n = n;
    if (out.dim() != dim_of(n)) out.amps.resize(dim_of(n));
}

/// out += coef * sigma_x^qubit |in>
void accumulate_sigma_x(int qubit, double coef, const Amp* in, Amp* out,
                        std::uint64_t dim) {
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    const std::uint64_t low = mask - 1;
    const std::int64_t half = static_cast<std::int64_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < half; ++i) {
        const std::uint64_t u = static_cast<std::uint64_t>(i);
        const std::uint64_t i0 = ((u & ~low) << 1) | (u & low);
        const std::uint64_t i1 = i0 | mask;
        out[i0] += coef * in[i1];
        out[i1] += coef * in[i0];
    }
}

/// out += scale * (term matrix) |in>, specialized on the matrix structure.
void accumulate_term(const ExtraTerm& term, double scale, const Amp* in, Amp* out,
                     std::uint64_t dim) {
    const std::uint64_t ma = std::uint64_t{1} << term.var_a;
    const std::uint64_t mb = std::uint64_t{1} << term.var_b;
    const std::uint64_t low_a = ma - 1;
    const std::uint64_t low_b = mb - 1;
    const std::int64_t groups = static_cast<std::int64_t>(dim >> 2);

    const auto expand = [low_a, low_b](std::uint64_t u) {
        const std::uint64_t x = ((u & ~low_a) << 1) | (u & low_a);
        return ((x & ~low_b) << 1) | (x & low_b);
    };

    switch (term.kind) {
        case TermKind::Diagonal: {
            double d[4];
            for (int k = 0; k < 4; ++k)
                d[k] = scale * term.matrix[static_cast<std::size_t>(5 * k)].real();
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < groups; ++i) {
                const std::uint64_t z00 = expand(static_cast<std::uint64_t>(i));
                out[z00] += d[0] * in[z00];
                out[z00 | ma] += d[1] * in[z00 | ma];
                out[z00 | mb] += d[2] * in[z00 | mb];
                out[z00 | ma | mb] += d[3] * in[z00 | ma | mb];
            }
            break;
        }
        case TermKind::RealSymmetric: {
            double m[16];
            for (int k = 0; k < 16; ++k)
                m[k] = scale * term.matrix[static_cast<std::size_t>(k)].real();
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < groups; ++i) {
                const std::uint64_t z00 = expand(static_cast<std::uint64_t>(i));
                const std::uint64_t z01 = z00 | ma;
                const std::uint64_t z10 = z00 | mb;
                const std::uint64_t z11 = z00 | ma | mb;
                const Amp v0 = in[z00], v1 = in[z01], v2 = in[z10], v3 = in[z11];
                out[z00] += m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
                out[z01] += m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
                out[z10] += m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
                out[z11] += m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
            }
            break;
        }
        case TermKind::General: {
            std::array<Amp, 16> m;
            for (std::size_t k = 0; k < 16; ++k) m[k] = scale * term.matrix[k];
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < groups; ++i) {
                const std::uint64_t z00 = expand(static_cast<std::uint64_t>(i));
                const std::uint64_t z01 = z00 | ma;
                const std::uint64_t z10 = z00 | mb;
                const std::uint64_t z11 = z00 | ma | mb;
                const Amp v0 = in[z00], v1 = in[z01], v2 = in[z10], v3 = in[z11];
                out[z00] += m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
                out[z01] += m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
                out[z10] += m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
                out[z11] += m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
            }
            break;
        }
    }
}

} // namespace

void apply_hb(const StateVector& in, StateVector& out) {
    const int n = in.n;
    check_dims(in, n, "apply_hb");
    ensure_out(out, n);
    const std::uint64_t dim = in.dim();
    const double half_n = 0.5 * n;
    const Amp* pin = in.amps.data();
    Amp* pout = out.amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < static_cast<std::int64_t>(dim); ++z)
        pout[z] = half_n * pin[z];
    for (int q = 0; q < n; ++q) accumulate_sigma_x(q, -0.5, pin, pout, dim);
}

void apply_hp(const CostVector& cost, const StateVector& in, StateVector& out) {
    if (cost.n != in.n || cost.values.size() != in.dim())
        throw std::invalid_argument("apply_hp: cost/state dimension mismatch");
    ensure_out(out, in.n);
    const std::uint64_t dim = in.dim();
    const Amp* pin = in.amps.data();
    const double* f = cost.values.data();
    Amp* pout = out.amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < static_cast<std::int64_t>(dim); ++z)
        pout[z] = f[z] * pin[z];
}

void apply_extra(const ExtraHamiltonian& extra, const StateVector& in, StateVector& out) {
    for (const ExtraTerm& t : extra.terms) {
        if (t.var_b >= in.n)
            throw std::invalid_argument("apply_extra: term qubit out of range");
    }
    ensure_out(out, in.n);
    std::fill(out.amps.begin(), out.amps.end(), Amp{0.0, 0.0});
    for (const ExtraTerm& t : extra.terms)
        accumulate_term(t, 1.0, in.amps.data(), out.amps.data(), in.dim());
}

void apply_ht(const ScheduleSpec& schedule, const CostVector& cost, double s,
              const StateVector& in, StateVector& out) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("apply_ht: s must lie in [0, 1]");
    // exact endpoints: the s(1-s) envelope vanishes, H(0)=H_B and H(1)=H_P
    if (s == 0.0) {
        apply_hb(in, out);
        return;
    }
    if (s == 1.0) {
        apply_hp(cost, in, out);
        return;
    }
    if (cost.n != in.n || cost.values.size() != in.dim())
        throw std::invalid_argument("apply_ht: cost/state dimension mismatch");
    ensure_out(out, in.n);

    const std::uint64_t dim = in.dim();
    const double one_minus_s = 1.0 - s;
    const double half_n = 0.5 * in.n;
    const Amp* pin = in.amps.data();
    const double* f = cost.values.data();
    Amp* pout = out.amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < static_cast<std::int64_t>(dim); ++z)
        pout[z] = (one_minus_s * half_n + s * f[z]) * pin[z];
    for (int q = 0; q < in.n; ++q)
        accumulate_sigma_x(q, -0.5 * one_minus_s, pin, pout, dim);
    if (schedule.extra) {
        const double envelope = s * one_minus_s;
        for (const ExtraTerm& t : schedule.extra->terms)
            accumulate_term(t, envelope, pin, pout, dim);
    }
}

StateVector apply_hb(const StateVector& in) {
    StateVector out;
    apply_hb(in, out);
    return out;
}

StateVector apply_hp(const CostVector& cost, const StateVector& in) {
    StateVector out;
    apply_hp(cost, in, out);
    return out;
}

StateVector apply_extra(const ExtraHamiltonian& extra, const StateVector& in) {
    StateVector out;
    apply_extra(extra, in, out);
    return out;
}

StateVector apply_ht(const ScheduleSpec& schedule, const CostVector& cost, double s,
                     const StateVector& in) {
    StateVector out;
    apply_ht(schedule, cost, s, in, out);
    return out;
}

} // namespace qaa
