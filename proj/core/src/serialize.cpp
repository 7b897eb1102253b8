#include "qaa/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qaa/errors.hpp"

namespace qaa {

using nlohmann::json;

std::string format_g12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string manifest_comment(const std::string& manifest_ref) {
    return "# manifest=" + manifest_ref + "\n";
}

namespace {

constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError(std::string("malformed JSON in ") + what);
    return j;
}

void check_version(const json& j, const char* what) {
    if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion)
        throw IoError(std::string(what) + ": unsupported or missing format_version");
}

} // namespace

std::string instance_to_json(const Instance& inst) {
    json j;
    j["format_version"] = kFormatVersion;
    j["n"] = inst.n;
    j["cost_kind"] = to_string(inst.kind);
    j["generator_seed"] = inst.generator_seed;
    json clauses = json::array();
    for (const Clause& c : inst.clauses)
        clauses.push_back(json::array({c.var_a, c.var_b, c.neg_a, c.neg_b}));
    j["clauses"] = clauses;
    if (inst.kind == CostKind::GroverMarked) j["marked"] = inst.marked;
    if (inst.kind == CostKind::ExplicitDiagonal) j["diagonal"] = inst.diagonal;
    if (inst.optimum) {
        j["optimum"] = {{"w", inst.optimum->w},
                        {"cost_min", inst.optimum->cost_min},
                        {"multiplicity", inst.optimum->multiplicity}};
    }
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    const json j = parse(text, "instance");
    check_version(j, "instance");
    const int n = j.at("n").get<int>();
    const CostKind kind = cost_kind_from_string(j.at("cost_kind").get<std::string>());

    Instance inst;
    switch (kind) {
        case CostKind::Max2Sat: {
            std::vector<Clause> clauses;
            for (const json& c : j.at("clauses")) {
                if (!c.is_array() || c.size() != 4)
                    throw IoError("instance: clause must be [var_a, var_b, neg_a, neg_b]");
                clauses.push_back(Clause::canonical(c[0].get<int>(), c[2].get<bool>(),
                                                    c[1].get<int>(), c[3].get<bool>()));
            }
            inst = Instance::max2sat(n, std::move(clauses),
                                     j.value("generator_seed", std::uint64_t{0}));
            break;
        }
        case CostKind::GroverMarked:
            inst = Instance::grover(n, j.at("marked").get<std::uint64_t>());
            break;
        case CostKind::ExplicitDiagonal:
            inst = Instance::explicit_diagonal(j.at("diagonal").get<std::vector<double>>());
            if (inst.n != n) throw IoError("instance: diagonal size does not match n");
            break;
    }
    if (j.contains("optimum")) {
        const json& o = j["optimum"];
        inst.optimum = Optimum{o.at("w").get<std::uint64_t>(),
                               o.at("cost_min").get<double>(),
                               o.at("multiplicity").get<std::uint64_t>()};
    }
    return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    write_file(path, instance_to_json(inst));
}

Instance load_instance(const std::filesystem::path& path) {
    return instance_from_json(read_file(path));
}

std::string extra_to_json(const ExtraHamiltonian& extra) {
    const auto& labels = category_basis(extra.category);
    json j;
    j["format_version"] = kFormatVersion;
    j["category"] = to_string(extra.category);
    j["seed"] = extra.seed;
    json terms = json::array();
    for (const ExtraTerm& t : extra.terms) {
        terms.push_back({{"var_a", t.var_a},
                         {"var_b", t.var_b},
                         {"basis_labels", labels},
                         {"coeffs", t.coeffs}});
    }
    j["terms"] = terms;
    return j.dump(2) + "\n";
}

ExtraHamiltonian extra_from_json(const std::string& text) {
    const json j = parse(text, "extra Hamiltonian");
    check_version(j, "extra Hamiltonian");
    ExtraHamiltonian extra;
    extra.category = extra_category_from_string(j.at("category").get<std::string>());
    extra.seed = j.at("seed").get<std::uint64_t>();
    const auto& labels = category_basis(extra.category);
    for (const json& t : j.at("terms")) {
        if (t.at("basis_labels").get<std::vector<std::string>>() != labels)
            throw IoError("extra Hamiltonian: basis labels do not match the category");
        std::vector<double> coeffs = t.at("coeffs").get<std::vector<double>>();
        if (coeffs.size() != labels.size())
            throw IoError("extra Hamiltonian: coefficient count mismatch");
        extra.terms.push_back(make_extra_term(t.at("var_a").get<int>(),
                                              t.at("var_b").get<int>(), labels,
                                              std::move(coeffs)));
    }
    return extra;
}

void save_extra(const ExtraHamiltonian& extra, const std::filesystem::path& path) {
    write_file(path, extra_to_json(extra));
}

ExtraHamiltonian load_extra(const std::filesystem::path& path) {
    return extra_from_json(read_file(path));
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& rows,
                          const std::string& manifest_ref) {
    if (!manifest_ref.empty()) out << manifest_comment(manifest_ref);
    out << "t,s,energy_expectation,overlap_ground,overlap_first_excited,norm\n";
    for (const TrajectorySample& r : rows) {
        out << format_g12(r.t) << ',' << format_g12(r.s) << ',' << format_g12(r.energy)
            << ',' << format_g12(r.overlap_ground) << ','
            << format_g12(r.overlap_first_excited) << ',' << format_g12(r.norm) << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const GapProfile& profile,
                        const std::string& manifest_ref) {
    if (!manifest_ref.empty()) out << manifest_comment(manifest_ref);
    const std::size_t k = profile.slices.empty() ? 0 : profile.slices[0].eigenvalues.size();
    out << "s";
    for (std::size_t j = 0; j < k; ++j) out << ",lambda" << j;
    out << '\n';
    for (const SpectrumSlice& slice : profile.slices) {
        out << format_g12(slice.s);
        for (double v : slice.eigenvalues) out << ',' << format_g12(v);
        out << '\n';
    }
}

std::string gap_summary_json(const GapProfile& profile) {
    json j;
    j["g_min"] = profile.g_min;
    j["s_at_min"] = profile.s_at_min;
    j["grid_points"] = profile.grid_points;
    j["refine_iters"] = profile.refine_iters;
    return j.dump(2) + "\n";
}

} // namespace qaa
