#include "qaa/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qaa/errors.hpp"
#include "qaa/meanfield.hpp"
#include "qaa/rng.hpp"
#include "qaa/serialize.hpp"

namespace qaa {

namespace {

constexpr const char* kLedgerColumns = "index,seed,unique,multiplicity,mf_excess,mf_easy,p_tref,hard";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string opt_num(const std::optional<double>& v) {
    return v ? format_g12(*v) : std::string{};
}

std::string opt_flag(const std::optional<bool>& v) {
    return v ? std::string(*v ? "1" : "0") : std::string{};
}

std::filesystem::path hard_instance_path(const std::filesystem::path& dir,
                                         std::uint64_t index) {
    char name[40];
    std::snprintf(name, sizeof(name), "instance_%06" PRIu64 ".json", index);
    return dir / name;
}

} // namespace

std::string ledger_header(const MiningConfig& config) {
    std::ostringstream out;
    out << "# qaa mining ledger format_version=1\n";
    out << "# n=" << config.n << " m=" << config.m << " t_ref=" << format_g12(config.t_ref)
        << " hardness_cutoff=" << format_g12(config.hardness_cutoff)
        << " mf_threshold=" << format_g12(config.mf_threshold)
        << " mf_steps=" << config.mf_steps << " master_seed=" << config.master_seed
        << " base_step=" << format_g12(config.integrator.base_step) << "\n";
    out << kLedgerColumns << "\n";
    return out.str();
}

std::string ledger_row(const MiningRecord& r) {
    std::ostringstream out;
    out << r.index << ',' << r.seed << ',' << (r.unique ? '1' : '0') << ','
        << r.multiplicity << ',' << opt_num(r.mf_excess) << ',' << opt_flag(r.mf_easy)
        << ',' << opt_num(r.p_tref) << ',' << opt_flag(r.hard);
    return out.str();
}

MiningRecord ledger_row_parse(const std::string& line) {
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 8) throw IoError("mining ledger row must have 8 fields: " + line);
    MiningRecord r;
    r.index = std::stoull(f[0]);
    r.seed = std::stoull(f[1]);
    r.unique = f[2] == "1";
    r.multiplicity = std::stoull(f[3]);
    if (!f[4].empty()) r.mf_excess = std::stod(f[4]);
    if (!f[5].empty()) r.mf_easy = f[5] == "1";
    if (!f[6].empty()) r.p_tref = std::stod(f[6]);
    if (!f[7].empty()) r.hard = f[7] == "1";
    return r;
}

namespace {

/// Reads the complete-line prefix of an existing ledger, validating the
/// header against the config. A trailing partial line (from a killed run)
/// is dropped and the file truncated back to the valid prefix.
std::vector<MiningRecord> load_ledger_prefix(const std::filesystem::path& path,
                                             const MiningConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open ledger " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    in.close();

    const std::string expected_header = ledger_header(config);
    if (text.size() < expected_header.size() ||
        text.compare(0, expected_header.size(), expected_header) != 0)
        throw IoError("ledger " + path.string() +
                      " was produced with a different configuration; refusing to resume");

    std::vector<MiningRecord> records;
    std::size_t pos = expected_header.size();
    std::size_t valid_end = pos;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) break; // partial trailing line
        records.push_back(ledger_row_parse(text.substr(pos, nl - pos)));
        pos = nl + 1;
        valid_end = pos;
    }
    if (valid_end != text.size()) {
        std::ofstream rewrite(path, std::ios::binary | std::ios::trunc);
        if (!rewrite) throw IoError("cannot truncate ledger " + path.string());
        rewrite << text.substr(0, valid_end);
    }
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].index != i)
            throw IoError("ledger " + path.string() + " has non-contiguous indices");
    return records;
}

} // namespace

MiningOutcome mine(const MiningConfig& config, const MiningSinks& sinks) {
    if (config.hardness_cutoff <= 0.0 || config.hardness_cutoff >= 1.0)
        throw std::invalid_argument("mine: hardness cutoff must lie in (0, 1)");
    if (config.mf_threshold < 0.0)
        throw std::invalid_argument("mine: mean-field threshold must be >= 0");

    MiningOutcome outcome;
    const bool persist = !sinks.ledger_path.empty();
    std::ofstream ledger_out;

    if (persist && sinks.resume && std::filesystem::exists(sinks.ledger_path)) {
        outcome.ledger = load_ledger_prefix(sinks.ledger_path, config);
        ledger_out.open(sinks.ledger_path, std::ios::binary | std::ios::app);
    } else if (persist) {
        ledger_out.open(sinks.ledger_path, std::ios::binary | std::ios::trunc);
        if (ledger_out) ledger_out << ledger_header(config);
    }
    if (persist && !ledger_out)
        throw IoError("cannot write ledger " + sinks.ledger_path.string());
    if (!sinks.instance_dir.empty()) std::filesystem::create_directories(sinks.instance_dir);

    // replay the already-persisted prefix into the counters
    auto account = [&](const MiningRecord& r, const std::optional<Instance>& inst) {
        ++outcome.generated;
        if (!r.unique) {
            ++outcome.non_unique;
        } else if (r.mf_easy && *r.mf_easy) {
            ++outcome.filtered_easy;
        } else {
            ++outcome.simulated;
            if (r.hard && *r.hard) {
                ++outcome.hard_count;
                if (inst) outcome.hard_instances.push_back(*inst);
            }
        }
    };
    for (const MiningRecord& r : outcome.ledger) {
        std::optional<Instance> inst;
        if (r.hard && *r.hard) {
            // regenerate the retained instance; generation is seed-pure
            Instance regen = generate_instance(config.n, config.m, r.seed);
            certify_optimum(regen);
            if (!sinks.instance_dir.empty() &&
                !std::filesystem::exists(hard_instance_path(sinks.instance_dir, r.index)))
                save_instance(regen, hard_instance_path(sinks.instance_dir, r.index));
            inst = std::move(regen);
        }
        account(r, inst);
    }

    for (std::uint64_t index = outcome.generated; index < config.max_instances; ++index) {
        if (config.target_count && outcome.hard_count >= *config.target_count) break;

        MiningRecord record;
        record.index = index;
        record.seed = derive_stream_seed(config.master_seed, index);

        Instance inst = generate_instance(config.n, config.m, record.seed);
        const Optimum opt = certify_optimum(inst);
        record.multiplicity = opt.multiplicity;
        record.unique = opt.multiplicity == 1;

        std::optional<Instance> hard_inst;
        if (record.unique) {
            const MeanFieldResult mf =
                meanfield_evolve(inst, config.t_ref, config.mf_steps, config.mf_threshold);
            record.mf_excess = mf.excess;
            record.mf_easy = mf.passed_filter;
            if (!mf.passed_filter) {
                const CostVector cost = build_cost_vector(inst);
                ScheduleSpec schedule;
                schedule.total_time = config.t_ref;
                const EvolutionResult res = evolve(schedule, cost, initial_state(inst.n),
                                                   config.integrator, {}, opt.w);
                record.p_tref = res.success_probability;
                record.hard = *record.p_tref < config.hardness_cutoff;
                if (*record.hard) {
                    if (!sinks.instance_dir.empty())
                        save_instance(inst, hard_instance_path(sinks.instance_dir, index));
                    hard_inst = std::move(inst);
                }
            }
        }

        account(record, hard_inst);
        if (sinks.on_record) sinks.on_record(record);
        outcome.ledger.push_back(record);
        if (persist) {
            ledger_out << ledger_row(record) << '\n';
            ledger_out.flush();
            if (!ledger_out)
                throw IoError("ledger write failed at index " + std::to_string(index) +
                              "; rerun with resume to continue from the persisted prefix");
        }
    }
    return outcome;
}

std::vector<double> success_histogram(const std::vector<MiningRecord>& ledger) {
    std::vector<double> values;
    for (const MiningRecord& r : ledger)
        if (r.p_tref) values.push_back(*r.p_tref);
    return values;
}

} // namespace qaa
