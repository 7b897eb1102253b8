#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qaa/evolution.hpp"
#include "qaa/instance.hpp"
#include "qaa/serialize.hpp"

#ifndef QAA_CLI_PATH
#error "QAA_CLI_PATH must point at the qaa binary"
#endif

using namespace qaa;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path err_file = workdir / "stderr.txt";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + QAA_CLI_PATH + "' " + args +
                            " 2>'" + err_file.string() + "'";
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) result.out += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_file);
    std::ostringstream errbuf;
    errbuf << err.rdbuf();
    result.err = errbuf.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int count_data_rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::string line;
    int rows = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
        } else {
            ++rows;
        }
    }
    return rows;
}

} // namespace

TEST_CASE("generate is deterministic and certifies what it writes") {
    TempDir dir("qaa_cli_gen");
    const std::string flags = "generate --n 6 --m 18 --count 2 --seed 11 --out ";
    CHECK(run_cli(flags + "a", dir.path).exit_code == 0);
    CHECK(run_cli(flags + "b", dir.path).exit_code == 0);
    CHECK(slurp(dir.path / "a/instance_000000.json") ==
          slurp(dir.path / "b/instance_000000.json"));
    CHECK(slurp(dir.path / "a/generate_summary.csv") ==
          slurp(dir.path / "b/generate_summary.csv"));

    const Instance inst = load_instance(dir.path / "a/instance_000001.json");
    CHECK(inst.n == 6);
    CHECK(inst.clauses.size() == 18);
    CHECK(inst.optimum.has_value());
}

TEST_CASE("usage errors exit with code 2 and a parsable error class") {
    TempDir dir("qaa_cli_usage");
    const CliResult r = run_cli("generate --n 2 --m 5 --count 1 --out x", dir.path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("qaa-error: usage:") != std::string::npos);

    const CliResult unknown = run_cli("no-such-command", dir.path);
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("evolve at T=0 prints the 2^-n baseline") {
    TempDir dir("qaa_cli_t0");
    REQUIRE(run_cli("generate --n 5 --m 15 --count 1 --seed 3 --out g", dir.path).exit_code == 0);
    const CliResult ground = run_cli("evolve g/instance_000000.json --T 0", dir.path);
    CHECK(ground.exit_code == 0);
    CHECK(ground.out.find("P(T=0) = 0.03125\n") != std::string::npos);
    const CliResult excited = run_cli("evolve g/instance_000000.json --T 0 --init excited:0",
                                      dir.path);
    CHECK(excited.out.find("P(T=0) = 0.03125\n") != std::string::npos);
}

TEST_CASE("the CLI adds no arithmetic to the library evolution") {
    TempDir dir("qaa_cli_equiv");
    REQUIRE(run_cli("generate --n 3 --m 9 --count 1 --seed 21 --out g", dir.path).exit_code == 0);

    const CliResult r = run_cli("evolve g/instance_000000.json --T 4 --step 0.002", dir.path);
    REQUIRE(r.exit_code == 0);

    Instance inst = load_instance(dir.path / "g/instance_000000.json");
    const CostVector cost = build_cost_vector(inst);
    ScheduleSpec schedule;
    schedule.total_time = 4.0;
    const EvolutionResult res =
        evolve(schedule, cost, initial_state(3), {}, {}, inst.optimum->w);
    const std::string expected = "P(T=4) = " + format_g12(*res.success_probability) + "\n";
    CHECK(r.out.find(expected) != std::string::npos);
}

TEST_CASE("evolve instructs to certify when the optimum is missing") {
    TempDir dir("qaa_cli_uncert");
    const Instance inst = generate_instance(4, 12, 9);
    save_instance(inst, dir.path / "raw.json");
    const CliResult r = run_cli("evolve raw.json --T 1", dir.path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("certify") != std::string::npos);

    CHECK(run_cli("certify raw.json", dir.path).exit_code == 0);
    CHECK(run_cli("evolve raw.json --T 1 --step 0.01", dir.path).exit_code == 0);
}

TEST_CASE("sweep writes one row per grid point plus the summary") {
    TempDir dir("qaa_cli_sweep");
    REQUIRE(run_cli("generate --n 4 --m 12 --count 1 --seed 7 --out g", dir.path).exit_code == 0);
    const CliResult r = run_cli(
        "sweep g/instance_000000.json --grid 1,2,3 --t-ref 3 --step 0.01 --out s --label inst",
        dir.path);
    REQUIRE(r.exit_code == 0);
    CHECK(count_data_rows(dir.path / "s/sweep_inst.csv") == 3);
    CHECK(count_data_rows(dir.path / "s/sweep_inst_summary.csv") == 1);
    CHECK(fs::exists(dir.path / "s/sweep_inst.csv.manifest.json"));
}

TEST_CASE("pathchange --synthetic-successes exercises the chi plumbing") {
    TempDir dir("qaa_cli_chi");
    const CliResult r =
        run_cli("pathchange --synthetic-successes 1,0.5 --trials 2 --out p", dir.path);
    REQUIRE(r.exit_code == 0);
    const std::string summary = slurp(dir.path / "p/pathchange_synthetic_stoquastic_summary.csv");
    CHECK(summary.find("synthetic,stoquastic,2,") != std::string::npos);
    CHECK(summary.find(",0,1,0,") != std::string::npos); // chi=0, effective=1, best index 0
    CHECK(count_data_rows(dir.path / "p/pathchange_synthetic_stoquastic_trials.csv") == 2);

    // reruns are byte-identical
    REQUIRE(run_cli("pathchange --synthetic-successes 1,0.5 --trials 2 --out q", dir.path)
                .exit_code == 0);
    CHECK(slurp(dir.path / "p/pathchange_synthetic_stoquastic_trials.csv") ==
          slurp(dir.path / "q/pathchange_synthetic_stoquastic_trials.csv"));
}

TEST_CASE("report over an empty directory warns and exits 0") {
    TempDir dir("qaa_cli_report_empty");
    fs::create_directories(dir.path / "empty");
    const CliResult r = run_cli("report --in empty --out rep", dir.path);
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(!fs::exists(dir.path / "rep/fig01_success_histogram.csv"));
}

TEST_CASE("mine then report: fig01 lists exactly the simulated instances") {
    TempDir dir("qaa_cli_mine");
    const CliResult mine_run = run_cli(
        "mine --n 6 --m 18 --seed 5 --max-instances 10 --t-ref 5 --cutoff 0.5 --step 0.01 "
        "--mf-steps 1000 --out m",
        dir.path);
    REQUIRE(mine_run.exit_code == 0);

    int simulated = 0;
    {
        std::istringstream ledger(slurp(dir.path / "m/ledger.csv"));
        std::string line;
        bool header_done = false;
        while (std::getline(ledger, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header_done) {
                header_done = true;
                continue;
            }
            std::size_t commas = 0, last = 0;
            // p_tref is field 7 of 8
            std::string p;
            for (std::size_t i = 0; i <= line.size(); ++i) {
                if (i == line.size() || line[i] == ',') {
                    if (commas == 6) p = line.substr(last, i - last);
                    ++commas;
                    last = i + 1;
                }
            }
            if (!p.empty()) ++simulated;
        }
    }

    const CliResult rep = run_cli("report --in m --out m/report", dir.path);
    REQUIRE(rep.exit_code == 0);
    CHECK(count_data_rows(dir.path / "m/report/fig01_success_histogram.csv") == simulated);
}

TEST_CASE("spectrum emits the gap summary and evolve consumes extras") {
    TempDir dir("qaa_cli_spec");
    REQUIRE(run_cli("generate --n 4 --m 12 --count 1 --seed 2 --out g", dir.path).exit_code == 0);
    REQUIRE(run_cli("extra g/instance_000000.json --category complex --seed 8 --out e.json",
                    dir.path)
                .exit_code == 0);
    const CliResult spec = run_cli(
        "spectrum g/instance_000000.json --extra e.json --k 3 --grid 21 --refine 8 --out s "
        "--label x",
        dir.path);
    REQUIRE(spec.exit_code == 0);
    CHECK(count_data_rows(dir.path / "s/spectrum_x.csv") == 21);
    const std::string gap = slurp(dir.path / "s/gap_x.json");
    CHECK(gap.find("\"g_min\"") != std::string::npos);
    CHECK(gap.find("\"s_at_min\"") != std::string::npos);
    CHECK(gap.find("\"manifest\"") != std::string::npos);

    CHECK(run_cli("evolve g/instance_000000.json --T 2 --extra e.json --step 0.01", dir.path)
              .exit_code == 0);
}

TEST_CASE("missing input files map to the I/O exit code") {
    TempDir dir("qaa_cli_io");
    const CliResult r = run_cli("evolve does-not-exist.json --T 1", dir.path);
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("qaa-error: io:") != std::string::npos);
}
