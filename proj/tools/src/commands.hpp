#pragma once

#include <cstdint>
#include <string>

namespace qaacli {

struct GenerateOpts {
    int n = 12;
    int m = 36;
    int count = 1;
    std::uint64_t seed = 1;
    std::string out_dir;
};

struct CertifyOpts {
    std::string instance;
    std::string out; // empty: rewrite in place
};

struct EvolveOpts {
    std::string instance;
    double t = 100.0;
    std::string init = "ground"; // "ground" or "excited:<k>"
    std::string extra_file;
    bool trajectory = false;
    int samples = 201;
    bool overlaps = false;
    double step = 0.002;
    double tolerance = 1e-6;
    bool check_halving = false;
    std::string out_dir;
    std::string label;
};

struct SweepOpts {
    std::string instance;
    std::string grid = "1:40";
    double t_ref = 100.0;
    bool refine = false;
    double step = 0.002;
    std::string out_dir;
    std::string label;
};

struct ExcitedOpts {
    std::string instance;
    double t = 100.0;
    double step = 0.002;
    std::string out_dir;
    std::string label;
};

struct PathChangeOpts {
    std::string instance;
    std::string category = "all"; // stoquastic | complex | diagonal | all
    int trials = 25;
    double t = 100.0;
    std::uint64_t seed = 1;
    bool gaps = false;
    int gap_grid = 201;
    int gap_refine = 40;
    double step = 0.002;
    std::string synthetic; // testing hook: comma-separated successes, no evolution
    std::string out_dir;
    std::string label;
};

struct SpectrumOpts {
    std::string instance;
    std::string extra_file;
    int k = 3;
    int grid = 201;
    int refine = 40;
    double tol = 1e-8;
    std::string out_dir;
    std::string label;
};

struct ExtraOpts {
    std::string instance;
    std::string category = "stoquastic";
    std::uint64_t seed = 1;
    std::string out;
};

struct MeanfieldOpts {
    std::string instance;
    double t = 100.0;
    int steps = 20000;
    double threshold = 0.5;
    std::string out_dir;
    std::string label;
};

struct MineOpts {
    int n = 12;
    int m = 36;
    double t_ref = 100.0;
    double cutoff = 1e-4;
    double mf_threshold = 0.5;
    int mf_steps = 20000;
    std::uint64_t seed = 1;
    std::int64_t target = -1; // <0: no target, run to max_instances
    std::uint64_t max_instances = 1000;
    double step = 0.002;
    bool resume = false;
    std::string out_dir;
};

struct ReportOpts {
    std::string in_dir;
    std::string out_dir;
    bool plot_script = false;
};

void run_generate(const GenerateOpts& opts);
void run_certify(const CertifyOpts& opts);
void run_evolve(const EvolveOpts& opts);
void run_sweep(const SweepOpts& opts);
void run_excited(const ExcitedOpts& opts);
void run_pathchange(const PathChangeOpts& opts);
void run_spectrum(const SpectrumOpts& opts);
void run_extra(const ExtraOpts& opts);
void run_meanfield(const MeanfieldOpts& opts);
void run_mine(const MineOpts& opts);
void run_report(const ReportOpts& opts);

} // namespace qaacli
