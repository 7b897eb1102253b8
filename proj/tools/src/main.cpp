#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "commands.hpp"
#include "common.hpp"
#include "qaa/errors.hpp"

namespace {

constexpr const char* kFigureSchemas = R"(Report output schemas (one data file per figure):
  fig01_success_histogram.csv  p_tref                          raw P(T_ref) values of all simulated instances (success-probability distribution)
  fig02_sweep.csv              label,t,p                       success probability vs total evolution time
  fig03_spectrum.csv           label,s,lambda0,lambda1,lambda2 lowest three energy levels vs s (with or without a path change)
  fig04_energy.csv             label,t,s,energy_expectation    instantaneous energy expectation along the evolution
  fig05_overlaps.csv           label,t,s,overlap_ground,overlap_first_excited
                                                               overlap with the two lowest instantaneous eigenstates
  fig06_tmax_values.csv        label,t_max                     raw T_max values for histogramming
  fig07_improvement_tmax.csv   label,p_tref,p_tmax             scatter P(T_max) vs P(T_ref)
  fig08_excited.csv            label,average,maximum           excited-state initialization: per-instance mean and best success
  fig09_improvement_t10.csv    label,p_tref,p_t10              scatter P(10) vs P(T_ref)
  fig10_pathchange_successes.csv label,category,trial_index,success  raw per-trial successes
  fig11_pathchange_max.csv     label,category,max_success      best trial per instance and category
  fig12_pathchange_effective.csv label,category,chi,effective_success  1 - chi per instance and category
  fig13_gap_vs_success.csv     label,category,selector,success,g_min  minimum gap vs success (best and random trials)

Binning is left to plotting; pass --plot-script for a ready-to-run matplotlib script.)";

int error_exit(const char* cls, const std::string& message, int code) {
    std::cerr << "qaa-error: " << cls << ": " << message << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qaa - quantum adiabatic algorithm simulator for MAX 2-SAT\n"
                 "Simulates Schrodinger evolution of the interpolating Hamiltonian, mines\n"
                 "hard instances, and runs the shortened-time / excited-start / path-change\n"
                 "strategies. Exit codes: 0 ok, 2 usage, 3 numerical, 4 I/O."};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "Worker threads for state-vector kernels (0 = default)");

    qaacli::GenerateOpts gen;
    auto* c_gen = app.add_subcommand("generate", "Generate and certify random MAX 2-SAT instances");
    c_gen->add_option("--n", gen.n, "Bit count")->capture_default_str();
    c_gen->add_option("--m", gen.m, "Clause count")->capture_default_str();
    c_gen->add_option("--count", gen.count, "Number of instances")->capture_default_str();
    c_gen->add_option("--seed", gen.seed, "Master seed (instance i uses child stream i)")
        ->capture_default_str();
    c_gen->add_option("--out", gen.out_dir, "Output directory (default $QAA_OUT_DIR or .)");

    qaacli::CertifyOpts cert;
    auto* c_cert = app.add_subcommand("certify", "Brute-force certify the optimal assignment");
    c_cert->add_option("instance", cert.instance, "Instance file")->required();
    c_cert->add_option("--out", cert.out, "Write to this path instead of in place");

    qaacli::EvolveOpts evo;
    auto* c_evo = app.add_subcommand("evolve", "Integrate the Schrodinger evolution, print P(T)");
    c_evo->add_option("instance", evo.instance, "Instance file (must be certified)")->required();
    c_evo->add_option("--T", evo.t, "Total evolution time")->capture_default_str();
    c_evo->add_option("--init", evo.init, "Initial state: ground | excited:<k>")
        ->capture_default_str();
    c_evo->add_option("--extra", evo.extra_file, "Path-change Hamiltonian file");
    c_evo->add_flag("--trajectory", evo.trajectory, "Record the s-grid trajectory");
    c_evo->add_option("--samples", evo.samples, "Trajectory samples")->capture_default_str();
    c_evo->add_flag("--overlaps", evo.overlaps,
                    "Track overlaps with the two lowest instantaneous eigenstates");
    c_evo->add_option("--step", evo.step, "Integrator base step")->capture_default_str();
    c_evo->add_option("--tolerance", evo.tolerance, "Step-halving tolerance")
        ->capture_default_str();
    c_evo->add_flag("--check-halving", evo.check_halving,
                    "Re-integrate at half step and verify |dP| < tolerance");
    c_evo->add_option("--out", evo.out_dir, "Output directory for the trajectory");
    c_evo->add_option("--label", evo.label, "Output label (default: instance file stem)");

    qaacli::SweepOpts sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Success probability over a grid of total times");
    c_sweep->add_option("instance", sweep.instance, "Instance file (certified)")->required();
    c_sweep->add_option("--grid", sweep.grid, "T grid: 'lo:hi' integers or comma list")
        ->capture_default_str();
    c_sweep->add_option("--t-ref", sweep.t_ref, "Reference time for the improvement ratio")
        ->capture_default_str();
    c_sweep->add_flag("--refine", sweep.refine, "3 rounds of local bisection around the argmax");
    c_sweep->add_option("--step", sweep.step, "Integrator base step")->capture_default_str();
    c_sweep->add_option("--out", sweep.out_dir, "Output directory");
    c_sweep->add_option("--label", sweep.label, "Output label");

    qaacli::ExcitedOpts exc;
    auto* c_exc = app.add_subcommand("excited", "Evolve from each first excited state of H_B");
    c_exc->add_option("instance", exc.instance, "Instance file (certified)")->required();
    c_exc->add_option("--T", exc.t, "Total evolution time")->capture_default_str();
    c_exc->add_option("--step", exc.step, "Integrator base step")->capture_default_str();
    c_exc->add_option("--out", exc.out_dir, "Output directory");
    c_exc->add_option("--label", exc.label, "Output label");

    qaacli::PathChangeOpts pc;
    auto* c_pc = app.add_subcommand("pathchange", "Random path-change trial campaigns");
    c_pc->add_option("instance", pc.instance, "Instance file (certified)");
    c_pc->add_option("--category", pc.category, "stoquastic | complex | diagonal | all")
        ->capture_default_str();
    c_pc->add_option("--trials", pc.trials, "Trials per category")->capture_default_str();
    c_pc->add_option("--T", pc.t, "Total evolution time")->capture_default_str();
    c_pc->add_option("--seed", pc.seed, "Campaign master seed")->capture_default_str();
    c_pc->add_flag("--gaps", pc.gaps, "Compute g_min for the best and a random trial");
    c_pc->add_option("--gap-grid", pc.gap_grid, "Gap scan grid points")->capture_default_str();
    c_pc->add_option("--gap-refine", pc.gap_refine, "Gap refinement iterations")
        ->capture_default_str();
    c_pc->add_option("--step", pc.step, "Integrator base step")->capture_default_str();
    c_pc->add_option("--synthetic-successes", pc.synthetic,
                     "Testing hook: comma-separated successes; skips evolution and only "
                     "exercises the chi statistic and report plumbing");
    c_pc->add_option("--out", pc.out_dir, "Output directory");
    c_pc->add_option("--label", pc.label, "Output label");

    qaacli::SpectrumOpts spec;
    auto* c_spec = app.add_subcommand("spectrum", "Lowest energy levels over s and minimum gap");
    c_spec->add_option("instance", spec.instance, "Instance file")->required();
    c_spec->add_option("--extra", spec.extra_file, "Path-change Hamiltonian file");
    c_spec->add_option("--k", spec.k, "Number of levels")->capture_default_str();
    c_spec->add_option("--grid", spec.grid, "Uniform s-grid points")->capture_default_str();
    c_spec->add_option("--refine", spec.refine, "Golden-section refinement iterations")
        ->capture_default_str();
    c_spec->add_option("--tol", spec.tol, "Eigensolver residual tolerance")
        ->capture_default_str();
    c_spec->add_option("--out", spec.out_dir, "Output directory");
    c_spec->add_option("--label", spec.label, "Output label");

    qaacli::ExtraOpts extra;
    auto* c_extra = app.add_subcommand("extra", "Sample a path-change Hamiltonian to a file");
    c_extra->add_option("instance", extra.instance, "Instance file (defines the interaction graph)")
        ->required();
    c_extra->add_option("--category", extra.category, "stoquastic | complex | diagonal")
        ->capture_default_str();
    c_extra->add_option("--seed", extra.seed, "Sampling seed")->capture_default_str();
    c_extra->add_option("--out", extra.out, "Output file");

    qaacli::MeanfieldOpts mf;
    auto* c_mf = app.add_subcommand("meanfield", "Mean-field approximation and filter verdict");
    c_mf->add_option("instance", mf.instance, "Instance file")->required();
    c_mf->add_option("--T", mf.t, "Total evolution time")->capture_default_str();
    c_mf->add_option("--steps", mf.steps, "Integration steps")->capture_default_str();
    c_mf->add_option("--threshold", mf.threshold, "Filter threshold on the excess (inclusive)")
        ->capture_default_str();
    c_mf->add_option("--out", mf.out_dir, "Output directory");
    c_mf->add_option("--label", mf.label, "Output label");

    qaacli::MineOpts mine;
    auto* c_mine = app.add_subcommand(
        "mine", "Hard-instance mining: generate, certify, filter, simulate, retain");
    c_mine->add_option("--n", mine.n, "Bit count")->capture_default_str();
    c_mine->add_option("--m", mine.m, "Clause count")->capture_default_str();
    c_mine->add_option("--t-ref", mine.t_ref, "Reference evolution time")->capture_default_str();
    c_mine->add_option("--cutoff", mine.cutoff, "Retain P(T_ref) strictly below this")
        ->capture_default_str();
    c_mine->add_option("--mf-threshold", mine.mf_threshold, "Mean-field filter threshold")
        ->capture_default_str();
    c_mine->add_option("--mf-steps", mine.mf_steps, "Mean-field steps")->capture_default_str();
    c_mine->add_option("--seed", mine.seed, "Master seed")->capture_default_str();
    c_mine->add_option("--target", mine.target, "Stop after this many hard instances (-1: off)")
        ->capture_default_str();
    c_mine->add_option("--max-instances", mine.max_instances, "Generation cap")
        ->capture_default_str();
    c_mine->add_option("--step", mine.step, "Integrator base step")->capture_default_str();
    c_mine->add_flag("--resume", mine.resume, "Continue from an existing ledger prefix");
    c_mine->add_option("--out", mine.out_dir, "Output directory")->required();

    qaacli::ReportOpts rep;
    auto* c_rep = app.add_subcommand("report", "Aggregate run outputs into per-figure data files");
    c_rep->footer(kFigureSchemas);
    c_rep->add_option("--in", rep.in_dir, "Directory holding command outputs")->required();
    c_rep->add_option("--out", rep.out_dir, "Report directory (default <in>/report)");
    c_rep->add_flag("--plot-script", rep.plot_script, "Also emit plot_figures.py");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return error_exit("usage", e.what(), 2);
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*c_gen) qaacli::run_generate(gen);
        if (*c_cert) qaacli::run_certify(cert);
        if (*c_evo) qaacli::run_evolve(evo);
        if (*c_sweep) qaacli::run_sweep(sweep);
        if (*c_exc) qaacli::run_excited(exc);
        if (*c_pc) qaacli::run_pathchange(pc);
        if (*c_spec) qaacli::run_spectrum(spec);
        if (*c_extra) qaacli::run_extra(extra);
        if (*c_mf) qaacli::run_meanfield(mf);
        if (*c_mine) qaacli::run_mine(mine);
        if (*c_rep) qaacli::run_report(rep);
    } catch (const qaa::ResourceError& e) {
        return error_exit("resource", e.what(), 3);
    } catch (const qaa::ConvergenceError& e) {
        return error_exit("numerical", e.what(), 3);
    } catch (const qaa::IntegrationError& e) {
        return error_exit("numerical", e.what(), 3);
    } catch (const qaa::IoError& e) {
        return error_exit("io", e.what(), 4);
    } catch (const std::filesystem::filesystem_error& e) {
        return error_exit("io", e.what(), 4);
    } catch (const std::invalid_argument& e) {
        return error_exit("usage", e.what(), 2);
    } catch (const std::exception& e) {
        return error_exit("internal", e.what(), 3);
    }
    return 0;
}
