#include "commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "common.hpp"
#include "qaa/errors.hpp"
#include "qaa/meanfield.hpp"
#include "qaa/pipeline.hpp"
#include "qaa/rng.hpp"
#include "qaa/serialize.hpp"
#include "qaa/spectrum.hpp"
#include "qaa/strategies.hpp"

namespace qaacli {

namespace fs = std::filesystem;
using namespace qaa;

namespace {

Instance load_certified(const fs::path& path) {
    Instance inst = load_instance(path);
    if (!inst.optimum)
        throw std::invalid_argument("instance " + path.string() +
                                    " has no certified optimum; run `qaa certify` first");
    return inst;
}

fs::path resolve_dir(const std::string& out_dir) {
    const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
    fs::create_directories(dir);
    return dir;
}

IntegratorConfig integrator_with_step(double step, double tolerance = 1e-6,
                                      bool check_halving = false) {
    IntegratorConfig config;
    config.base_step = step;
    config.tolerance = tolerance;
    config.check_step_halving = check_halving;
    return config;
}

std::string csv_joined(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    return line;
}

} // namespace

void run_generate(const GenerateOpts& opts) {
    const fs::path dir = resolve_dir(opts.out_dir);
    Manifest manifest("generate", opts.seed);
    manifest.config("n", opts.n);
    manifest.config("m", opts.m);
    manifest.config("count", opts.count);

    const fs::path summary_path = dir / "generate_summary.csv";
    const std::string ref = Manifest::ref_for(summary_path);

    int unique = 0;
    std::ostringstream summary;
    summary << manifest_comment(ref);
    summary << "index,seed,file,cost_min,multiplicity,unique\n";
    for (int i = 0; i < opts.count; ++i) {
        const std::uint64_t child = derive_stream_seed(opts.seed, static_cast<std::uint64_t>(i));
        Instance inst = generate_instance(opts.n, opts.m, child);
        const Optimum opt = certify_optimum(inst);
        char name[48];
        std::snprintf(name, sizeof(name), "instance_%06d.json", i);
        const fs::path file = dir / name;
        write_text_file(file, json_with_manifest(instance_to_json(inst), ref));
        manifest.output(file);
        if (opt.multiplicity == 1) ++unique;
        summary << i << ',' << child << ',' << name << ',' << format_g12(opt.cost_min) << ','
                << opt.multiplicity << ',' << (opt.multiplicity == 1 ? 1 : 0) << '\n';
    }
    write_text_file(summary_path, summary.str());
    manifest.output(summary_path);
    manifest.write(summary_path);

    std::cout << "generated=" << opts.count << " unique=" << unique << " unique_fraction="
              << format_g12(opts.count > 0 ? static_cast<double>(unique) / opts.count : 0.0)
              << "\n";
}

void run_certify(const CertifyOpts& opts) {
    Instance inst = load_instance(opts.instance);
    const Optimum opt = certify_optimum(inst);
    const fs::path out = opts.out.empty() ? fs::path(opts.instance) : fs::path(opts.out);
    save_instance(inst, out);
    std::cout << "w=" << format_bits(opt.w, inst.n) << " cost_min=" << format_g12(opt.cost_min)
              << " multiplicity=" << opt.multiplicity << "\n";
}

void run_evolve(const EvolveOpts& opts) {
    const Instance inst = load_certified(opts.instance);
    const CostVector cost = build_cost_vector(inst);

    ScheduleSpec schedule;
    schedule.total_time = opts.t;
    if (!opts.extra_file.empty()) schedule.extra = load_extra(opts.extra_file);

    StateVector initial;
    if (opts.init == "ground") {
        initial = initial_state(inst.n);
    } else if (opts.init.rfind("excited:", 0) == 0) {
        initial = excited_state(inst.n, std::stoi(opts.init.substr(8)));
    } else {
        throw std::invalid_argument("--init must be 'ground' or 'excited:<k>'");
    }

    ObservationPlan plan;
    if (opts.trajectory) {
        plan.samples = opts.samples;
        plan.overlaps = opts.overlaps;
    }

    const IntegratorConfig config =
        integrator_with_step(opts.step, opts.tolerance, opts.check_halving);
    const EvolutionResult result =
        evolve(schedule, cost, initial, config, plan, inst.optimum->w);

    std::cout << "P(T=" << format_g12(opts.t) << ") = "
              << format_g12(*result.success_probability) << "\n";
    std::cout << "norm_drift = " << format_g12(result.final_norm_drift)
              << " steps = " << result.steps << "\n";

    if (opts.trajectory) {
        const fs::path dir = resolve_dir(opts.out_dir);
        const std::string label =
            opts.label.empty() ? label_from_path(opts.instance) : opts.label;
        const fs::path out = dir / ("trajectory_" + label + ".csv");
        Manifest manifest("evolve", 0);
        manifest.config("T", opts.t);
        manifest.config("init", opts.init);
        manifest.config("base_step", opts.step);
        manifest.config("samples", opts.samples);
        manifest.config("overlaps", opts.overlaps);
        manifest.input(opts.instance);
        if (!opts.extra_file.empty()) manifest.input(opts.extra_file);
        std::ostringstream body;
        write_trajectory_csv(body, result.trajectory, Manifest::ref_for(out));
        write_text_file(out, body.str());
        manifest.output(out);
        manifest.write(out);
        std::cout << "trajectory -> " << out.string() << "\n";
    }
}

void run_sweep(const SweepOpts& opts) {
    const Instance inst = load_certified(opts.instance);
    const std::vector<double> grid = parse_grid(opts.grid);
    const fs::path dir = resolve_dir(opts.out_dir);
    const std::string label = opts.label.empty() ? label_from_path(opts.instance) : opts.label;

    Manifest manifest("sweep", 0);
    manifest.config("grid", opts.grid);
    manifest.config("t_ref", opts.t_ref);
    manifest.config("refine", opts.refine);
    manifest.config("base_step", opts.step);
    manifest.input(opts.instance);

    const SweepResult result =
        sweep_total_time(inst, grid, integrator_with_step(opts.step), opts.refine, opts.t_ref);

    const fs::path detail_path = dir / ("sweep_" + label + ".csv");
    const fs::path summary_path = dir / ("sweep_" + label + "_summary.csv");
    const std::string ref = Manifest::ref_for(detail_path);

    std::ostringstream detail;
    detail << manifest_comment(ref) << "t,p\n";
    for (const SweepPoint& p : result.grid)
        detail << format_g12(p.t) << ',' << format_g12(p.p) << '\n';
    write_text_file(detail_path, detail.str());

    // P(10) columns are filled only when T=10 is on the grid
    std::string p10;
    std::string imp10;
    for (const SweepPoint& p : result.grid) {
        if (p.t == 10.0) {
            p10 = format_g12(p.p);
            imp10 = format_g12(p.p / result.p_at_tref);
        }
    }
    std::ostringstream summary;
    summary << manifest_comment(ref)
            << "label,t_max,p_at_tmax,t_ref,p_at_tref,improvement_tmax,p_at_t10,"
               "improvement_t10\n";
    summary << csv_joined({label, format_g12(result.t_max), format_g12(result.p_at_tmax),
                           format_g12(result.t_ref), format_g12(result.p_at_tref),
                           format_g12(result.improvement_vs_ref), p10, imp10})
            << '\n';
    write_text_file(summary_path, summary.str());

    manifest.output(detail_path);
    manifest.output(summary_path);
    manifest.write(detail_path);
    std::cout << "T_max=" << format_g12(result.t_max)
              << " P(T_max)=" << format_g12(result.p_at_tmax)
              << " P(T_ref)=" << format_g12(result.p_at_tref)
              << " improvement=" << format_g12(result.improvement_vs_ref) << "\n";
}

void run_excited(const ExcitedOpts& opts) {
    const Instance inst = load_certified(opts.instance);
    const fs::path dir = resolve_dir(opts.out_dir);
    const std::string label = opts.label.empty() ? label_from_path(opts.instance) : opts.label;

    Manifest manifest("excited", 0);
    manifest.config("T", opts.t);
    manifest.config("base_step", opts.step);
    manifest.input(opts.instance);

    const ExcitedScanResult result = excited_scan(inst, opts.t, integrator_with_step(opts.step));

    const fs::path detail_path = dir / ("excited_" + label + ".csv");
    const fs::path summary_path = dir / ("excited_" + label + "_summary.csv");
    const std::string ref = Manifest::ref_for(detail_path);

    std::ostringstream detail;
    detail << manifest_comment(ref) << "k,p\n";
    for (std::size_t k = 0; k < result.per_qubit.size(); ++k)
        detail << k << ',' << format_g12(result.per_qubit[k]) << '\n';
    write_text_file(detail_path, detail.str());

    std::ostringstream summary;
    summary << manifest_comment(ref) << "label,n,t,average,maximum\n";
    summary << csv_joined({label, std::to_string(inst.n), format_g12(opts.t),
                           format_g12(result.average), format_g12(result.maximum)})
            << '\n';
    write_text_file(summary_path, summary.str());

    manifest.output(detail_path);
    manifest.output(summary_path);
    manifest.write(detail_path);
    std::cout << "average=" << format_g12(result.average)
              << " maximum=" << format_g12(result.maximum) << "\n";
}

namespace {

void write_campaign_files(const PathChangeCampaign& campaign, const fs::path& dir,
                          Manifest& manifest) {
    const std::string stem =
        "pathchange_" + campaign.instance_label + "_" + to_string(campaign.category);
    const fs::path trials_path = dir / (stem + "_trials.csv");
    const fs::path summary_path = dir / (stem + "_summary.csv");
    const std::string ref = Manifest::ref_for(trials_path);

    std::ostringstream trials;
    trials << manifest_comment(ref) << "trial_index,seed,success,g_min,s_at_min\n";
    for (std::size_t i = 0; i < campaign.trials.size(); ++i) {
        const PathChangeTrial& t = campaign.trials[i];
        trials << i << ',' << t.seed << ',' << format_g12(t.success) << ','
               << (t.g_min ? format_g12(*t.g_min) : "") << ','
               << (t.s_at_min ? format_g12(*t.s_at_min) : "") << '\n';
    }
    write_text_file(trials_path, trials.str());

    const PathChangeTrial& best = campaign.trials[campaign.best_trial];
    std::ostringstream summary;
    summary << manifest_comment(ref)
            << "label,category,trials,t,master_seed,chi,effective_success,best_trial_index,"
               "best_trial_seed,best_success,random_trial_index\n";
    summary << csv_joined(
                   {campaign.instance_label, to_string(campaign.category),
                    std::to_string(campaign.trials.size()), format_g12(campaign.total_time),
                    std::to_string(campaign.master_seed), format_g12(campaign.chi),
                    format_g12(campaign.effective_success),
                    std::to_string(campaign.best_trial), std::to_string(best.seed),
                    format_g12(best.success),
                    campaign.random_trial ? std::to_string(*campaign.random_trial) : ""})
            << '\n';
    write_text_file(summary_path, summary.str());

    manifest.output(trials_path);
    manifest.output(summary_path);
    std::cout << campaign.instance_label << " " << to_string(campaign.category)
              << ": chi=" << format_g12(campaign.chi)
              << " effective_success=" << format_g12(campaign.effective_success)
              << " best=" << format_g12(best.success) << "\n";
}

} // namespace

void run_pathchange(const PathChangeOpts& opts) {
    const fs::path dir = resolve_dir(opts.out_dir);
    Manifest manifest("pathchange", opts.seed);
    manifest.config("category", opts.category);
    manifest.config("trials", opts.trials);
    manifest.config("T", opts.t);
    manifest.config("gaps", opts.gaps);
    manifest.config("base_step", opts.step);

    // testing hook: compute the summary statistics from given successes
    if (!opts.synthetic.empty()) {
        const std::vector<double> successes = parse_grid(opts.synthetic);
        PathChangeCampaign campaign;
        campaign.instance_label = opts.label.empty() ? "synthetic" : opts.label;
        campaign.category = extra_category_from_string(
            opts.category == "all" ? "stoquastic" : opts.category);
        campaign.master_seed = opts.seed;
        campaign.total_time = opts.t;
        for (std::size_t i = 0; i < successes.size(); ++i) {
            PathChangeTrial trial;
            trial.seed = derive_stream_seed(opts.seed, i);
            trial.success = successes[i];
            campaign.trials.push_back(trial);
            if (successes[i] > campaign.trials[campaign.best_trial].success)
                campaign.best_trial = i;
        }
        campaign.chi = chi_statistic(successes);
        campaign.effective_success = 1.0 - campaign.chi;
        write_campaign_files(campaign, dir, manifest);
        manifest.write(dir / ("pathchange_" + campaign.instance_label + "_" +
                              to_string(campaign.category) + "_trials.csv"));
        return;
    }

    const Instance inst = load_certified(opts.instance);
    manifest.input(opts.instance);
    const std::string label = opts.label.empty() ? label_from_path(opts.instance) : opts.label;

    std::vector<ExtraCategory> categories;
    if (opts.category == "all") {
        categories = {ExtraCategory::Stoquastic, ExtraCategory::Complex,
                      ExtraCategory::Diagonal};
    } else {
        categories = {extra_category_from_string(opts.category)};
    }

    fs::path primary;
    for (ExtraCategory category : categories) {
        // independent seeds per category so "all" matches three single runs
        const std::uint64_t seed =
            derive_stream_seed(opts.seed, static_cast<std::uint64_t>(category));
        const PathChangeCampaign campaign = path_change_campaign(
            inst, category, opts.trials, opts.t, seed, integrator_with_step(opts.step),
            opts.gaps, opts.gap_grid, opts.gap_refine, label);
        write_campaign_files(campaign, dir, manifest);
        if (primary.empty())
            primary = dir / ("pathchange_" + label + "_" + to_string(category) + "_trials.csv");
    }
    manifest.write(primary);
}

void run_spectrum(const SpectrumOpts& opts) {
    const Instance inst = load_instance(opts.instance);
    const CostVector cost = build_cost_vector(inst);
    const fs::path dir = resolve_dir(opts.out_dir);
    const std::string label = opts.label.empty() ? label_from_path(opts.instance) : opts.label;

    ScheduleSpec schedule;
    schedule.total_time = 1.0; // spectra are parametrized by s, not t
    Manifest manifest("spectrum", 0);
    manifest.config("k", opts.k);
    manifest.config("grid", opts.grid);
    manifest.config("refine_iters", opts.refine);
    manifest.config("tol", opts.tol);
    manifest.input(opts.instance);
    if (!opts.extra_file.empty()) {
        schedule.extra = load_extra(opts.extra_file);
        manifest.input(opts.extra_file);
    }

    const GapProfile profile =
        gap_scan(schedule, cost, opts.grid, opts.refine, opts.k, opts.tol);

    const fs::path csv_path = dir / ("spectrum_" + label + ".csv");
    const fs::path gap_path = dir / ("gap_" + label + ".json");
    std::ostringstream body;
    write_spectrum_csv(body, profile, Manifest::ref_for(csv_path));
    write_text_file(csv_path, body.str());
    write_text_file(gap_path, json_with_manifest(gap_summary_json(profile),
                                                 Manifest::ref_for(csv_path)));

    manifest.output(csv_path);
    manifest.output(gap_path);
    manifest.write(csv_path);
    std::cout << "g_min=" << format_g12(profile.g_min)
              << " s_at_min=" << format_g12(profile.s_at_min) << "\n";
}

void run_extra(const ExtraOpts& opts) {
    const Instance inst = load_instance(opts.instance);
    const ExtraHamiltonian extra =
        sample_extra(inst, extra_category_from_string(opts.category), opts.seed);
    const fs::path out = opts.out.empty()
                             ? default_out_dir() / ("extra_" + opts.category + ".json")
                             : fs::path(opts.out);
    save_extra(extra, out);
    std::cout << "terms=" << extra.terms.size() << " -> " << out.string() << "\n";
}

void run_meanfield(const MeanfieldOpts& opts) {
    Instance inst = load_instance(opts.instance);
    if (!inst.optimum) certify_optimum(inst);
    const MeanFieldResult result = meanfield_evolve(inst, opts.t, opts.steps, opts.threshold);

    const fs::path dir = resolve_dir(opts.out_dir);
    const std::string label = opts.label.empty() ? label_from_path(opts.instance) : opts.label;
    const fs::path out = dir / ("meanfield_" + label + ".csv");

    Manifest manifest("meanfield", 0);
    manifest.config("T", opts.t);
    manifest.config("steps", opts.steps);
    manifest.config("threshold", opts.threshold);
    manifest.input(opts.instance);

    const std::string row = csv_joined({label, format_g12(result.final_energy),
                                        format_g12(inst.optimum->cost_min),
                                        format_g12(result.excess),
                                        result.passed_filter ? "1" : "0"});
    std::ostringstream body;
    body << manifest_comment(Manifest::ref_for(out))
         << "instance,final_energy,cost_min,excess,passed_filter\n"
         << row << '\n';
    write_text_file(out, body.str());
    manifest.output(out);
    manifest.write(out);
    std::cout << row << "\n";
}

void run_mine(const MineOpts& opts) {
    const fs::path dir = resolve_dir(opts.out_dir);
    MiningConfig config;
    config.n = opts.n;
    config.m = opts.m;
    config.t_ref = opts.t_ref;
    config.hardness_cutoff = opts.cutoff;
    config.mf_threshold = opts.mf_threshold;
    config.mf_steps = opts.mf_steps;
    config.master_seed = opts.seed;
    if (opts.target >= 0) config.target_count = static_cast<std::uint64_t>(opts.target);
    config.max_instances = opts.max_instances;
    config.integrator = integrator_with_step(opts.step);

    MiningSinks sinks;
    sinks.ledger_path = dir / "ledger.csv";
    sinks.instance_dir = dir / "instances";
    sinks.resume = opts.resume;

    Manifest manifest("mine", opts.seed);
    manifest.config("n", opts.n);
    manifest.config("m", opts.m);
    manifest.config("t_ref", opts.t_ref);
    manifest.config("hardness_cutoff", opts.cutoff);
    manifest.config("mf_threshold", opts.mf_threshold);
    manifest.config("mf_steps", opts.mf_steps);
    manifest.config("max_instances", opts.max_instances);
    manifest.config("target_count", opts.target);
    manifest.config("base_step", opts.step);
    manifest.config("resume", opts.resume);

    const MiningOutcome outcome = mine(config, sinks);

    manifest.output(sinks.ledger_path);
    manifest.write(sinks.ledger_path);
    std::cout << "generated=" << outcome.generated << " non_unique=" << outcome.non_unique
              << " filtered_easy=" << outcome.filtered_easy
              << " simulated=" << outcome.simulated << " hard=" << outcome.hard_count << "\n"
              << "ledger -> " << sinks.ledger_path.string() << "\n";
}

} // namespace qaacli
