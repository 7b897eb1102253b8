#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "qaa/errors.hpp"
#include "qaa/serialize.hpp"

using qaa::manifest_comment;

namespace qaacli {

namespace fs = std::filesystem;

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
    }
    const std::string& at(std::size_t row, int c) const { return rows[row][static_cast<std::size_t>(c)]; }
};

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

Table read_table(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            table.columns = split_csv(line);
            have_header = true;
        } else {
            auto fields = split_csv(line);
            fields.resize(table.columns.size());
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

bool has_prefix_suffix(const std::string& name, const std::string& prefix,
                       const std::string& suffix) {
    return name.size() > prefix.size() + suffix.size() && name.rfind(prefix, 0) == 0 &&
           name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip(const std::string& name, const std::string& prefix,
                  const std::string& suffix) {
    return name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
}

class FigureWriter {
public:
    FigureWriter(const fs::path& dir, Manifest& manifest, std::string manifest_ref)
        : dir_(dir), manifest_(manifest), manifest_ref_(std::move(manifest_ref)) {}

    std::ostringstream& figure(const std::string& filename, const std::string& header) {
        auto [it, fresh] = bodies_.try_emplace(filename);
        if (fresh) it->second << manifest_comment(manifest_ref_) << header << '\n';
        return it->second;
    }

    int flush() {
        for (const auto& [filename, body] : bodies_) {
            const fs::path path = dir_ / filename;
            write_text_file(path, body.str());
            manifest_.output(path);
        }
        return static_cast<int>(bodies_.size());
    }

private:
    fs::path dir_;
    Manifest& manifest_;
    std::string manifest_ref_;
    std::map<std::string, std::ostringstream> bodies_;
};

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plots the fig*.csv files emitted by `qaa report` (matplotlib required)."""
import csv
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))]
    return rows[0], rows[1:]


def save_hist(name, column, xlabel, log=False):
    data = load(name)
    if data is None or not data[1]:
        return
    header, rows = data
    idx = header.index(column)
    values = [float(r[idx]) for r in rows if r[idx]]
    if log:
        values = [math.log10(max(v, 1e-300)) for v in values]
        xlabel = "log10 " + xlabel
    plt.figure()
    plt.hist(values, bins=30)
    plt.xlabel(xlabel)
    plt.ylabel("count")
    out = name.replace(".csv", ".png")
    plt.savefig(os.path.join(HERE, out), dpi=150)
    plt.close()
    print("wrote", out)


def save_scatter(name, xcol, ycol, loglog=True):
    data = load(name)
    if data is None or not data[1]:
        return
    header, rows = data
    xi, yi = header.index(xcol), header.index(ycol)
    xs = [float(r[xi]) for r in rows if r[xi] and r[yi]]
    ys = [float(r[yi]) for r in rows if r[xi] and r[yi]]
    plt.figure()
    plt.scatter(xs, ys, s=12)
    if loglog:
        plt.xscale("log")
        plt.yscale("log")
        lo = min(xs + ys)
        hi = max(xs + ys)
        plt.plot([lo, hi], [lo, hi], "k--", linewidth=0.8)
    plt.xlabel(xcol)
    plt.ylabel(ycol)
    out = name.replace(".csv", ".png")
    plt.savefig(os.path.join(HERE, out), dpi=150)
    plt.close()
    print("wrote", out)


def save_lines(name, xcol, ycols, by_label=True, ylog=False):
    data = load(name)
    if data is None or not data[1]:
        return
    header, rows = data
    xi = header.index(xcol)
    labels = sorted({r[0] for r in rows}) if by_label else [None]
    plt.figure()
    for label in labels:
        sel = [r for r in rows if label is None or r[0] == label]
        for ycol in ycols:
            yi = header.index(ycol)
            xs = [float(r[xi]) for r in sel if r[yi] and r[yi] != "nan"]
            ys = [float(r[yi]) for r in sel if r[yi] and r[yi] != "nan"]
            if xs:
                plt.plot(xs, ys, label=f"{label or ''} {ycol}".strip(), linewidth=1)
    if ylog:
        plt.yscale("log")
    plt.xlabel(xcol)
    plt.legend(fontsize=6)
    out = name.replace(".csv", ".png")
    plt.savefig(os.path.join(HERE, out), dpi=150)
    plt.close()
    print("wrote", out)


save_hist("fig01_success_histogram.csv", "p_tref", "P(T_ref)", log=True)
save_lines("fig02_sweep.csv", "t", ["p"], ylog=True)
save_lines("fig03_spectrum.csv", "s", ["lambda0", "lambda1", "lambda2"])
save_lines("fig04_energy.csv", "t", ["energy_expectation"])
save_lines("fig05_overlaps.csv", "s", ["overlap_ground", "overlap_first_excited"])
save_hist("fig06_tmax_values.csv", "t_max", "T_max")
save_scatter("fig07_improvement_tmax.csv", "p_tref", "p_tmax")
save_hist("fig08_excited.csv", "average", "mean excited-start success")
save_scatter("fig09_improvement_t10.csv", "p_tref", "p_t10")
save_hist("fig10_pathchange_successes.csv", "success", "trial success", log=True)
save_hist("fig11_pathchange_max.csv", "max_success", "best trial success")
save_hist("fig12_pathchange_effective.csv", "effective_success", "1 - chi")
save_scatter("fig13_gap_vs_success.csv", "g_min", "success")
print("done")
)PY";

} // namespace

void run_report(const ReportOpts& opts) {
    const fs::path in_dir = opts.in_dir.empty() ? default_out_dir() : fs::path(opts.in_dir);
    const fs::path out_dir = opts.out_dir.empty() ? in_dir / "report" : fs::path(opts.out_dir);
    if (!fs::exists(in_dir)) throw qaa::IoError("input directory " + in_dir.string() + " does not exist");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    if (files.empty()) {
        std::cerr << "warning: no data files found under " << in_dir.string()
                  << "; nothing to report\n";
        return;
    }
    fs::create_directories(out_dir);

    Manifest manifest("report", 0);
    manifest.config("in", in_dir.string());
    const fs::path manifest_anchor = out_dir / "report";
    FigureWriter figs(out_dir, manifest, Manifest::ref_for(manifest_anchor));

    // campaign summaries indexed by (label, category) for the fig13 join
    struct CampaignRef {
        std::string best_index;
        std::string random_index;
    };
    std::map<std::pair<std::string, std::string>, CampaignRef> campaign_refs;

    for (const fs::path& file : files) {
        const std::string name = file.filename().string();
        manifest.input(file);

        if (name.rfind("ledger", 0) == 0) {
            const Table t = read_table(file);
            const int c = t.col("p_tref");
            if (c < 0) continue;
            auto& body = figs.figure("fig01_success_histogram.csv", "p_tref");
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                if (!t.at(r, c).empty()) body << t.at(r, c) << '\n';
        } else if (has_prefix_suffix(name, "sweep_", "_summary.csv")) {
            const std::string label = strip(name, "sweep_", "_summary.csv");
            const Table t = read_table(file);
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                figs.figure("fig06_tmax_values.csv", "label,t_max")
                    << label << ',' << t.at(r, t.col("t_max")) << '\n';
                figs.figure("fig07_improvement_tmax.csv", "label,p_tref,p_tmax")
                    << label << ',' << t.at(r, t.col("p_at_tref")) << ','
                    << t.at(r, t.col("p_at_tmax")) << '\n';
                if (!t.at(r, t.col("p_at_t10")).empty())
                    figs.figure("fig09_improvement_t10.csv", "label,p_tref,p_t10")
                        << label << ',' << t.at(r, t.col("p_at_tref")) << ','
                        << t.at(r, t.col("p_at_t10")) << '\n';
            }
        } else if (has_prefix_suffix(name, "sweep_", ".csv")) {
            const std::string label = strip(name, "sweep_", ".csv");
            const Table t = read_table(file);
            auto& body = figs.figure("fig02_sweep.csv", "label,t,p");
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                body << label << ',' << t.at(r, t.col("t")) << ',' << t.at(r, t.col("p"))
                     << '\n';
        } else if (has_prefix_suffix(name, "spectrum_", ".csv")) {
            const std::string label = strip(name, "spectrum_", ".csv");
            const Table t = read_table(file);
            auto& body = figs.figure("fig03_spectrum.csv", "label,s,lambda0,lambda1,lambda2");
            const int l2 = t.col("lambda2");
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                body << label << ',' << t.at(r, t.col("s")) << ','
                     << t.at(r, t.col("lambda0")) << ',' << t.at(r, t.col("lambda1")) << ','
                     << (l2 >= 0 ? t.at(r, l2) : "") << '\n';
        } else if (has_prefix_suffix(name, "trajectory_", ".csv")) {
            const std::string label = strip(name, "trajectory_", ".csv");
            const Table t = read_table(file);
            auto& energy = figs.figure("fig04_energy.csv", "label,t,s,energy_expectation");
            auto& overlaps =
                figs.figure("fig05_overlaps.csv", "label,t,s,overlap_ground,overlap_first_excited");
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                energy << label << ',' << t.at(r, t.col("t")) << ',' << t.at(r, t.col("s"))
                       << ',' << t.at(r, t.col("energy_expectation")) << '\n';
                overlaps << label << ',' << t.at(r, t.col("t")) << ',' << t.at(r, t.col("s"))
                         << ',' << t.at(r, t.col("overlap_ground")) << ','
                         << t.at(r, t.col("overlap_first_excited")) << '\n';
            }
        } else if (has_prefix_suffix(name, "excited_", "_summary.csv")) {
            const std::string label = strip(name, "excited_", "_summary.csv");
            const Table t = read_table(file);
            auto& body = figs.figure("fig08_excited.csv", "label,average,maximum");
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                body << label << ',' << t.at(r, t.col("average")) << ','
                     << t.at(r, t.col("maximum")) << '\n';
        } else if (has_prefix_suffix(name, "pathchange_", "_summary.csv")) {
            const Table t = read_table(file);
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                const std::string label = t.at(r, t.col("label"));
                const std::string category = t.at(r, t.col("category"));
                figs.figure("fig11_pathchange_max.csv", "label,category,max_success")
                    << label << ',' << category << ',' << t.at(r, t.col("best_success"))
                    << '\n';
                figs.figure("fig12_pathchange_effective.csv",
                            "label,category,chi,effective_success")
                    << label << ',' << category << ',' << t.at(r, t.col("chi")) << ','
                    << t.at(r, t.col("effective_success")) << '\n';
                campaign_refs[{label, category}] =
                    CampaignRef{t.at(r, t.col("best_trial_index")),
                                t.at(r, t.col("random_trial_index"))};
            }
        }
    }

    // second pass: per-trial files join against the campaign summaries
    for (const fs::path& file : files) {
        const std::string name = file.filename().string();
        if (!has_prefix_suffix(name, "pathchange_", "_trials.csv")) continue;
        const std::string stem = strip(name, "pathchange_", "_trials.csv");
        const std::size_t us = stem.rfind('_');
        if (us == std::string::npos) continue;
        const std::string label = stem.substr(0, us);
        const std::string category = stem.substr(us + 1);

        const Table t = read_table(file);
        auto& body = figs.figure("fig10_pathchange_successes.csv",
                                 "label,category,trial_index,success");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            body << label << ',' << category << ',' << t.at(r, t.col("trial_index")) << ','
                 << t.at(r, t.col("success")) << '\n';

        const auto ref = campaign_refs.find({label, category});
        if (ref == campaign_refs.end()) continue;
        auto emit_selected = [&](const std::string& index, const char* selector) {
            if (index.empty()) return;
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                if (t.at(r, t.col("trial_index")) == index &&
                    !t.at(r, t.col("g_min")).empty()) {
                    figs.figure("fig13_gap_vs_success.csv",
                                "label,category,selector,success,g_min")
                        << label << ',' << category << ',' << selector << ','
                        << t.at(r, t.col("success")) << ',' << t.at(r, t.col("g_min"))
                        << '\n';
                }
            }
        };
        emit_selected(ref->second.best_index, "best");
        emit_selected(ref->second.random_index, "random");
    }

    const int written = figs.flush();
    if (opts.plot_script) {
        const fs::path script = out_dir / "plot_figures.py";
        write_text_file(script, kPlotScript);
        manifest.output(script);
    }
    if (written == 0) {
        std::cerr << "warning: input files matched no known schema; nothing to report\n";
        return;
    }
    manifest.write(manifest_anchor);
    std::cout << "figures=" << written << " -> " << out_dir.string() << "\n";
}

} // namespace qaacli
