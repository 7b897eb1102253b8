#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qaacli {

inline constexpr const char* kToolVersion = "qaa 0.1.0";

/// Default output directory: $QAA_OUT_DIR when set, else the working dir.
std::filesystem::path default_out_dir();

/// Collects the run description and writes `<primary_output>.manifest.json`.
/// Timestamps and wall-clock live only here; data files stay deterministic.
class Manifest {
public:
    Manifest(std::string command, std::uint64_t seed);

    void config(const std::string& key, const nlohmann::json& value);
    void input(const std::filesystem::path& path);
    void output(const std::filesystem::path& path);
    void stage_seconds(const std::string& stage, double seconds);

    /// Basename of the manifest file for a given primary output.
    static std::string ref_for(const std::filesystem::path& primary_output);

    void write(const std::filesystem::path& primary_output);

private:
    nlohmann::json doc_;
    std::chrono::steady_clock::time_point start_;
};

/// Scoped stage timer feeding Manifest::stage_seconds.
class StageTimer {
public:
    StageTimer(Manifest& m, std::string name)
        : manifest_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
        manifest_.stage_seconds(name_, d.count());
    }

private:
    Manifest& manifest_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

/// Inserts a "manifest" provenance key into a JSON document text.
std::string json_with_manifest(const std::string& json_text, const std::string& manifest_ref);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Label for outputs derived from an instance path ("inst_000001" from
/// "runs/inst_000001.json") unless overridden.
std::string label_from_path(const std::filesystem::path& instance_path);

/// Parses "a,b,c" and "lo:hi" (integer-stepped) grid syntax.
std::vector<double> parse_grid(const std::string& text);

} // namespace qaacli
