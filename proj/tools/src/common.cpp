#include "common.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qaa/errors.hpp"

namespace qaacli {

using nlohmann::json;

std::filesystem::path default_out_dir() {
    const char* env = std::getenv("QAA_OUT_DIR");
    return env != nullptr && *env != '\0' ? std::filesystem::path(env)
                                          : std::filesystem::path(".");
}

Manifest::Manifest(std::string command, std::uint64_t seed)
    : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["tool_version"] = kToolVersion;
    doc_["master_seed"] = seed;
    doc_["config"] = json::object();
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
    doc_["stage_timings_seconds"] = json::object();
}

void Manifest::config(const std::string& key, const json& value) { doc_["config"][key] = value; }

void Manifest::input(const std::filesystem::path& path) { doc_["inputs"].push_back(path.string()); }

void Manifest::output(const std::filesystem::path& path) {
    doc_["outputs"].push_back(path.string());
}

void Manifest::stage_seconds(const std::string& stage, double seconds) {
    doc_["stage_timings_seconds"][stage] = seconds;
}

std::string Manifest::ref_for(const std::filesystem::path& primary_output) {
    return primary_output.filename().string() + ".manifest.json";
}

void Manifest::write(const std::filesystem::path& primary_output) {
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start_;
    doc_["wall_clock_seconds"] = wall.count();
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc_["created_at"] = stamp;

    const std::filesystem::path path =
        primary_output.parent_path() / ref_for(primary_output);
    write_text_file(path, doc_.dump(2) + "\n");
}

std::string json_with_manifest(const std::string& json_text, const std::string& manifest_ref) {
    json j = json::parse(json_text);
    j["manifest"] = manifest_ref;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qaa::IoError("cannot write " + path.string());
    out << text;
    if (!out) throw qaa::IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qaa::IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string label_from_path(const std::filesystem::path& instance_path) {
    return instance_path.stem().string();
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
        const long lo = std::stol(text.substr(0, colon));
        const long hi = std::stol(text.substr(colon + 1));
        if (hi < lo) throw std::invalid_argument("grid range is empty: " + text);
        for (long t = lo; t <= hi; ++t) grid.push_back(static_cast<double>(t));
        return grid;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw std::invalid_argument("empty grid: " + text);
    return grid;
}

} // namespace qaacli
