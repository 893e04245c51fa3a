#pragma once

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edgestat::cli {

using nlohmann::json;

// sha1("blob <size>\0" + content), as git hash-object prints it.
std::string git_blob_sha1(std::string_view content);

std::string read_file(const std::filesystem::path& path);

struct OutputRecord {
    std::string role;   // "data", "summary", ...
    std::filesystem::path path;
    std::string sha1;
    std::size_t bytes = 0;
};

struct Manifest {
    std::string command;
    std::string which;
    json parameters = json::object();   // keyed by long flag name
    json seeds = json::object();
    std::vector<OutputRecord> outputs;
    unsigned workers = 1;

    json to_json() const;
    static Manifest from_json(const json& j);
    // argv (without the program name) that reproduces the run.
    std::vector<std::string> replay_arguments() const;
};

// Writes content and records its hash in the manifest.
void write_output(Manifest& m, const std::string& role, const std::filesystem::path& path, const std::string& content);
void write_manifest(const Manifest& m, const std::filesystem::path& path);

std::string fmt_double(double x);

} // namespace edgestat::cli
