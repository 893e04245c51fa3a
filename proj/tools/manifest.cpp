#include "manifest.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>

#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#ifndef EDGESTAT_VERSION
#define EDGESTAT_VERSION "0.0.0"
#endif

namespace edgestat::cli {

std::string git_blob_sha1(std::string_view content)
{
    const std::string head = "blob " + std::to_string(content.size()) + '\0';
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), head.data(), head.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha1 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt_double(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json Manifest::to_json() const
{
    json j;
    j["schema"] = "edgestat-manifest-v1";
    j["program"] = {{"name", "edgestat"},
                    {"version", EDGESTAT_VERSION},
                    {"compiler", __VERSION__},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)}};
    j["command"] = command;
    j["which"] = which;
    j["parameters"] = parameters;
    j["seeds"] = seeds;
    j["execution"] = {{"workers", workers}};
    json outs = json::array();
    for (const auto& o : outputs)
        outs.push_back({{"role", o.role}, {"path", o.path.string()}, {"sha1", o.sha1}, {"bytes", o.bytes}});
    j["outputs"] = outs;
    return j;
}

Manifest Manifest::from_json(const json& j)
{
    if (j.value("schema", "") != "edgestat-manifest-v1") throw std::runtime_error("not an edgestat manifest");
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.which = j.at("which").get<std::string>();
    m.parameters = j.at("parameters");
    m.seeds = j.value("seeds", json::object());
    m.workers = j.value("execution", json::object()).value("workers", 1u);
    for (const auto& o : j.at("outputs"))
        m.outputs.push_back({o.at("role").get<std::string>(), o.at("path").get<std::string>(),
                             o.at("sha1").get<std::string>(), o.at("bytes").get<std::size_t>()});
    return m;
}

std::vector<std::string> Manifest::replay_arguments() const
{
    std::vector<std::string> args{command, which};
    auto scalar = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return fmt_double(v.get<double>());
        return v.dump();
    };
    for (const auto& [key, v] : parameters.items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back("--" + key);
            continue;
        }
        if (v.is_null()) continue;
        args.push_back("--" + key);
        if (v.is_array()) {
            std::string joined;
            for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
            args.push_back(joined);
        } else {
            args.push_back(scalar(v));
        }
    }
    return args;
}

void write_output(Manifest& m, const std::string& role, const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed: " + path.string());
    m.outputs.push_back({role, path, git_blob_sha1(content), content.size()});
}

void write_manifest(const Manifest& m, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << m.to_json().dump(2) << '\n';
}

} // namespace edgestat::cli
