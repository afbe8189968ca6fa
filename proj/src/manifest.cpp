#include "mdfit/manifest.hpp"

#include "mdfit/csv_io.hpp"
#include "mdfit/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>

namespace mdfit {

void RunManifest::set(std::string name, ParamValue value, bool defaulted)
{
    for (auto& p : params) {
        if (p.name == name) {
            p.value = std::move(value);
            p.defaulted = defaulted;
            return;
        }
    }
    params.push_back({std::move(name), std::move(value), defaulted});
}

std::string manifest_timestamp()
{
    std::time_t t = 0;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
        char* end = nullptr;
        const long long v = std::strtoll(sde, &end, 10);
        if (end == nullptr || *end != '\0' || v < 0) {
            throw InputError("SOURCE_DATE_EPOCH must be a nonnegative integer");
        }
        t = static_cast<std::time_t>(v);
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["mode"] = m.mode;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    ordered_json inputs = ordered_json::object();
    for (const auto& [role, path] : m.inputs) { inputs[role] = path; }
    j["inputs"] = inputs;
    ordered_json params = ordered_json::object();
    for (const auto& p : m.params) {
        ordered_json entry;
        std::visit([&](const auto& v) { entry["value"] = v; }, p.value);
        entry["source"] = p.defaulted ? "default" : "user";
        params[p.name] = entry;
    }
    j["parameters"] = params;
    j["outputs"] = m.outputs;
    if (!m.notes.empty()) { j["notes"] = m.notes; }
    return j.dump(2) + "\n";
}

std::filesystem::path manifest_path(const std::filesystem::path& dir, const std::string& mode)
{
    return dir / (mode + ".manifest.json");
}

void check_collision(const std::filesystem::path& dir, const std::string& mode, bool force)
{
    const auto path = manifest_path(dir, mode);
    if (!force && std::filesystem::exists(path)) {
        throw InputError(path.string() + " already exists (use --force to overwrite)");
    }
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m, bool force)
{
    check_collision(dir, m.mode, force);
    write_text(manifest_path(dir, m.mode), manifest_json(m));
}

} // namespace mdfit
