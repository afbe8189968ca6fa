#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mdfit {

inline constexpr const char* kToolVersion = "0.1.0";

using ParamValue = std::variant<bool, std::int64_t, std::uint64_t, double, std::string,
                                std::vector<double>>;

struct ManifestParam {
    std::string name;
    ParamValue value;
    bool defaulted = true; ///< false when the user supplied it
};

/// Everything needed to reproduce one CLI run.
struct RunManifest {
    std::string mode;
    std::vector<std::pair<std::string, std::string>> inputs; ///< role -> path as given
    std::vector<ManifestParam> params;
    std::vector<std::string> outputs; ///< file names relative to the output directory
    std::vector<std::string> notes;
    std::string timestamp;
    std::string tool_version = kToolVersion;

    void set(std::string name, ParamValue value, bool defaulted);
};

/// UTC ISO-8601. Uses SOURCE_DATE_EPOCH when set, so reruns can be byte-identical.
[[nodiscard]] std::string manifest_timestamp();

/// Pretty-printed JSON with keys in a fixed order.
[[nodiscard]] std::string manifest_json(const RunManifest& m);

/// <dir>/<mode>.manifest.json. Throws InputError if it exists and !force.
[[nodiscard]] std::filesystem::path manifest_path(const std::filesystem::path& dir,
                                                  const std::string& mode);
void check_collision(const std::filesystem::path& dir, const std::string& mode, bool force);
void write_manifest(const std::filesystem::path& dir, const RunManifest& m, bool force);

} // namespace mdfit
