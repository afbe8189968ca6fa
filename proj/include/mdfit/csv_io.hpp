#pragma once

#include "mdfit/core_model.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mdfit {

/// Attribute -> category, in file order.
struct CategoryMap {
    std::vector<std::pair<std::string, std::string>> entries;

    /// Categories in order of first appearance.
    [[nodiscard]] std::vector<std::string> categories() const;
    /// Throws InputError for an unmapped attribute.
    [[nodiscard]] const std::string& category_of(const std::string& attribute) const;
};

enum class ReferenceMode { Distances, Scores };

/// Header `label,<attr1>,...`, one row per point. Errors name the offending
/// row and column (1-based, header is row 1).
[[nodiscard]] Configuration load_target(const std::filesystem::path& path);

/// Writes numbers in shortest round-trip form, so load_target reproduces them exactly.
void save_target(const std::filesystem::path& path, const Configuration& cfg);

/// Distances: square CSV `label,<label1>,...` with |d_ij - d_ji| <= 1e-9.
/// Scores: a table in target format; distances are taken between its rows.
/// With `target`, the point labels must match it and rows are reordered to
/// the target's order.
[[nodiscard]] DistanceMatrix load_reference(const std::filesystem::path& path, ReferenceMode mode,
                                            const Configuration* target = nullptr);

void save_distances(const std::filesystem::path& path, const DistanceMatrix& D,
                    const std::vector<std::string>& labels);

/// `attribute,category` with that header.
[[nodiscard]] CategoryMap load_category_map(const std::filesystem::path& path);

/// Checks that every attribute of `attrs` appears exactly once in `map`.
void check_category_map(const CategoryMap& map, const std::vector<std::string>& attrs);

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string round_trip(double v);

/// Reads a whole text file; throws InputError when it cannot be opened.
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace mdfit
