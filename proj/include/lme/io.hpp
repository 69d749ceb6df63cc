#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lme/point_set.hpp"

namespace lme {

/// Parse/IO failures (malformed files, dimension mismatches).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV point-set format: first line `# d=<dim>`, then one point per row of
/// comma-separated decimal coordinates (17 significant digits on write).
std::string pointset_to_csv(const PointSet& p);
PointSet pointset_from_csv(const std::string& text);

/// JSON point-set form {"d": int, "points": [[..], ..]}.
nlohmann::json pointset_to_json(const PointSet& p);
PointSet pointset_from_json(const nlohmann::json& j);

/// Reads .json by extension, CSV otherwise.
PointSet read_pointset(const std::filesystem::path& path);
void write_pointset(const PointSet& p, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lme
