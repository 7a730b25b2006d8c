#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace histq {

/// Locates a stored task report by index ("3") or kind ("consistency");
/// throws NotFound when no report matches.
std::filesystem::path find_report(const std::filesystem::path& out_dir,
                                  const std::string& task);

/// Human-readable rendering of a stored task report.
std::string render_text(const nlohmann::json& report);

}  // namespace histq
