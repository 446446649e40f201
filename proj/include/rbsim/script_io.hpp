#pragma once

#include <filesystem>
#include <string>

#include "rbsim/core_model.hpp"

namespace rbsim {

// Scripts are JSON documents with keys written in a fixed order:
//   jobs, estimator, latency, delays, horizon
// Job entries are {id, kind, t[, hardness]} or {kind: "bad", count, t_start, t_step}.
std::string emit_script(const EventScript& script);
EventScript parse_script(const std::string& text);

EventScript load_script(const std::filesystem::path& path);
void save_script(const EventScript& script, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace rbsim
