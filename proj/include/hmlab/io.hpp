#pragma once

// CSV and JSON serialization of run artifacts. CSVs carry a header row,
// 17 significant digits and LF line endings; JSON keeps field order.

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "hmlab/analysis.hpp"
#include "hmlab/integrator.hpp"
#include "hmlab/shooting_lab.hpp"

namespace hmlab::io {

using Json = nlohmann::ordered_json;

/// printf "%.17g": round-trips every finite double.
std::string format_double(double x);

std::string trajectory_csv(std::span<const DirectState> samples);
std::string sweep_csv(const SweepReport& report);
std::string abel_csv(std::span<const AbelState> samples);
std::string w_csv(std::span<const WState> samples);

Json to_json(const Verdict& v);
Json to_json(const ConditionReport& r);
Json trajectory_meta(const Trajectory& t);
Json sweep_summary(const SweepReport& r, int n);
Json to_json(const Adjudication& a);
Json to_json(const LemmaReport& r);
Json to_json(const CorollaryReport& r);
Json to_json(const WBoundReport& r);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

/// Writes bytes verbatim (no newline translation).
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hmlab::io
