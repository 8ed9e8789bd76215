#include "hmlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hmlab::io {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_number(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trajectory_csv(std::span<const DirectState> samples) {
  std::string out = "r,y,yp\n";
  for (const DirectState& s : samples) {
    out += format_double(s.r) + ',' + format_double(s.y) + ',' + format_double(s.yp) + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "c,verdict,r_event,final_y,final_yp\n";
  for (const SweepRow& row : report.rows) {
    out += format_double(row.c) + ',' + std::string(to_string(row.verdict.tag)) + ',' +
           format_double(row.verdict.r_event) + ',' + format_double(row.final_y) + ',' +
           format_double(row.final_yp) + '\n';
  }
  return out;
}

std::string abel_csv(std::span<const AbelState> samples) {
  std::string out = "y,z\n";
  for (const AbelState& s : samples) out += format_double(s.y) + ',' + format_double(s.z) + '\n';
  return out;
}

std::string w_csv(std::span<const WState> samples) {
  std::string out = "y,w\n";
  for (const WState& s : samples) out += format_double(s.y) + ',' + format_double(s.w) + '\n';
  return out;
}

Json to_json(const Verdict& v) {
  Json j;
  j["tag"] = std::string(to_string(v.tag));
  j["r_event"] = number_or_null(v.r_event);
  j["beyond_window"] = v.beyond_window;
  j["note"] = v.note;
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["c1_value"] = r.c1_value;
  j["c1_pass"] = r.c1_pass;
  j["c2_min"] = r.c2_min;
  j["c2_pass"] = r.c2_pass;
  j["c3_sup"] = number_or_null(r.c3_sup);
  j["c3_threshold"] = r.c3_threshold.value;
  j["c3_pass"] = r.c3_pass;
  j["overall"] = r.overall;
  j["grid"] = {{"r_min", r.grid.r_min}, {"r_max", r.grid.r_max}, {"count", r.grid.count}};
  j["n"] = r.n;
  j["mode"] = std::string(to_string(r.mode));
  j["c2_argmin"] = r.c2_argmin;
  j["c2_scope"] = "verified on grid";
  j["c3_threshold_exact"] = std::to_string(r.c3_threshold.num) + "/" + std::to_string(r.c3_threshold.den);
  j["c3_margin"] = number_or_null(r.c3_margin);
  j["c3_argmax"] = r.c3_argmax;
  j["c3_location"] = std::string(to_string(r.c3_location));
  j["c3_boundary_divergent"] = r.c3_boundary_divergent;
  if (r.mode == CheckMode::remark) {
    j["gg_min"] = r.gg_min;
    j["gg_positive_pass"] = r.gg_positive_pass;
  }
  return j;
}

Json trajectory_meta(const Trajectory& t) {
  Json j;
  j["equation"] = std::string(kDirectEquationId);
  j["direction"] = std::string(to_string(t.direction));
  j["verdict"] = to_json(t.verdict);
  j["stats"] = {{"steps", t.stats.steps},
                {"rejected", t.stats.rejected},
                {"final_r", number_or_null(t.stats.final_r)},
                {"tail_steps", t.stats.tail_steps},
                {"tail_rejected", t.stats.tail_rejected}};
  j["samples"] = t.samples.size();
  j["tail_samples"] = t.tail.size();
  return j;
}

Json sweep_summary(const SweepReport& r, int n) {
  Json counts;
  for (std::size_t k = 0; k < kVerdictTagCount; ++k) {
    counts[std::string(to_string(static_cast<VerdictTag>(k)))] = r.summary[k];
  }
  Json j;
  j["n"] = n;
  j["regime"] = std::string(to_string(r.regime));
  j["rows"] = r.rows.size();
  j["counts"] = counts;
  j["any_diffeo_candidate"] = r.any_diffeo_candidate;
  j["caveat"] =
      "a sweep is evidence, not proof; diffeo_candidate means no failure was detected within the window "
      "and tail probe. The one-parameter seed may not exhaust all rotationally symmetric candidates.";
  return j;
}

Json to_json(const Adjudication& a) {
  Json j;
  j["selected"] = std::string(to_string(a.selected));
  j["equation"] = std::string(equation_id(a.selected));
  j["source"] = a.source;
  j["points_per_decade"] = a.points_per_decade;
  j["term_scale"] = a.term_scale;
  j["coarse_samples"] = a.coarse_samples;
  j["fine_samples"] = a.fine_samples;
  Json ev = Json::array();
  for (const VariantEvidence& e : a.evidence) {
    Json curve = Json::array();
    for (const ResidualPoint& p : e.residual_coarse) curve.push_back({p.x, p.value});
    ev.push_back({{"variant", std::string(to_string(e.variant))},
                  {"equation", std::string(equation_id(e.variant))},
                  {"sup_coarse", e.sup_coarse},
                  {"sup_fine", e.sup_fine},
                  {"vanishes", e.vanishes},
                  {"residual_coarse", curve}});
  }
  j["evidence"] = ev;
  return j;
}

Json to_json(const LemmaReport& r) {
  return {{"variant", std::string(to_string(r.variant))},
          {"min_value", number_or_null(r.min_value)},
          {"y_at_min", r.y_at_min},
          {"violations", r.violations},
          {"first_violation_y", optional_number(r.first_violation_y)},
          {"pass", r.pass}};
}

Json to_json(const CorollaryReport& r) {
  return {{"z_monotone_nondecreasing", r.z_monotone_nondecreasing},
          {"decreases", r.decreases},
          {"first_decrease_y", optional_number(r.first_decrease_y)},
          {"max_decrease", r.max_decrease},
          {"y_min", r.y_min},
          {"z_at_min_y", number_or_null(r.z_at_min_y)},
          {"heading_to_minus_infinity", r.heading_to_minus_infinity},
          {"reaches_small_y", r.reaches_small_y}};
}

Json to_json(const WBoundReport& r) {
  return {{"max_excess", number_or_null(r.max_excess)},
          {"y_at_max", r.y_at_max},
          {"degenerate", r.degenerate},
          {"pass", r.pass}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace hmlab::io
