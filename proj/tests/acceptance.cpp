// Acceptance run: one PASS/FAIL line per criterion.
//
//   hmlab_acceptance [--only C<k>] [--cli path] [--configs dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hmlab/analysis.hpp"
#include "hmlab/error.hpp"
#include "hmlab/integrator.hpp"
#include "hmlab/io.hpp"
#include "hmlab/shooting_lab.hpp"

using namespace hmlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back((ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { details.push_back("      " + what); }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

IntegrationConfig window(double a, double b) {
  IntegrationConfig cfg;
  cfg.r_start = a;
  cfg.r_end = b;
  return cfg;
}

Trajectory identity_shot(int n) {
  const MetricProfile e = euclidean();
  const SeriesSeed s = series_start(n, e, 1.0, 0.1);
  return integrate_direct(n, e, window(0.1, 10.0), {s.y0, s.yp0}, Direction::forward);
}

const std::vector<int> kDims{2, 3, 4, 5};

// ---------------------------------------------------------------------------

Outcome identity_exactness() {
  Outcome o;
  Stopwatch sw;
  for (int n : kDims) {
    const Trajectory t = identity_shot(n);
    const double err = std::abs(t.samples.back().y - 10.0);
    o.require(t.samples.back().r == 10.0 && err <= 1e-8, "n=" + std::to_string(n) + " |y(10)-10| = " + fmt(err));
    o.require(t.verdict.tag == VerdictTag::diffeo_candidate,
              "n=" + std::to_string(n) + " verdict " + std::string(to_string(t.verdict.tag)));
  }
  o.require(sw.seconds() < 1.0, "runtime " + fmt(sw.seconds()) + " s < 1 s");
  return o;
}

void transform_chain_case(Outcome& o, const std::string& label, int n, const MetricProfile& p, const Trajectory& t) {
  const Adjudication a = adjudicate_trajectory(n, p, t);
  const auto& sel = a.evidence[static_cast<std::size_t>(a.selected)];
  const auto& rej = a.evidence[static_cast<std::size_t>(other(a.selected))];
  const double ratio = sel.sup_coarse / sel.sup_fine;
  o.require(a.selected == SignVariant::corrected, label + " adjudicated " + std::string(to_string(a.selected)));
  o.require(sel.sup_coarse <= 1e-4, label + " selected sup-residual " + fmt(sel.sup_coarse) + " <= 1e-4");
  o.require(ratio >= 4.0, label + " refinement ratio " + fmt(ratio) + " >= 4");
  o.require(rej.sup_coarse > 0.1, label + " rejected sup-residual " + fmt(rej.sup_coarse) + " > 0.1");
}

Outcome transform_chain() {
  Outcome o;
  Stopwatch sw;
  for (int n : kDims) transform_chain_case(o, "identity n=" + std::to_string(n), n, euclidean(), identity_shot(n));
  const ModelPair h = make_model_pair(3, hyperbolic());
  const Trajectory t = shoot(h, Regime::origin_regular, 1.0, window(0.1, 10.0));
  o.note("hyperbolic n=3 shot ends " + std::string(to_string(t.verdict.tag)) + " at r = " + fmt(t.verdict.r_event));
  transform_chain_case(o, "hyperbolic n=3", 3, h.target, t);
  o.require(sw.seconds() < 5.0, "runtime " + fmt(sw.seconds()) + " s < 5 s");
  return o;
}

Outcome sign_stability() {
  Outcome o;
  const std::vector<std::pair<std::string, MetricProfile>> profiles = {
      {"euclidean", euclidean()},
      {"hyperbolic", hyperbolic()},
      {"scaled_hyperbolic(0.5)", scaled_hyperbolic(0.5)},
      {"scaled_hyperbolic(2)", scaled_hyperbolic(2.0)},
      {"power(0.5)", power_profile(0.5)},
      {"power(1)", power_profile(1.0)},
      {"power(2)", power_profile(2.0)},
      {"polynomial(0,1,0,1)", polynomial_profile({0.0, 1.0, 0.0, 1.0})},
  };
  std::map<std::string, int> tally;
  for (const auto& [name, p] : profiles) {
    for (int n : kDims) {
      std::string got;
      try {
        const Adjudication a = adjudicate_sign(make_model_pair(n, p), IntegrationConfig{});
        got = std::string(to_string(a.selected));
      } catch (const NumericalFailure& e) {
        got = "failure";
        o.note(name + " n=" + std::to_string(n) + ": " + e.what());
      }
      ++tally[got];
    }
  }
  std::string summary;
  for (const auto& [k, v] : tally) summary += k + ":" + std::to_string(v) + " ";
  o.require(tally.size() == 1 && !tally.count("failure"), "one variant across all builtins and n: " + summary);

  // z = 1/y solves the n=2 euclidean corrected form exactly
  const MetricProfile e = euclidean();
  double worst_c = 0.0, worst_p = 0.0;
  for (double y : log_grid(1e-3, 1e3, 601)) {
    const double z = 1.0 / y, dz = -1.0 / (y * y);
    // residuals are measured against the size of z' itself, which reaches 1e6
    const double scale = std::max(1.0, std::abs(dz));
    worst_c = std::max(worst_c, std::abs(abel_residual_point(2, e, SignVariant::corrected, y, z, dz)) / scale);
    const double printed = abel_residual_point(2, e, SignVariant::as_printed, y, z, dz);
    const double expect = -2.0 / (y * y);
    worst_p = std::max(worst_p, std::abs(printed - expect) / scale);
  }
  o.require(worst_c <= 1e-10, "closed form corrected residual, max rel " + fmt(worst_c) + " <= 1e-10");
  o.require(worst_p <= 1e-10, "closed form printed residual vs -2/y^2, max rel dev " + fmt(worst_p) + " <= 1e-10");
  return o;
}

Outcome condition_ground_truth() {
  Outcome o;
  Stopwatch sw;
  const std::vector<std::pair<int, std::string>> stated{{2, "0"}, {3, "1"}, {4, "4/3"}, {5, "9/4"}};
  for (const auto& [n, want] : stated) {
    const Threshold t = c3_threshold(n);
    const std::string got = t.den == 1 ? std::to_string(t.num) : std::to_string(t.num) + "/" + std::to_string(t.den);
    o.require(got == want, "n=" + std::to_string(n) + " threshold (n-2)^2/(n-1) = " + got + ", stated " + want);
  }
  for (int n : kDims) {
    const ConditionReport r = check_conditions(make_model_pair(n, hyperbolic()));
    o.require(r.c1_pass && r.c2_pass && r.c3_pass && r.c3_boundary_divergent,
              "hyperbolic n=" + std::to_string(n) + " passes (1)-(3), c3 sup " + fmt(r.c3_sup) + " boundary-divergent");
  }
  for (int n : kDims) {
    const ConditionReport r = check_conditions(make_model_pair(n, euclidean()));
    const std::string tag = "euclidean n=" + std::to_string(n) + " c3 sup " + fmt(r.c3_sup) + " vs " +
                            fmt(r.c3_threshold.value);
    if (n == 2) {
      o.require(r.c1_pass && r.c2_pass && r.c3_pass, tag + ": passes all three");
    } else {
      o.require(!r.c3_pass, tag + ": fails c3");
    }
  }
  o.require(sw.seconds() < 1.0, "runtime " + fmt(sw.seconds()) + " s < 1 s");
  return o;
}

// Tallies recorded from the first run on this grid; every shot blows up.
struct FrozenSweep {
  Regime regime;
  int n;
  std::size_t finite_blowup;
};

const std::vector<FrozenSweep> kFrozen = {
    {Regime::origin_regular, 2, 61}, {Regime::origin_regular, 3, 61}, {Regime::origin_regular, 4, 61},
    {Regime::origin_regular, 5, 61}, {Regime::infinity_decay, 2, 41}, {Regime::infinity_decay, 3, 41},
    {Regime::infinity_decay, 4, 41}, {Regime::infinity_decay, 5, 41},
};

SweepSpec sweep_spec(Regime regime, int n) {
  SweepSpec s;
  s.pair = make_model_pair(n, hyperbolic());
  s.regime = regime;
  s.c_grid = regime == Regime::origin_regular ? CGrid{61, 1e-3, 1e3} : CGrid{41, 1e-4, 1.0};
  s.cfg = window(0.01, 50.0);
  return s;
}

Outcome sweep_evidence() {
  Outcome o;
  Stopwatch sw;
  for (const FrozenSweep& f : kFrozen) {
    const SweepReport r = run_sweep(sweep_spec(f.regime, f.n));
    const std::string tag = std::string(to_string(f.regime)) + " n=" + std::to_string(f.n);
    o.require(!r.any_diffeo_candidate, tag + " any_diffeo_candidate = false");
    const std::size_t blow = r.summary[static_cast<std::size_t>(VerdictTag::finite_blowup)];
    o.require(blow == f.finite_blowup && r.rows.size() == f.finite_blowup,
              tag + " finite_blowup " + std::to_string(blow) + "/" + std::to_string(r.rows.size()) +
                  " (frozen " + std::to_string(f.finite_blowup) + ")");
  }
  o.require(sw.seconds() < 60.0, "runtime " + fmt(sw.seconds()) + " s < 60 s");
  return o;
}

Outcome monitors() {
  Outcome o;
  std::size_t trajectories = 0, corollary_bad = 0, lemma_bad = 0;
  for (int n : kDims) {
    const SweepSpec s = sweep_spec(Regime::infinity_decay, n);
    for (double c : s.c_grid.values()) {
      const Trajectory t = shoot(s.pair, s.regime, c, s.cfg);
      const AbelTrajectory a = transform_direct_to_abel(t.full_samples());
      ++trajectories;
      const std::string where = "n=" + std::to_string(n) + " c=" + fmt(c);
      const CorollaryReport cr = corollary_monitor(a);
      if (!cr.z_monotone_nondecreasing) {
        ++corollary_bad;
        o.note("corollary " + where + ": " + std::to_string(cr.decreases) + " decreases, first at y = " +
               fmt(*cr.first_decrease_y));
      }
      const LemmaReport lr = lemma1_monitor(n, s.pair.target, a, SignVariant::as_printed);
      if (lr.min_value < -1e-9) {
        ++lemma_bad;
        if (lemma_bad <= 8) {
          o.note("lemma (printed) " + where + ": min " + fmt(lr.min_value) + " at y = " + fmt(lr.y_at_min) +
                 ", first violation at y = " + fmt(*lr.first_violation_y) + ", " + std::to_string(lr.violations) +
                 "/" + std::to_string(a.samples.size()) + " samples");
        }
      }
    }
  }
  if (lemma_bad > 8) o.note("... " + std::to_string(lemma_bad - 8) + " more lemma violations");
  o.require(corollary_bad == 0, "corollary: z nondecreasing in y on " + std::to_string(trajectories - corollary_bad) +
                                    "/" + std::to_string(trajectories) + " decay trajectories");
  o.require(lemma_bad == 0, "lemma (printed variant) min >= -1e-9 on " + std::to_string(trajectories - lemma_bad) +
                                "/" + std::to_string(trajectories) + " decay trajectories");
  return o;
}

Outcome integrator_order() {
  Outcome o;
  // y = r + eps r^2 on hyperbolic n=3, defect returned as forcing
  const double eps = 0.1;
  const int n = 3;
  const MetricProfile h = hyperbolic();
  const Forcing f = [&](double r) {
    const double y = r + eps * r * r;
    const double yp = 1.0 + 2.0 * eps * r;
    return 2.0 * eps + (n - 1.0) * yp / r - (n - 1.0) * eval_gg(h, y) / (r * r);
  };
  std::vector<double> xs, ys;
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9}) {
    IntegrationConfig cfg = window(0.1, 2.0);
    cfg.tail_decades = 0.0;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol * 1e-2;
    const Trajectory t = integrate_direct(n, h, cfg, {0.1 + eps * 0.01, 1.0 + 2.0 * eps * 0.1}, Direction::forward, f);
    double err = 0.0;
    for (const DirectState& s : t.samples) err = std::max(err, std::abs(s.y - (s.r + eps * s.r * s.r)));
    const double steps = static_cast<double>(t.stats.steps);
    o.note("rel_tol " + fmt(tol) + ": " + std::to_string(t.stats.steps) + " steps, max error " + fmt(err));
    xs.push_back(std::log(steps));
    ys.push_back(std::log(err));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double order = -sxy / sxx;
  o.require(order >= 4.0, "observed order " + fmt(order) + " >= 4.0 (error vs steps)");
  return o;
}

std::map<std::string, std::string> data_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = s.str();
  }
  return out;
}

Outcome determinism(const fs::path& cli, const fs::path& configs) {
  Outcome o;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  o.require(!files.empty(), std::to_string(files.size()) + " configs in " + configs.string());
  const fs::path root = fs::temp_directory_path() / "hmlab_acceptance_determinism";
  fs::remove_all(root);
  for (const char* pass : {"a", "b"}) {
    for (const fs::path& f : files) {
      const fs::path out = root / pass / f.stem();
      const std::string cmd = "\"" + cli.string() + "\" --config \"" + f.string() + "\" --output_dir \"" +
                              out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, std::string("run ") + pass + " " + f.filename().string() + " exit " + std::to_string(rc));
    }
  }
  const auto a = data_files(root / "a");
  const auto b = data_files(root / "b");
  std::size_t differing = 0;
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != content) {
      ++differing;
      o.note("differs: " + name);
    }
  }
  o.require(!a.empty() && a.size() == b.size() && differing == 0,
            std::to_string(a.size()) + " data files byte-identical across two runs");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  fs::path cli = HMLAB_CLI_PATH;
  fs::path configs = HMLAB_CONFIGS_DIR;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") {
      only = argv[i + 1];
    } else if (flag == "--cli") {
      cli = argv[i + 1];
    } else if (flag == "--configs") {
      configs = argv[i + 1];
    } else {
      std::cerr << "unknown flag " << flag << '\n';
      return 2;
    }
  }

  const std::vector<std::tuple<std::string, std::string, std::function<Outcome()>>> criteria = {
      {"C1", "identity exactness", identity_exactness},
      {"C2", "transform-chain oracle", transform_chain},
      {"C3", "sign adjudication stability", sign_stability},
      {"C4", "condition checker ground truth", condition_ground_truth},
      {"C5", "nonexistence sweep evidence", sweep_evidence},
      {"C6", "lemma/corollary monitors", monitors},
      {"C7", "integrator order", integrator_order},
      {"C8", "determinism", [&] { return determinism(cli, configs); }},
  };

  bool all = true;
  bool ran = false;
  std::vector<std::string> lines;
  for (const auto& [id, name, fn] : criteria) {
    if (!only.empty() && only != id) continue;
    ran = true;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    for (const std::string& d : o.details) std::cout << "  " << id << ' ' << d << '\n';
    const std::string line = id + " " + (o.pass ? "PASS" : "FAIL") + "  " + name;
    std::cout << line << "\n\n";
    lines.push_back(line);
    all = all && o.pass;
  }
  if (!ran) {
    std::cerr << "no criterion named " << only << '\n';
    return 2;
  }
  if (lines.size() > 1) {
    std::cout << "summary\n";
    for (const std::string& l : lines) std::cout << "  " << l << '\n';
  }
  return all ? 0 : 1;
}
