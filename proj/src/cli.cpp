#include "hmlab/cli.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <ostream>
#include <thread>

#include "hmlab/error.hpp"
#include "hmlab/io.hpp"

namespace hmlab::cli {

namespace {

using Files = std::map<std::string, std::string>;  // file name -> content

void add_trajectory(Files& files, const Trajectory& t) {
  files["trajectory.csv"] = io::trajectory_csv(t.samples);
  files["trajectory_meta.json"] = io::dump(io::trajectory_meta(t));
  if (!t.tail.empty()) files["tail.csv"] = io::trajectory_csv(t.tail);
}

std::string summarize(const Trajectory& t) {
  std::string s = "verdict " + std::string(to_string(t.verdict.tag));
  if (std::isfinite(t.verdict.r_event)) s += " at r = " + io::format_double(t.verdict.r_event);
  if (!t.verdict.note.empty()) s += " (" + t.verdict.note + ")";
  return s;
}

std::string cmd_check_conditions(const RunConfig& cfg, Files& files) {
  const ConditionReport rep = check_conditions(cfg.pair(), cfg.conditions, cfg.check_mode);
  files["conditions.json"] = io::dump(io::to_json(rep));
  return std::string("overall ") + (rep.overall ? "pass" : "fail");
}

std::string cmd_integrate(const RunConfig& cfg, Files& files) {
  const ModelPair pair = cfg.pair();
  InitialData init{cfg.y0, cfg.yp0};
  if (cfg.seed == SeedKind::series) {
    if (cfg.direction != Direction::forward) {
      throw ConfigError("integrate.direction", "the series seed lives at r_start and needs 'forward'");
    }
    const SeriesSeed s = series_start(pair.n, pair.target, cfg.c, cfg.integration.r_start);
    init = {s.y0, s.yp0};
  }
  const Trajectory t = integrate_direct(pair.n, pair.target, cfg.integration, init, cfg.direction);
  add_trajectory(files, t);
  return summarize(t);
}

std::string cmd_shoot(const RunConfig& cfg, Files& files) {
  const Trajectory t = shoot(cfg.pair(), cfg.shoot_regime, cfg.shoot_c, cfg.integration);
  add_trajectory(files, t);
  return summarize(t);
}

std::string cmd_sweep(const RunConfig& cfg, Files& files) {
  SweepSpec spec{cfg.pair(), cfg.sweep_regime, cfg.sweep_grid(), cfg.integration, cfg.threads};
  const SweepReport rep = run_sweep(spec);
  files["sweep.csv"] = io::sweep_csv(rep);
  files["sweep_summary.json"] = io::dump(io::sweep_summary(rep, spec.pair.n));
  return std::string("any_diffeo_candidate = ") + (rep.any_diffeo_candidate ? "true" : "false");
}

std::string cmd_adjudicate(const RunConfig& cfg, Files& files) {
  const Adjudication adj = adjudicate_sign(cfg.pair(), cfg.integration, cfg.points_per_decade);
  files["adjudication.json"] = io::dump(io::to_json(adj));
  return "selected " + std::string(to_string(adj.selected));
}

std::string cmd_monitors(const RunConfig& cfg, Files& files) {
  const ModelPair pair = cfg.pair();
  const Trajectory t = shoot(pair, cfg.shoot_regime, cfg.shoot_c, cfg.integration);
  const AbelTrajectory a = transform_direct_to_abel(t.samples);
  const Adjudication adj = adjudicate_sign(pair, cfg.integration, cfg.points_per_decade);

  std::vector<WState> w_transformed;
  w_transformed.reserve(a.samples.size());
  for (const AbelState& s : a.samples) w_transformed.push_back(z_to_w(s));
  const WTrajectory w_int = integrate_w(pair.n, pair.target, WForm::printed, cfg.integration, 0.0, 0.0, cfg.w_y_max);

  io::Json j;
  j["regime"] = std::string(to_string(cfg.shoot_regime));
  j["c"] = cfg.shoot_c;
  j["trajectory"] = io::trajectory_meta(t);
  j["abel_samples"] = a.samples.size();
  j["lemma1_as_printed"] = io::to_json(lemma1_monitor(pair.n, pair.target, a, SignVariant::as_printed));
  j["selected_variant"] = std::string(to_string(adj.selected));
  j["lemma1_selected"] = io::to_json(lemma1_monitor(pair.n, pair.target, a, adj.selected));
  j["corollary"] = io::to_json(corollary_monitor(a));
  j["wbound_transformed"] = io::to_json(wbound_monitor(pair.n, w_transformed));
  io::Json wi = io::to_json(wbound_monitor(pair.n, w_int.samples));
  wi["equation"] = std::string(equation_id(WForm::printed));
  wi["hit_zero"] = w_int.hit_zero;
  wi["y_stop"] = w_int.y_stop;
  j["wbound_integrated"] = wi;

  files["monitors.json"] = io::dump(j);
  files["abel.csv"] = io::abel_csv(a.samples);
  return "monitors recorded";
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

std::vector<Override> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<Override> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) throw ConfigError(tok, "unexpected argument");
    const std::string body = tok.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw ConfigError(body, "flag has no value");
    out.emplace_back(body, extras[++i]);
  }
  return out;
}

int run(const Args& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg;
  try {
    std::vector<Override> overrides;
    if (args.command) overrides.emplace_back("command", *args.command);
    const auto extra = parse_overrides(args.extras);
    overrides.insert(overrides.end(), extra.begin(), extra.end());
    cfg = load_config(args.config, overrides);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  }

  Files files;
  std::string summary;
  try {
    switch (cfg.command) {
      case Command::check_conditions: summary = cmd_check_conditions(cfg, files); break;
      case Command::integrate: summary = cmd_integrate(cfg, files); break;
      case Command::shoot: summary = cmd_shoot(cfg, files); break;
      case Command::sweep: summary = cmd_sweep(cfg, files); break;
      case Command::adjudicate_sign: summary = cmd_adjudicate(cfg, files); break;
      case Command::monitors: summary = cmd_monitors(cfg, files); break;
    }
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure [" << e.stage() << "]: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error [" << to_string(cfg.command) << "]: " << e.what() << '\n';
    return kExitConfig;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string log = "time " + timestamp() + "\ncommand " + std::string(to_string(cfg.command)) +
                    "\nelapsed_s " + io::format_double(seconds) + "\nhardware_threads " +
                    std::to_string(std::thread::hardware_concurrency()) + "\nsummary " + summary + "\n";
  try {
    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& [name, content] : files) {
      io::write_file(cfg.output_dir / name, content);
      log += "wrote " + name + "\n";
    }
    io::write_file(cfg.output_dir / "run.log", log);
  } catch (const std::exception& e) {
    err << "output error [output_dir]: " << e.what() << '\n';
    return kExitIo;
  }
  out << to_string(cfg.command) << ": " << summary << '\n';
  return kExitOk;
}

}  // namespace hmlab::cli
