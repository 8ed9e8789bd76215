#include "hmlab/shooting_lab.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hmlab {

std::string_view to_string(Regime r) {
  return r == Regime::origin_regular ? "origin_regular" : "infinity_decay";
}

Regime parse_regime(std::string_view s) {
  if (s == "origin_regular") return Regime::origin_regular;
  if (s == "infinity_decay") return Regime::infinity_decay;
  throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

std::vector<double> CGrid::values() const { return log_grid(min, max, count); }

void SweepSpec::validate() const {
  if (pair.n < 2) throw std::invalid_argument("pair.n must be >= 2");
  if (!(c_grid.min > 0.0) || !std::isfinite(c_grid.min)) throw std::invalid_argument("c_grid.min must be positive");
  if (!(c_grid.max > c_grid.min) || !std::isfinite(c_grid.max)) {
    throw std::invalid_argument("c_grid.max must exceed c_grid.min");
  }
  if (c_grid.count < 2) throw std::invalid_argument("c_grid.count must be >= 2");
  cfg.validate();
}

Trajectory shoot(const ModelPair& pair, Regime regime, double c, const IntegrationConfig& cfg) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("shoot: c must be positive");
  if (regime == Regime::origin_regular) {
    const SeriesSeed seed = series_start(pair.n, pair.target, c, cfg.r_start);
    return integrate_direct(pair.n, pair.target, cfg, {seed.y0, seed.yp0}, Direction::forward);
  }
  return integrate_direct(pair.n, pair.target, cfg, {c, -c / cfg.r_end}, Direction::backward);
}

SweepReport run_sweep(const SweepSpec& s) {
  s.validate();
  const std::vector<double> cs = s.c_grid.values();
  if (s.regime == Regime::origin_regular) {
    // fail fast, before any worker starts
    series_start(s.pair.n, s.pair.target, cs.front(), s.cfg.r_start);
  }

  SweepReport report;
  report.regime = s.regime;
  report.rows.resize(cs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cs.size(); i = next++) {
      try {
        const Trajectory t = shoot(s.pair, s.regime, cs[i], s.cfg);
        const DirectState& last = t.final_state();
        report.rows[i] = {cs[i], t.verdict, last.y, last.yp};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cs.size();
      }
    }
  };

  unsigned threads = s.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : s.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const SweepRow& row : report.rows) {
    ++report.summary[static_cast<std::size_t>(row.verdict.tag)];
    if (row.verdict.tag == VerdictTag::diffeo_candidate) report.any_diffeo_candidate = true;
  }
  return report;
}

BoundaryResult bisect_boundary(const SweepSpec& s, double lo, double hi, double rel_tol) {
  s.cfg.validate();
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("bisect_boundary: c values must be positive");
  if (lo == hi) throw std::invalid_argument("bisect_boundary: degenerate bracket lo == hi");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("bisect_boundary: rel_tol must be positive");
  if (lo > hi) std::swap(lo, hi);

  BoundaryResult res;
  res.verdict_lo = shoot(s.pair, s.regime, lo, s.cfg).verdict;
  res.verdict_hi = shoot(s.pair, s.regime, hi, s.cfg).verdict;
  if (res.verdict_lo.tag == res.verdict_hi.tag) {
    throw std::invalid_argument("bisect_boundary: same verdict '" + std::string(to_string(res.verdict_lo.tag)) +
                                "' at both ends");
  }
  while (hi - lo > rel_tol * lo) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    Verdict v = shoot(s.pair, s.regime, mid, s.cfg).verdict;
    ++res.iterations;
    if (v.tag == res.verdict_lo.tag) {
      lo = mid;
      res.verdict_lo = std::move(v);
    } else {
      // any other tag counts as the upper side of the transition
      hi = mid;
      res.verdict_hi = std::move(v);
    }
  }
  res.c_lo = lo;
  res.c_hi = hi;
  res.c_star = std::sqrt(lo * hi);
  return res;
}

}  // namespace hmlab
