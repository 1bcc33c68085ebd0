#include "sparsecqp/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "sparsecqp/errors.hpp"
#include "sparsecqp/feasible.hpp"

namespace sparsecqp {

Metrics compute_metrics(const Vector& xHat, const Vector& xTrue, int k, double runTime, double zeroThreshold) {
  if (xHat.size() != xTrue.size()) throw InvalidDimension("estimate and truth lengths differ");
  const auto n = static_cast<int>(xTrue.size());
  Metrics out;
  const double num = (xHat - xTrue).squaredNorm();
  const double den = xTrue.squaredNorm();
  out.relErr = den > 0.0 ? num / den : (num == 0.0 ? 0.0 : INFINITY);

  int fp = 0;
  int fn = 0;
  for (int i = 0; i < n; ++i) {
    const bool est = std::abs(xHat(i)) > zeroThreshold;
    const bool tru = std::abs(xTrue(i)) > zeroThreshold;
    if (est && !tru) ++fp;
    if (!est && tru) ++fn;
  }
  out.fpRate = n > k ? static_cast<double>(fp) / (n - k) : 0.0;
  out.fnRate = k > 0 ? static_cast<double>(fn) / k : 0.0;
  out.runTime = runTime;
  return out;
}

std::string_view to_string(Method method) { return method == Method::L1 ? "L1" : "CQP"; }

std::string_view to_string(BoundMode mode) { return mode == BoundMode::HalfStep ? "HalfStep" : "FullStep"; }

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::optional<Method> parse_method(std::string_view name) {
  const std::string s = lower(name);
  if (s == "l1") return Method::L1;
  if (s == "cqp") return Method::CQP;
  return std::nullopt;
}

std::optional<BoundMode> parse_bound_mode(std::string_view name) {
  const std::string s = lower(name);
  if (s == "halfstep" || s == "half") return BoundMode::HalfStep;
  if (s == "fullstep" || s == "full") return BoundMode::FullStep;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n < 1 || m < 1) throw InvalidDimension("n and m must be positive");
  if (k < 0 || k > n) throw InvalidDimension("k exceeds n");
  if (runs < 1) throw InvalidArgument("runs must be at least 1");
  if (levels.empty()) throw InvalidArgument("levels must not be empty");
  for (auto l : levels)
    if (l < 2) throw InvalidArgument("every quantization level count must be >= 2");
  if (methods.empty()) throw InvalidArgument("methods must not be empty");
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  if (!(bnb.absGap > 0.0)) throw InvalidArgument("absGap must be positive");
}

std::vector<RunRecord> run_one(const ExperimentConfig& cfg, int run, std::uint64_t seed) {
  const Instance inst = generate(cfg.n, cfg.m, cfg.k, cfg.prior, seed);
  const bool fullStep = cfg.boundMode == BoundMode::FullStep;
  const double d = cfg.prior.d();

  std::vector<RunRecord> out;
  for (const auto levels : cfg.levels) {
    const QuantSpec specA = QuantSpec::covering(levels, values(inst.A), fullStep);
    const QuantSpec specY = QuantSpec::covering(levels, values(inst.y), fullStep);
    const Observation obs = quantize(inst, specA, specY, cfg.prior);
    for (const Method method : cfg.methods) {
      RunRecord rec;
      rec.run = run;
      rec.seed = seed;
      rec.levels = levels;
      rec.method = method;
      try {
        // Only the solver call is timed.
        const auto start = std::chrono::steady_clock::now();
        const Solution sol = method == Method::L1 ? solve_l1(build_l1_polytope(obs))
                                                  : solve_cqp(build_cqp_polytope(obs), d, cfg.bnb);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rec.status = sol.status;
        if (sol.status == SolveStatus::Infeasible) {
          rec.error = "infeasible";
        } else {
          rec.ok = true;
          rec.metrics = compute_metrics(sol.x, inst.xTrue, cfg.k, elapsed, support_threshold(d));
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<CellSummary> summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& records) {
  std::vector<CellSummary> table;
  for (const Method method : cfg.methods) {
    for (const auto levels : cfg.levels) {
      CellSummary cell;
      cell.method = method;
      cell.levels = levels;
      std::vector<const Metrics*> xs;
      for (const auto& r : records)
        if (r.ok && r.method == method && r.levels == levels) xs.push_back(&r.metrics);
      cell.count = static_cast<int>(xs.size());
      if (xs.empty()) {
        table.push_back(cell);
        continue;
      }
      const auto stats = [&](auto field, double& mean, double& sd) {
        double s = 0.0;
        for (const Metrics* x : xs) s += field(*x);
        mean = s / static_cast<double>(xs.size());
        double q = 0.0;
        for (const Metrics* x : xs) q += (field(*x) - mean) * (field(*x) - mean);
        sd = xs.size() > 1 ? std::sqrt(q / static_cast<double>(xs.size() - 1)) : 0.0;
      };
      double unused = 0.0;
      stats([](const Metrics& x) { return x.relErr; }, cell.relErrMean, cell.relErrStd);
      stats([](const Metrics& x) { return x.fpRate; }, cell.fpMean, cell.fpStd);
      stats([](const Metrics& x) { return x.fnRate; }, cell.fnMean, cell.fnStd);
      stats([](const Metrics& x) { return x.runTime; }, cell.timeMean, unused);
      table.push_back(cell);
    }
  }
  return table;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<RunRecord>> perRun(static_cast<std::size_t>(cfg.runs));
  const int workers = std::min(cfg.jobs, cfg.runs);
  if (workers <= 1) {
    for (int r = 0; r < cfg.runs; ++r) perRun[r] = run_one(cfg, r, cfg.seed + static_cast<std::uint64_t>(r));
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < cfg.runs; r += workers) perRun[r] = run_one(cfg, r, cfg.seed + static_cast<std::uint64_t>(r));
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  for (auto& rows : perRun)
    for (auto& rec : rows) result.runs.push_back(std::move(rec));
  result.table = summarize(cfg, result.runs);
  return result;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& table) {
  os << kSummaryCsvHeader << '\n';
  for (const auto& c : table) {
    os << to_string(c.method) << ',' << c.levels;
    if (c.count == 0) {
      os << ",,,,,,,\n";  // missing cell
      continue;
    }
    for (double v : {c.relErrMean, c.relErrStd, c.fpMean, c.fpStd, c.fnMean, c.fnStd, c.timeMean})
      os << ',' << format_double(v);
    os << '\n';
  }
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kRunsCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.run << ',' << r.seed << ',' << to_string(r.method) << ',' << r.levels;
    if (!r.ok) {
      os << ",,,,\n";
      continue;
    }
    for (double v : {r.metrics.relErr, r.metrics.fpRate, r.metrics.fnRate, r.metrics.runTime})
      os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace sparsecqp
