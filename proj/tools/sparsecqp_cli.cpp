// Command-line front end: generate | quantize | solve | check | experiment | oracle.
//
// Exit codes: 0 success (or condition holds), 1 condition fails or the operation
// failed, 2 usage / malformed input, 3 infeasible, 4 node budget exhausted.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sparsecqp/bench.hpp"
#include "sparsecqp/conditions.hpp"
#include "sparsecqp/errors.hpp"
#include "sparsecqp/feasible.hpp"
#include "sparsecqp/io.hpp"
#include "sparsecqp/lp.hpp"
#include "sparsecqp/model.hpp"
#include "sparsecqp/solvers.hpp"

namespace fs = std::filesystem;
using namespace sparsecqp;
using io::json;

namespace {

enum Exit : int { kOk = 0, kFails = 1, kUsage = 2, kInfeasible = 3, kBudget = 4 };

std::string short_vec(const Vector& x) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x(i));
    os << (i ? ", " : "") << buf;
  }
  os << ']';
  return os.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct GenerateArgs {
  int n = 10, m = 4, k = 2;
  double alpha = 1.0, beta = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.k > a.n) {
    std::cerr << "error: k exceeds n\n";
    return kUsage;
  }
  const MagnitudePrior prior(a.alpha, a.beta);
  io::DataDocument doc;
  doc.instance = generate(a.n, a.m, a.k, prior, a.seed);
  io::write_text_file(a.out, io::dump(io::to_json(doc)));
  std::cout << "instance n=" << a.n << " m=" << a.m << " k=" << a.k << " seed=" << a.seed << " -> " << a.out
            << '\n';
  return kOk;
}

struct QuantizeArgs {
  std::string in, out;
  std::int64_t levels = 0;
  double step = 0.0;
  std::string boundMode = "half";
  double boundA = 0.0, boundY = 0.0;
  double alpha = 0.0, beta = 0.0;
};

int cmd_quantize(const QuantizeArgs& a) {
  io::DataDocument doc = io::document_from_json(io::read_json_file(a.in));
  if (!doc.instance) throw FormatError(a.in + " holds no instance (fields A, xTrue)");
  const Instance& inst = *doc.instance;
  const auto mode = parse_bound_mode(a.boundMode);
  if (!mode) throw InvalidArgument("unknown bound mode '" + a.boundMode + "'");
  const bool full = *mode == BoundMode::FullStep;

  auto make_spec = [&](std::span<const double> data, double boundOverride) {
    std::optional<QuantSpec> spec;
    if (a.step > 0.0) {
      spec = QuantSpec::multiplesOf(a.step, data, full ? std::optional<double>(a.step) : std::nullopt);
    } else {
      spec = QuantSpec::covering(a.levels, data, full);
    }
    if (boundOverride > 0.0) spec = QuantSpec(spec->levels(), spec->range(), boundOverride);
    return *spec;
  };
  if (a.step <= 0.0 && a.levels < 2) throw InvalidArgument("give --levels (>= 2) or --step");

  std::optional<MagnitudePrior> prior = inst.prior;
  if (a.alpha > 0.0 && a.beta > 0.0) prior.emplace(a.alpha, a.beta);
  if (!prior) throw InvalidArgument("no magnitude prior: pass --alpha and --beta");

  const QuantSpec specA = make_spec(values(inst.A), a.boundA);
  const QuantSpec specY = make_spec(values(inst.y), a.boundY);
  doc.observation = quantize(inst, specA, specY, *prior);
  io::write_text_file(a.out, io::dump(io::to_json(doc)));
  std::cout << "observation levelsA=" << specA.levels() << " levelsY=" << specY.levels()
            << " deltaA=" << format_double(specA.bound()) << " deltaY=" << format_double(specY.bound()) << " -> "
            << a.out << '\n';
  return kOk;
}

Observation load_observation(const std::string& path) {
  io::DataDocument doc = io::document_from_json(io::read_json_file(path));
  if (!doc.observation) throw FormatError(path + " holds no observation (fields QA, Qy, deltaA, deltaY)");
  return *doc.observation;
}

int report_solution(const Solution& sol, double d, const std::string& out) {
  std::cout << "status " << to_string(sol.status) << '\n';
  if (sol.status == SolveStatus::Infeasible) {
    if (!out.empty()) io::write_text_file(out, io::dump(io::to_json(sol)));
    return kInfeasible;
  }
  std::cout << "x = " << short_vec(sol.x) << '\n';
  std::cout << "objective " << format_double(sol.objective) << '\n';
  std::cout << "support {";
  const auto supp = support_of(sol.x, d);
  for (std::size_t i = 0; i < supp.size(); ++i) std::cout << (i ? ", " : "") << supp[i];
  std::cout << "}\n";
  std::cout << "nodes " << sol.nodes << " time " << format_double(sol.wallTime) << " s\n";
  if (!out.empty()) io::write_text_file(out, io::dump(io::to_json(sol)));
  return sol.status == SolveStatus::Feasible ? kBudget : kOk;
}

struct SolveArgs {
  std::string method, in, out;
  double gap = 1e-8;
  std::int64_t maxNodes = 1'000'000;
  bool debugBasis = false;
};

int cmd_solve(const SolveArgs& a) {
  const Observation obs = load_observation(a.in);
  const auto method = parse_method(a.method);
  if (!method) throw InvalidArgument("unknown method '" + a.method + "'");
  if (*method == Method::L1) {
    const Polytope poly = build_l1_polytope(obs);
    if (a.debugBasis) {
      LpProblem lp{Vector::Ones(poly.n()), poly.C, poly.g, poly.lower, poly.upper};
      LpOptions opts;
      opts.debug = &std::cerr;
      solve_lp(lp, opts);
    }
    return report_solution(solve_l1(poly), obs.prior.d(), a.out);
  }
  BnbConfig cfg;
  cfg.absGap = a.gap;
  cfg.maxNodes = a.maxNodes;
  return report_solution(solve_cqp(build_cqp_polytope(obs), obs.prior.d(), cfg), obs.prior.d(), a.out);
}

int cmd_oracle(const std::string& in, const std::string& out) {
  const Observation obs = load_observation(in);
  return report_solution(oracle_vertex_min(build_cqp_polytope(obs), obs.prior.d()), obs.prior.d(), out);
}

struct CheckArgs {
  int prop = 1;
  std::string in, out;
  double d = 0.0, alpha = 0.0, beta = 0.0, deltaY = -1.0, deltaA = -1.0;
  bool useQA = false;
  bool literal = false;
};

int cmd_check(const CheckArgs& a) {
  const json j = io::read_json_file(a.in);
  const bool wantQA = a.prop == 3 || a.useQA;
  const char* field = wantQA ? "QA" : "A";
  if (!j.contains(field)) throw FormatError(a.in + " has no '" + field + "' matrix");
  const Matrix M = io::matrix_field(j, field);
  if (M.cols() > kMaxConditionDim) {
    std::cerr << "error: n = " << M.cols() << " exceeds " << kMaxConditionDim << '\n';
    return kUsage;
  }

  const auto fileNumber = [&](const char* key) -> std::optional<double> {
    if (j.contains(key) && j.at(key).is_number()) return j.at(key).get<double>();
    return std::nullopt;
  };
  const double deltaY = a.deltaY >= 0.0 ? a.deltaY : fileNumber("deltaY").value_or(-1.0);
  if (deltaY < 0.0) throw InvalidArgument("no deltaY: pass --delta-y");
  const double alpha = a.alpha > 0.0 ? a.alpha : fileNumber("alpha").value_or(a.d);
  const double beta = a.beta > 0.0 ? a.beta : fileNumber("beta").value_or(a.d);

  const GammaSet set = a.literal ? GammaSet::Literal : GammaSet::SupportMismatch;
  ConditionReport rep;
  if (a.prop == 1) {
    const double d = a.d > 0.0 ? a.d : (alpha > 0.0 && beta > 0.0 ? MagnitudePrior(alpha, beta).d() : 0.0);
    if (!(d > 0.0)) throw InvalidArgument("no d: pass --d or --alpha/--beta");
    rep = check_prop1(M, d, deltaY);
  } else {
    if (!(alpha > 0.0 && beta > 0.0)) throw InvalidArgument("no magnitude prior: pass --alpha and --beta");
    const MagnitudePrior prior(alpha, beta);
    if (a.prop == 2) {
      rep = check_prop2(M, prior, deltaY, set);
    } else {
      const double deltaA = a.deltaA >= 0.0 ? a.deltaA : fileNumber("deltaA").value_or(-1.0);
      if (deltaA < 0.0) throw InvalidArgument("no deltaA: pass --delta-a");
      rep = check_prop3(M, prior, deltaY, deltaA, set);
    }
  }
  std::cout << "proposition " << to_string(rep.proposition) << '\n'
            << "holds " << (rep.holds ? "true" : "false") << '\n'
            << "margin " << format_double(rep.margin) << '\n'
            << "threshold " << format_double(rep.threshold) << '\n'
            << "worstGamma " << short_vec(rep.worstGamma) << '\n';
  if (!a.out.empty()) io::write_text_file(a.out, io::dump(io::to_json(rep)));
  return rep.holds ? kOk : kFails;
}

int cmd_experiment(const std::string& configPath, const std::string& outDir, int jobs) {
  ExperimentConfig cfg = io::experiment_config_from_json(io::read_json_file(configPath));
  if (jobs > 0) cfg.jobs = jobs;
  const std::string started = utc_now();
  const ExperimentResult result = run_experiment(cfg);

  fs::create_directories(outDir);
  const fs::path summary = fs::path(outDir) / "summary.csv";
  const fs::path runs = fs::path(outDir) / "runs.csv";
  const fs::path manifest = fs::path(outDir) / "manifest.json";
  std::ostringstream s1, s2;
  write_summary_csv(s1, result.table);
  write_runs_csv(s2, result.runs);
  io::write_text_file(summary, s1.str());
  io::write_text_file(runs, s2.str());

  json m;
  m["tool"] = "sparsecqp";
  m["version"] = SPARSECQP_VERSION;
  m["config"] = io::to_json(cfg);
  json seeds = json::array();
  for (int r = 0; r < cfg.runs; ++r) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(r));
  m["seeds"] = seeds;
  m["startedAt"] = started;
  m["finishedAt"] = utc_now();
  m["outputs"] = {summary.string(), runs.string(), manifest.string()};
  io::write_text_file(manifest, io::dump(m));

  int failed = 0;
  for (const auto& r : result.runs) failed += r.ok ? 0 : 1;
  std::cout << "experiment " << result.runs.size() << " cells (" << failed << " failed) -> " << summary.string()
            << ", " << runs.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery from quantized compressed measurements"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPARSECQP_VERSION);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Draw a random sparse instance");
  g->add_option("--n", gen.n, "Dimension")->required()->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "Measurements")->required()->check(CLI::PositiveNumber);
  g->add_option("--k", gen.k, "Sparsity")->required()->check(CLI::NonNegativeNumber);
  g->add_option("--alpha", gen.alpha, "Lower magnitude bound")->required();
  g->add_option("--beta", gen.beta, "Upper magnitude bound")->required();
  g->add_option("--seed", gen.seed, "RNG seed")->required();
  g->add_option("--out", gen.out, "Output instance JSON")->required();

  QuantizeArgs qa;
  auto* q = app.add_subcommand("quantize", "Quantize an instance into an observation");
  q->add_option("--in", qa.in, "Instance JSON")->required();
  q->add_option("--out", qa.out, "Output JSON (instance + observation)")->required();
  q->add_option("--levels", qa.levels, "Codebook size covering each dataset");
  q->add_option("--step", qa.step, "Use the multiples of this step as codebook");
  q->add_option("--bound-mode", qa.boundMode, "half | full")->capture_default_str();
  q->add_option("--bound-a", qa.boundA, "Explicit bound on |QA - A|");
  q->add_option("--bound-y", qa.boundY, "Explicit bound on |Qy - y|");
  q->add_option("--alpha", qa.alpha, "Override prior lower bound");
  q->add_option("--beta", qa.beta, "Override prior upper bound");

  SolveArgs sa;
  auto* s = app.add_subcommand("solve", "Recover x from an observation");
  s->add_option("--method", sa.method, "l1 | cqp")->required();
  s->add_option("--in", sa.in, "Observation JSON")->required();
  s->add_option("--out", sa.out, "Solution JSON");
  s->add_option("--gap", sa.gap, "Absolute optimality gap (cqp)")->capture_default_str();
  s->add_option("--max-nodes", sa.maxNodes, "Node budget (cqp)")->capture_default_str();
  s->add_flag("--debug-basis", sa.debugBasis, "Dump the final simplex basis to stderr (l1)");

  CheckArgs ca;
  auto* c = app.add_subcommand("check", "Check a sufficient recovery condition");
  c->add_option("--prop", ca.prop, "1 | 2 | 3")->required()->check(CLI::IsMember({1, 2, 3}));
  c->add_option("--in", ca.in, "JSON with A (P1, P2) or QA (P3)")->required();
  c->add_option("--out", ca.out, "Report JSON");
  c->add_option("--d", ca.d, "Nonzero magnitude (P1)");
  c->add_option("--alpha", ca.alpha, "Prior lower bound");
  c->add_option("--beta", ca.beta, "Prior upper bound");
  c->add_option("--delta-y", ca.deltaY, "Bound on |Qy - y|");
  c->add_option("--delta-a", ca.deltaA, "Bound on |QA - A| (P3)");
  c->add_flag("--use-qa", ca.useQA, "Check P1/P2 on QA instead of A");
  c->add_flag("--literal", ca.literal, "Quantify over every non-null gamma in Q^n (P2/P3)");

  std::string cfgPath, outDir = ".";
  int jobs = 0;
  auto* e = app.add_subcommand("experiment", "Run a benchmark sweep");
  e->add_option("--config", cfgPath, "Experiment config JSON")->required();
  e->add_option("--out-dir", outDir, "Directory for CSVs and manifest")->capture_default_str();
  e->add_option("--jobs", jobs, "Worker threads (default from config, else 1)");

  std::string oracleIn, oracleOut;
  auto* o = app.add_subcommand("oracle", "Vertex-enumeration reference minimizer (n <= 12)");
  o->add_option("--in", oracleIn, "Observation JSON")->required();
  o->add_option("--out", oracleOut, "Solution JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*q) return cmd_quantize(qa);
    if (*s) return cmd_solve(sa);
    if (*c) return cmd_check(ca);
    if (*e) return cmd_experiment(cfgPath, outDir, jobs);
    if (*o) return cmd_oracle(oracleIn, oracleOut);
  } catch (const DimensionTooLarge& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const FormatError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const InvalidDimension& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kFails;
  }
  return kUsage;
}
