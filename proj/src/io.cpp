#include "sparsecqp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sparsecqp/errors.hpp"

namespace sparsecqp::io {

namespace {

json flat(const Matrix& M) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) arr.push_back(M(i, j));
  return arr;
}

json vec(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) arr.push_back(v(i));
    else arr.push_back(nullptr);  // +inf bound
  }
  return arr;
}

double number(const json& j, const char* what) {
  if (j.is_null()) return INFINITY;
  if (!j.is_number()) throw FormatError(std::string("expected a number in ") + what);
  return j.get<double>();
}

Vector read_vector(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("field '") + what + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

Matrix read_matrix(const json& j, const char* what, std::optional<Eigen::Index> rows,
                   std::optional<Eigen::Index> cols) {
  if (!j.is_array()) throw FormatError(std::string("field '") + what + "' must be an array");
  if (!j.empty() && j.front().is_array()) {
    const auto r = static_cast<Eigen::Index>(j.size());
    const auto c = static_cast<Eigen::Index>(j.front().size());
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      const json& row = j[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
        throw FormatError(std::string("ragged rows in '") + what + "'");
      }
      for (Eigen::Index k = 0; k < c; ++k) M(i, k) = number(row[static_cast<std::size_t>(k)], what);
    }
    return M;
  }
  if (!rows || !cols) throw FormatError(std::string("flat matrix '") + what + "' needs its dimensions");
  if (static_cast<Eigen::Index>(j.size()) != *rows * *cols) {
    throw FormatError(std::string("matrix '") + what + "' has " + std::to_string(j.size()) + " entries, expected " +
                      std::to_string(*rows * *cols));
  }
  Matrix M(*rows, *cols);
  for (Eigen::Index i = 0; i < *rows; ++i)
    for (Eigen::Index k = 0; k < *cols; ++k) M(i, k) = number(j[static_cast<std::size_t>(i * *cols + k)], what);
  return M;
}

template <typename T>
std::optional<T> opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T req(const json& j, const char* key) {
  auto v = opt<T>(j, key);
  if (!v) throw FormatError(std::string("missing field '") + key + "'");
  return *v;
}

void dump_into(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) os << format_double(v);
      else os << "null";
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        break;
      }
      // Numeric arrays stay on one line.
      const bool scalars = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        if (!scalars) newline(depth + 1);
        else if (!first && indent >= 0) os << ' ';
        dump_into(os, e, indent, depth + 1);
        first = false;
      }
      if (!scalars) newline(depth);
      os << ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        newline(depth + 1);
        os << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        dump_into(os, it.value(), indent, depth + 1);
        first = false;
      }
      newline(depth);
      os << '}';
      break;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::ostringstream os;
  dump_into(os, j, indent, 0);
  if (indent >= 0) os << '\n';
  return os.str();
}

json to_json(const DataDocument& doc) {
  json j = json::object();
  if (doc.instance) {
    const Instance& inst = *doc.instance;
    j["n"] = inst.n();
    j["m"] = inst.m();
    j["k"] = inst.k;
    if (inst.prior) {
      j["alpha"] = inst.prior->alpha();
      j["beta"] = inst.prior->beta();
    }
    j["A"] = flat(inst.A);
    j["xTrue"] = vec(inst.xTrue);
    j["y"] = vec(inst.y);
    if (inst.seed) j["seed"] = *inst.seed;
  }
  if (doc.observation) {
    const Observation& obs = *doc.observation;
    j["n"] = obs.n();
    j["m"] = obs.m();
    j["alpha"] = obs.prior.alpha();
    j["beta"] = obs.prior.beta();
    j["QA"] = flat(obs.QA);
    j["Qy"] = vec(obs.Qy);
    j["deltaA"] = obs.deltaA;
    j["deltaY"] = obs.deltaY;
  }
  if (doc.polytope) {
    const Polytope& poly = *doc.polytope;
    j["n"] = poly.n();
    j["C"] = flat(poly.C);
    j["g"] = vec(poly.g);
    j["lower"] = vec(poly.lower);
    j["upper"] = vec(poly.upper);
  }
  return j;
}

DataDocument document_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("data document must be a JSON object");
  DataDocument doc;
  const auto n = opt<Eigen::Index>(j, "n");
  const auto m = opt<Eigen::Index>(j, "m");
  std::optional<MagnitudePrior> prior;
  const auto alpha = opt<double>(j, "alpha");
  const auto beta = opt<double>(j, "beta");
  if (alpha && beta) prior.emplace(*alpha, *beta);

  if (j.contains("A")) {
    Matrix A = read_matrix(j.at("A"), "A", m, n);
    Vector x = read_vector(j.at("xTrue"), "xTrue");
    Instance inst = Instance::fromTruth(std::move(A), std::move(x));
    if (j.contains("y")) {
      inst.y = read_vector(j.at("y"), "y");
      if (inst.y.size() != inst.m()) throw FormatError("y length does not match A rows");
    }
    if (auto k = opt<int>(j, "k")) inst.k = *k;
    inst.prior = prior;
    inst.seed = opt<std::uint64_t>(j, "seed");
    doc.instance = std::move(inst);
  }
  if (j.contains("QA")) {
    Observation obs;
    obs.QA = read_matrix(j.at("QA"), "QA", m, n);
    obs.Qy = read_vector(j.at("Qy"), "Qy");
    if (obs.Qy.size() != obs.m()) throw FormatError("Qy length does not match QA rows");
    obs.deltaA = req<double>(j, "deltaA");
    obs.deltaY = req<double>(j, "deltaY");
    if (!prior) throw FormatError("observation needs 'alpha' and 'beta'");
    obs.prior = *prior;
    doc.observation = std::move(obs);
  }
  if (j.contains("C")) {
    Polytope poly;
    poly.g = read_vector(j.at("g"), "g");
    poly.C = read_matrix(j.at("C"), "C", poly.g.size(), n);
    poly.lower = read_vector(j.at("lower"), "lower");
    poly.upper = read_vector(j.at("upper"), "upper");
    doc.polytope = std::move(poly);
  }
  return doc;
}

Matrix matrix_field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return read_matrix(doc.at(key), key, opt<Eigen::Index>(doc, "m"), opt<Eigen::Index>(doc, "n"));
}

json to_json(const Solution& sol) {
  json j;
  j["x"] = vec(sol.x);
  j["objective"] = sol.objective;
  j["status"] = std::string(to_string(sol.status));
  j["nodes"] = sol.nodes;
  j["wallTime"] = sol.wallTime;
  return j;
}

json to_json(const ConditionReport& rep) {
  json j;
  j["proposition"] = std::string(to_string(rep.proposition));
  j["holds"] = rep.holds;
  j["margin"] = rep.margin;
  j["threshold"] = rep.threshold;
  j["worstGamma"] = vec(rep.worstGamma);
  return j;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["k"] = cfg.k;
  j["alpha"] = cfg.prior.alpha();
  j["beta"] = cfg.prior.beta();
  j["levels"] = cfg.levels;
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  json methods = json::array();
  for (Method meth : cfg.methods) methods.push_back(std::string(to_string(meth)));
  j["methods"] = methods;
  j["boundMode"] = std::string(to_string(cfg.boundMode));
  j["absGap"] = cfg.bnb.absGap;
  j["maxNodes"] = cfg.bnb.maxNodes;
  j["jobs"] = cfg.jobs;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("experiment config must be a JSON object");
  static const std::set<std::string> known = {"n",    "m",    "k",       "alpha",     "beta",   "levels", "runs",
                                              "seed", "methods", "boundMode", "absGap", "maxNodes", "jobs"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw FormatError("unknown config field '" + it.key() + "'");
  }
  ExperimentConfig cfg;
  cfg.n = req<int>(j, "n");
  cfg.m = req<int>(j, "m");
  cfg.k = req<int>(j, "k");
  try {
    cfg.prior = MagnitudePrior(req<double>(j, "alpha"), req<double>(j, "beta"));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  cfg.levels = req<std::vector<std::int64_t>>(j, "levels");
  cfg.runs = opt<int>(j, "runs").value_or(cfg.runs);
  cfg.seed = opt<std::uint64_t>(j, "seed").value_or(cfg.seed);
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : req<std::vector<std::string>>(j, "methods")) {
      auto meth = parse_method(name);
      if (!meth) throw FormatError("unknown method '" + name + "'");
      cfg.methods.push_back(*meth);
    }
  }
  if (auto mode = opt<std::string>(j, "boundMode")) {
    auto parsed = parse_bound_mode(*mode);
    if (!parsed) throw FormatError("unknown boundMode '" + *mode + "'");
    cfg.boundMode = *parsed;
  }
  cfg.bnb.absGap = opt<double>(j, "absGap").value_or(cfg.bnb.absGap);
  cfg.bnb.maxNodes = opt<std::int64_t>(j, "maxNodes").value_or(cfg.bnb.maxNodes);
  cfg.jobs = opt<int>(j, "jobs").value_or(cfg.jobs);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace sparsecqp::io
