#include "semaopt/harness/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace semaopt {

namespace {

using nlohmann::json;

/// Reads the keys of one JSON object and rejects any it did not consume.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + qualified(key) + "'");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T value{};
    get(key, value);
    out = value;
  }

  std::optional<json> sub(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return std::optional<json>(std::in_place, j_.at(key));
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + qualified(item.key()) + "'");
  }

 private:
  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string default_mode(SolverType t) {
  switch (t) {
    case SolverType::Minimize: return "asa";
    case SolverType::MinMax: return "pdsm";
    case SolverType::Bilevel: return "smb";
  }
  return "asa";
}

void check_mode(SolverType t, const std::string& mode) {
  const bool ok = (t == SolverType::Minimize && (mode == "asa" || mode == "stagewise")) ||
                  (t == SolverType::MinMax && (mode == "pdsm" || mode == "pdada")) ||
                  (t == SolverType::Bilevel && (mode == "smb" || mode == "sbma"));
  if (!ok) throw ConfigError("unknown mode '" + mode + "' for solver " + to_string(t));
}

ProblemSpec parse_problem(const json& j) {
  ProblemSpec p;
  Section s(j, "problem");
  std::string kind = std::string(semaopt::to_string(p.kind));
  s.get("kind", kind);
  p.kind = parse_problem_kind(kind);
  s.get("seed", p.seed);
  s.get("dim", p.dim);
  s.get("dim_y", p.dim_y);
  s.get("rank", p.rank);
  s.get("cond", p.cond);
  s.get("lambda", p.lambda);
  s.get("sigma", p.sigma);
  s.get("clip", p.clip);
  s.get("oracle", p.oracle);
  s.get("c", p.c);
  s.get("p", p.p);
  s.get("n_pos", p.n_pos);
  s.get("n_neg", p.n_neg);
  s.get("separation", p.separation);
  s.get("start_gap", p.start_gap);
  s.get("start_seed", p.start_seed);
  s.get("fixture", p.fixture);
  s.finish();
  if (p.oracle != "gaussian" && p.oracle != "coordinate")
    throw ConfigError("unknown oracle '" + p.oracle + "'");
  require_config(!p.sigma || *p.sigma >= 0.0, "problem.sigma must be nonnegative");
  require_config(p.clip > 0.0, "problem.clip must be positive");
  return p;
}

SolverSpec parse_solver(const json& j, ProblemKind kind) {
  SolverSpec out;
  out.type = solver_type_for(kind);
  Section s(j, "solver");
  std::optional<std::string> type;
  s.get("type", type);
  if (type) {
    if (*type != to_string(out.type))
      throw ConfigError("solver type '" + *type + "' does not match problem '" +
                        std::string(semaopt::to_string(kind)) + "'");
  }
  out.mode = default_mode(out.type);
  s.get("mode", out.mode);
  check_mode(out.type, out.mode);
  std::string scaler = std::string(semaopt::to_string(out.scaler.tag));
  s.get("scaler", scaler);
  out.scaler.tag = parse_scaler_tag(scaler);
  s.get("beta2", out.scaler.beta2);
  s.get("clip_lower", out.scaler.clip_lower);
  s.get("clip_upper", out.scaler.clip_upper);
  s.get("bias_correction", out.scaler.bias_correction);
  s.get("g0", out.g0);
  s.get("g_bound", out.g_bound);
  s.get("carry_u", out.carry_u);
  s.get("exact_inverse", out.exact_inverse);
  s.get("exact_lower", out.exact_lower);
  s.finish();
  out.scaler.validate();
  return out;
}

ScheduleSpec parse_schedule(const json& j) {
  ScheduleSpec out;
  Section s(j, "schedule");
  s.get("kind", out.kind);
  s.get("eps", out.eps);
  s.get("gamma", out.gamma);
  s.get("eta", out.eta);
  s.get("eta_y", out.eta_y);
  s.get("T", out.T);
  s.get("k", out.k);
  s.get("ratio", out.ratio);
  s.finish();
  if (out.kind != "theorem" && out.kind != "decreasing" && out.kind != "explicit")
    throw ConfigError("unknown schedule kind '" + out.kind + "'");
  require_config(out.eps > 0.0, "schedule.eps must be positive");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    for (const json& v : j) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError("seeds must be nonnegative integers");
      seeds.push_back(v.get<std::uint64_t>());
    }
  } else {
    Section s(j, "seeds");
    std::size_t count = 1;
    std::uint64_t base = 0;
    s.get("count", count);
    s.get("base", base);
    s.finish();
    for (std::size_t i = 0; i < count; ++i) seeds.push_back(base + i);
  }
  require_config(!seeds.empty(), "seeds must be nonempty");
  return seeds;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::string to_string(SolverType t) {
  switch (t) {
    case SolverType::Minimize: return "minimize";
    case SolverType::MinMax: return "minmax";
    case SolverType::Bilevel: return "bilevel";
  }
  return "?";
}

SolverType solver_type_for(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Quadratic:
    case ProblemKind::PLLeastSquares:
    case ProblemKind::ReddiDrift:
      return SolverType::Minimize;
    case ProblemKind::SaddleQuadratic:
    case ProblemKind::DualPLSaddle:
    case ProblemKind::AucMinMax:
      return SolverType::MinMax;
    case ProblemKind::BilevelQuadratic:
      return SolverType::Bilevel;
  }
  return SolverType::Minimize;
}

RunSpec run_spec_from_json(const json& j) {
  RunSpec spec;
  Section s(j, "");
  const std::optional<json> problem = s.sub("problem");
  require_config(problem.has_value(), "missing 'problem' section");
  spec.problem = parse_problem(*problem);
  spec.solver = parse_solver(s.sub("solver").value_or(json::object()), spec.problem.kind);
  spec.schedule = parse_schedule(s.sub("schedule").value_or(json::object()));
  if (const std::optional<json> seeds = s.sub("seeds")) spec.seeds = parse_seeds(*seeds);
  s.get("output", spec.output);
  s.get("dense_limit", spec.dense_limit);
  s.get("fit_t_min", spec.fit_t_min);
  s.get("fit_t_max", spec.fit_t_max);
  s.finish();
  if (spec.schedule.kind == "decreasing")
    require_config(spec.solver.type == SolverType::Minimize && spec.solver.mode == "asa",
                   "the decreasing schedule applies to the asa solver only");
  if (spec.schedule.kind == "explicit" || spec.schedule.kind == "decreasing")
    require_config(spec.schedule.T > 0, "schedule.T must be positive");
  return spec;
}

json run_spec_to_json(const RunSpec& spec) {
  const ProblemSpec& p = spec.problem;
  json problem = {{"kind", semaopt::to_string(p.kind)},
                  {"seed", p.seed},
                  {"dim", p.dim},
                  {"dim_y", p.dim_y},
                  {"rank", p.rank},
                  {"cond", p.cond},
                  {"lambda", p.lambda},
                  {"oracle", p.oracle},
                  {"c", p.c},
                  {"p", p.p},
                  {"n_pos", p.n_pos},
                  {"n_neg", p.n_neg},
                  {"separation", p.separation},
                  {"start_gap", p.start_gap},
                  {"start_seed", p.start_seed}};
  if (p.sigma) problem["sigma"] = *p.sigma;
  if (std::isfinite(p.clip)) problem["clip"] = p.clip;
  if (p.fixture) problem["fixture"] = *p.fixture;
  const SolverSpec& s = spec.solver;
  json solver = {{"type", to_string(s.type)},
                 {"mode", s.mode},
                 {"scaler", semaopt::to_string(s.scaler.tag)},
                 {"beta2", s.scaler.beta2},
                 {"clip_lower", s.scaler.clip_lower},
                 {"clip_upper", s.scaler.clip_upper},
                 {"bias_correction", s.scaler.bias_correction},
                 {"g0", s.g0},
                 {"carry_u", s.carry_u},
                 {"exact_inverse", s.exact_inverse},
                 {"exact_lower", s.exact_lower}};
  if (s.g_bound) solver["g_bound"] = *s.g_bound;
  const ScheduleSpec& c = spec.schedule;
  json schedule = {{"kind", c.kind}, {"eps", c.eps},     {"gamma", c.gamma}, {"eta", c.eta},
                   {"eta_y", c.eta_y}, {"T", c.T},       {"k", c.k},         {"ratio", c.ratio}};
  return {{"problem", problem},         {"solver", solver},
          {"schedule", schedule},       {"seeds", spec.seeds},
          {"output", spec.output},      {"dense_limit", spec.dense_limit},
          {"fit_t_min", spec.fit_t_min}, {"fit_t_max", spec.fit_t_max}};
}

json parse_flat_config(const std::string& text) {
  json root = json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // A '#' inside a quoted value is kept.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* node = &root;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
      if (part.empty()) throw ConfigError("line " + std::to_string(lineno) + ": bad key '" + key + "'");
      if (dot == std::string::npos) {
        if (node->contains(part))
          throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        (*node)[part] = value;
        break;
      }
      json& child = (*node)[part];
      if (child.is_null()) child = json::object();
      if (!child.is_object())
        throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "' conflicts with a value");
      node = &child;
      start = dot + 1;
    }
  }
  return root;
}

RunSpec load_run_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  json j;
  if (first != std::string::npos && text[first] == '{') {
    j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("spec file '" + path + "' is not valid JSON");
  } else {
    j = parse_flat_config(text);
  }
  return run_spec_from_json(j);
}

std::uint64_t seed_base_from_env() {
  const char* raw = std::getenv("SEMA_OPT_SEED_BASE");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || raw[0] == '-') throw ConfigError("SEMA_OPT_SEED_BASE must be a nonnegative integer");
  return v;
}

}  // namespace semaopt
