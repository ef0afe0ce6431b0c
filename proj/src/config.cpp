#include "sigloc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace sigloc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

struct RawConfig {
  // section.key -> (value, line)
  std::unordered_map<std::string, std::pair<std::string, int>> values;
};

const std::unordered_map<std::string, std::unordered_set<std::string>>
    kSchema = {
        {"model", {"family", "m", "t_perp", "disorder", "flux"}},
        {"dirac", {"n", "rho", "mu", "shifted"}},
        {"localizer", {"kappa", "practical"}},
        {"run", {"seed", "samples", "volumes", "boundary", "workers"}},
        {"oracle", {"grid"}},
        {"sweep", {"kappas", "rhos"}},
        {"output", {"path", "format"}},
        {"tolerances", {"zero_tol"}},
};

class Parser {
 public:
  explicit Parser(const std::string& text) {
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      line = trim(strip_comment(line));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(lineno, "unterminated section header");
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        if (!kSchema.count(section))
          error(lineno, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        error(lineno, "expected key = value");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section.empty()) {
        error(lineno, "key outside any section: " + key);
        continue;
      }
      auto sch = kSchema.find(section);
      if (sch != kSchema.end() && !sch->second.count(key)) {
        error(lineno, "unknown key " + section + "." + key);
        continue;
      }
      if (!raw_.values.emplace(section + "." + key,
                               std::make_pair(value, lineno)).second)
        error(lineno, "duplicate key " + section + "." + key);
    }
  }

  std::optional<std::string> get(const std::string& dotted) {
    auto it = raw_.values.find(dotted);
    if (it == raw_.values.end()) return std::nullopt;
    used_.insert(dotted);
    return it->second.first;
  }

  void error(int line, const std::string& msg) {
    errors_.push_back("line " + std::to_string(line) + ": " + msg);
  }
  void error(const std::string& msg) { errors_.push_back(msg); }

  double number(const std::string& dotted, double fallback) {
    auto v = get(dotted);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("trailing characters");
      return x;
    } catch (const std::exception&) {
      error(dotted + ": not a number: '" + *v + "'");
      return fallback;
    }
  }

  long long integer(const std::string& dotted, long long fallback) {
    auto v = get(dotted);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("trailing characters");
      return x;
    } catch (const std::exception&) {
      error(dotted + ": not an integer: '" + *v + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& dotted, bool fallback) {
    auto v = get(dotted);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    error(dotted + ": not a boolean: '" + *v + "'");
    return fallback;
  }

  template <typename T, typename Conv>
  std::vector<T> array(const std::string& dotted, std::vector<T> fallback,
                       Conv conv) {
    auto v = get(dotted);
    if (!v) return fallback;
    std::string s = trim(*v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      error(dotted + ": expected a bracketed array");
      return fallback;
    }
    s = s.substr(1, s.size() - 2);
    std::vector<T> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(conv(item));
      } catch (const std::exception&) {
        error(dotted + ": bad array element '" + item + "'");
        return fallback;
      }
    }
    return out;
  }

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  RawConfig raw_;
  std::unordered_set<std::string> used_;
  std::vector<std::string> errors_;
};

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& errs)
    : std::runtime_error(errs.empty() ? "config error"
                                      : "config error: " + errs.front()),
      errors(errs) {}

ParseOutcome parse_config(const std::string& text) {
  Parser p(text);
  RunConfig cfg;

  if (auto fam = p.get("model.family")) {
    try {
      cfg.model.family = family_from_string(*fam);
    } catch (const std::exception& e) {
      p.error(std::string("model.family: ") + e.what());
    }
  } else {
    p.error("model.family is required");
  }
  cfg.model.m = p.number("model.m", cfg.model.m);
  cfg.model.t_perp = p.number("model.t_perp", cfg.model.t_perp);
  cfg.model.disorder = p.number("model.disorder", cfg.model.disorder);
  if (cfg.model.disorder < 0) p.error("model.disorder must be >= 0");
  if (auto fx = p.get("model.flux")) {
    const auto slash = fx->find('/');
    try {
      if (slash == std::string::npos) {
        cfg.model.flux_p = std::stoi(*fx);
        cfg.model.flux_q = 1;
      } else {
        cfg.model.flux_p = std::stoi(fx->substr(0, slash));
        cfg.model.flux_q = std::stoi(fx->substr(slash + 1));
      }
      if (cfg.model.flux_q < 1) p.error("model.flux: denominator must be >= 1");
    } catch (const std::exception&) {
      p.error("model.flux: expected p/q");
    }
  }

  cfg.n = static_cast<int>(p.integer("dirac.n", -1));
  cfg.rho = p.number("dirac.rho", 0);
  cfg.mu = p.number("dirac.mu", 0);
  cfg.shifted = p.boolean("dirac.shifted", true);

  if (auto kap = p.get("localizer.kappa")) {
    if (*kap == "auto") {
      cfg.kappa = std::nullopt;
    } else {
      try {
        cfg.kappa = std::stod(*kap);
        if (*cfg.kappa <= 0) p.error("localizer.kappa must be positive");
      } catch (const std::exception&) {
        p.error("localizer.kappa: number or 'auto'");
      }
    }
  }
  cfg.practical = p.boolean("localizer.practical", false);

  cfg.seed = static_cast<std::uint64_t>(p.integer("run.seed", 0));
  cfg.samples = static_cast<int>(p.integer("run.samples", 1));
  cfg.workers = static_cast<int>(p.integer("run.workers", 1));
  cfg.volumes = p.array<int>("run.volumes", cfg.volumes, [](const std::string& s) {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad int");
    return v;
  });
  if (auto b = p.get("run.boundary")) {
    if (*b == "periodic") cfg.volume_boundary = Boundary::Periodic;
    else if (*b == "dirichlet") cfg.volume_boundary = Boundary::Dirichlet;
    else p.error("run.boundary: periodic or dirichlet");
  }

  cfg.oracle_grid = static_cast<int>(p.integer("oracle.grid", 40));
  auto to_double = [](const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number");
    return v;
  };
  cfg.sweep_kappas = p.array<double>("sweep.kappas", {}, to_double);
  cfg.sweep_rhos = p.array<double>("sweep.rhos", {}, to_double);

  if (auto path = p.get("output.path")) cfg.out_path = *path;
  if (auto fmtv = p.get("output.format")) {
    if (*fmtv == "csv" || *fmtv == "json") cfg.format = *fmtv;
    else p.error("output.format: csv or json");
  }
  if (auto zt = p.get("tolerances.zero_tol")) {
    try {
      cfg.zero_tol = std::stod(*zt);
    } catch (const std::exception&) {
      p.error("tolerances.zero_tol: not a number");
    }
  }

  std::vector<std::string> errors = p.errors();

  // Cross-field constraints (only when the basics parsed).
  if (errors.empty()) {
    const int d = cfg.model.dimension();
    if (cfg.n < 0) cfg.n = cfg.model.strong_axes();
    if (cfg.n < 1 || cfg.n > d)
      errors.push_back("dirac.n: pairing directions exceed the model dimension");
    if (cfg.samples < 1) errors.push_back("run.samples must be >= 1");
    if (cfg.workers < 1) errors.push_back("run.workers must be >= 1");
    if (cfg.oracle_grid < 4) errors.push_back("oracle.grid too small");
    if (!cfg.shifted && cfg.mu <= 0)
      errors.push_back("dirac.shifted = false requires dirac.mu > 0");
    for (std::size_t i = 1; i < cfg.volumes.size(); ++i)
      if (cfg.volumes[i] <= cfg.volumes[i - 1]) {
        errors.push_back("run.volumes must be strictly increasing");
        break;
      }
  }

  ParseOutcome out;
  out.errors = std::move(errors);
  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

ParseOutcome parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    ParseOutcome out;
    out.errors.push_back("cannot open config file " + path);
    return out;
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

WeakRunConfig RunConfig::weak_config() const {
  WeakRunConfig w;
  w.model = model;
  w.weak_directions = n > 0 && n < model.dimension() ? n : model.weak_axes();
  w.rho = rho;
  w.kappa = kappa.value_or(0);
  w.practical = practical;
  w.volumes = volumes;
  w.volume_boundary = volume_boundary;
  w.samples = samples;
  w.seed = seed;
  return w;
}

}  // namespace sigloc
