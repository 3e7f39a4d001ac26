#include "nnecon/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nnecon::harness {

namespace {

struct Entry {
  std::string value;
  int line;
};

const std::vector<std::string> kCommonNumeric = {"alpha", "beta", "delta", "p_r",
                                                 "q_max", "p_t",  "gamma"};
const std::vector<std::string> kSubscriptionNumeric = {"D0", "rho"};
const std::vector<std::string> kAdNumeric = {"D0_0", "K", "MB", "v_max", "mu", "sigma"};
const std::vector<std::string> kTextKeys = {"model", "dist",   "sweep",
                                            "series", "bargain", "output"};

bool contains(const std::vector<std::string>& v, std::string_view key) {
  return std::find(v.begin(), v.end(), key) != v.end();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const Entry& entry(const std::string& key) const { return entries_.at(key); }

  std::optional<double> number(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    const auto v = to_number(it->second.value);
    if (!v) throw ParseError(it->second.line, "invalid number for " + key);
    return v;
  }

  double required(const std::string& key) const {
    const auto v = number(key);
    if (!v) throw ValidationError(key, "required");
    return *v;
  }

 private:
  std::map<std::string, Entry> entries_;
};

void check_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ValidationError(key, "must be > 0");
}

void check_nonnegative(const std::string& key, double v) {
  if (!(v >= 0.0)) throw ValidationError(key, "must be >= 0");
}

void check_unit(const std::string& key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(key, "must lie in [0, 1]");
}

void check_range(const std::string& key, double v) {
  if (key == "D0" || key == "D0_0") {
    check_nonnegative(key, v);
  } else if (key == "delta" || key == "gamma") {
    check_unit(key, v);
  } else if (key != "p_t") {
    check_positive(key, v);
  }
}

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (!contains(kCommonNumeric, key) && !contains(kSubscriptionNumeric, key) &&
        !contains(kAdNumeric, key) && !contains(kTextKeys, key)) {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }
  return entries;
}

SweepSpec parse_sweep(const Reader& r, ModelKind model) {
  const Entry& e = r.entry("sweep");
  const auto parts = split_commas(e.value);
  if (parts.size() != 4) throw ValidationError("sweep", "expected <var>,<start>,<stop>,<steps>");
  SweepSpec s;
  s.var = std::string(parts[0]);
  if (!contains(sweepable_keys(model), s.var)) {
    throw ValidationError("sweep", "'" + s.var + "' is not a numeric parameter of this model");
  }
  const auto start = to_number(parts[1]);
  const auto stop = to_number(parts[2]);
  const auto steps = to_number(parts[3]);
  if (!start || !stop || !steps) throw ParseError(e.line, "invalid number in sweep");
  if (*steps != std::floor(*steps) || *steps < 2.0) {
    throw ValidationError("sweep", "steps must be an integer >= 2");
  }
  s.start = *start;
  s.stop = *stop;
  s.steps = static_cast<int>(*steps);
  return s;
}

SeriesSpec parse_series(const Reader& r, ModelKind model) {
  const Entry& e = r.entry("series");
  const auto parts = split_commas(e.value);
  if (parts.size() < 2) throw ValidationError("series", "expected <var>,<value>[,<value>...]");
  SeriesSpec s;
  s.var = std::string(parts[0]);
  if (!contains(sweepable_keys(model), s.var)) {
    throw ValidationError("series", "'" + s.var + "' is not a numeric parameter of this model");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto v = to_number(parts[i]);
    if (!v) throw ParseError(e.line, "invalid number in series");
    s.values.push_back(*v);
  }
  return s;
}

}  // namespace

const std::vector<std::string>& sweepable_keys(ModelKind model) {
  static const std::vector<std::string> sub = {"D0",  "alpha", "beta", "rho",  "delta",
                                               "p_r", "q_max", "p_t",  "gamma"};
  static const std::vector<std::string> ad = {"D0_0",  "K",     "MB",  "v_max", "mu",
                                              "sigma", "alpha", "beta", "delta", "p_r",
                                              "q_max", "p_t",   "gamma"};
  return model == ModelKind::Subscription ? sub : ad;
}

ScenarioConfig parse_config(std::string_view text) {
  const Reader r(tokenize(text));
  ScenarioConfig cfg;

  if (!r.has("model")) throw ValidationError("model", "required");
  const std::string& model = r.entry("model").value;
  if (model == "subscription") {
    cfg.model = ModelKind::Subscription;
  } else if (model == "advertisement" || model == "ad") {
    cfg.model = ModelKind::Advertisement;
  } else {
    throw ValidationError("model", "must be subscription or advertisement");
  }
  const bool sub = cfg.model == ModelKind::Subscription;

  for (const auto& key : sub ? kAdNumeric : kSubscriptionNumeric) {
    if (r.has(key)) throw ValidationError(key, std::string("not used by the ") + model + " model");
  }
  if (sub && r.has("dist")) throw ValidationError("dist", "not used by the subscription model");

  auto number_or = [&](const std::string& key, double fallback) {
    const double v = r.number(key).value_or(fallback);
    check_range(key, v);
    return v;
  };
  auto required = [&](const std::string& key) {
    const double v = r.required(key);
    check_range(key, v);
    return v;
  };

  const double alpha = required("alpha");
  const double beta = required("beta");
  const double p_r = required("p_r");
  const double delta = number_or("delta", 0.0);
  const double q_max = number_or("q_max", 10.0);
  const double p_t = number_or("p_t", 0.0);
  if (!(4.0 * alpha * p_r > beta * beta)) {
    throw ValidationError("beta", "must satisfy 4 alpha p_r > beta^2");
  }

  if (sub) {
    cfg.subscription = SubscriptionParams{required("D0"), alpha, beta, required("rho"),
                                          delta,          p_r,   q_max, p_t};
  } else {
    AdParams& a = cfg.ad;
    a.D0_0 = number_or("D0_0", 0.0);
    a.K = required("K");
    a.MB = required("MB");
    if (!r.has("dist")) throw ValidationError("dist", "required");
    const std::string& dist = r.entry("dist").value;
    if (dist == "uniform") {
      if (r.has("mu") || r.has("sigma")) {
        throw ValidationError(r.has("mu") ? "mu" : "sigma", "not used by the uniform distribution");
      }
      a.dist = ValuationDistribution::uniform(required("v_max"));
    } else if (dist == "normal") {
      if (r.has("v_max")) throw ValidationError("v_max", "not used by the normal distribution");
      a.dist = ValuationDistribution::normal(required("mu"), required("sigma"));
    } else {
      throw ValidationError("dist", "must be uniform or normal");
    }
    a.alpha = alpha;
    a.beta = beta;
    a.delta = delta;
    a.p_r = p_r;
    a.q_max = q_max;
    a.p_t = p_t;
  }

  if (r.has("bargain")) {
    const std::string& timing = r.entry("bargain").value;
    BargainSetting b;
    if (timing == "pre") {
      b.timing = BargainTiming::Pre;
    } else if (timing == "post") {
      b.timing = BargainTiming::Post;
    } else {
      throw ValidationError("bargain", "must be pre or post");
    }
    b.gamma = number_or("gamma", 0.5);
    if (delta != 0.0) throw ValidationError("delta", "must be 0 when bargaining");
    cfg.bargain = b;
  } else if (r.has("gamma")) {
    throw ValidationError("gamma", "requires bargain=pre or bargain=post");
  }

  if (r.has("sweep")) cfg.sweep = parse_sweep(r, cfg.model);
  if (r.has("series")) {
    cfg.series = parse_series(r, cfg.model);
    if (cfg.sweep && cfg.sweep->var == cfg.series->var) {
      throw ValidationError("series", "cannot vary the swept parameter");
    }
  }
  auto check_varied = [&](const char* key, const std::string& var) {
    if (var == "p_t" && cfg.bargain) throw ValidationError(key, "p_t is set by bargaining");
    if (var == "gamma" && !cfg.bargain) throw ValidationError(key, "gamma requires bargain");
  };
  if (cfg.sweep) check_varied("sweep", cfg.sweep->var);
  if (cfg.series) check_varied("series", cfg.series->var);

  if (r.has("output")) cfg.output = r.entry("output").value;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ScenarioConfig with_value(const ScenarioConfig& cfg, const std::string& key, double value) {
  ScenarioConfig out = cfg;
  if (key == "gamma") {
    if (!out.bargain) throw ValidationError(key, "requires bargain");
    out.bargain->gamma = value;
    return out;
  }
  if (cfg.model == ModelKind::Subscription) {
    SubscriptionParams& p = out.subscription;
    if (key == "D0") p.D0 = value;
    else if (key == "alpha") p.alpha = value;
    else if (key == "beta") p.beta = value;
    else if (key == "rho") p.rho = value;
    else if (key == "delta") p.delta = value;
    else if (key == "p_r") p.p_r = value;
    else if (key == "q_max") p.q_max = value;
    else if (key == "p_t") p.p_t = value;
    else throw ValidationError(key, "not a subscription parameter");
    return out;
  }

  AdParams& a = out.ad;
  const auto& shape = a.dist.shape();
  if (key == "D0_0") a.D0_0 = value;
  else if (key == "K") a.K = value;
  else if (key == "MB") a.MB = value;
  else if (key == "alpha") a.alpha = value;
  else if (key == "beta") a.beta = value;
  else if (key == "delta") a.delta = value;
  else if (key == "p_r") a.p_r = value;
  else if (key == "q_max") a.q_max = value;
  else if (key == "p_t") a.p_t = value;
  else if (key == "v_max" && a.dist.is_uniform()) a.dist = ValuationDistribution::uniform(value);
  else if (key == "mu" && !a.dist.is_uniform())
    a.dist = ValuationDistribution::normal(value, std::get<NormalValuation>(shape).sigma);
  else if (key == "sigma" && !a.dist.is_uniform())
    a.dist = ValuationDistribution::normal(std::get<NormalValuation>(shape).mu, value);
  else throw ValidationError(key, "not a parameter of this advertisement market");
  return out;
}

}  // namespace nnecon::harness
