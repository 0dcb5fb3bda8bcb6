#include "hypocal/io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hypocal::io {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& file, int line, const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw ParseError(file, line, "empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ParseError(file, line, "not a number: '" + t + "'");
  return v;
}

long parse_long(const std::string& file, int line, const std::string& token) {
  const double v = parse_double(file, line, token);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw ParseError(file, line, "not an integer: '" + token + "'");
  return l;
}

// key -> (line, value) collected per section
struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<int, std::string>> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
};

struct RawConfig {
  std::string file;
  std::map<std::string, std::pair<int, std::string>> top;
  std::vector<Section> sections;
};

RawConfig read_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  RawConfig raw;
  raw.file = path;
  Section* current = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(path, line_no, "unterminated section header");
      raw.sections.push_back(Section{trim(line.substr(1, line.size() - 2)), line_no, {}});
      current = &raw.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    auto& dest = current ? current->kv : raw.top;
    if (dest.count(key)) throw ParseError(path, line_no, "duplicate key '" + key + "'");
    dest[key] = {line_no, value};
  }
  return raw;
}

double get_double(const RawConfig& raw, const Section& s, const std::string& key) {
  const auto it = s.kv.find(key);
  if (it == s.kv.end())
    throw ParseError(raw.file, s.line, "[" + s.name + "] missing key '" + key + "'");
  return parse_double(raw.file, it->second.first, it->second.second);
}

void load_test_section(const RawConfig& raw, const Section& s, RunConfig& cfg, int index) {
  TestEntry entry;
  const auto kind_it = s.kv.find("kind");
  if (kind_it == s.kv.end())
    throw ParseError(raw.file, s.line, "[test] missing key 'kind'");
  const std::string kind = kind_it->second.second;
  if (kind == "oedometer") {
    entry.spec.kind = TestKind::Oedometer;
  } else if (kind == "triaxial") {
    entry.spec.kind = TestKind::TriaxialDrained;
  } else {
    throw ParseError(raw.file, kind_it->second.first,
                     "kind must be 'oedometer' or 'triaxial', got '" + kind + "'");
  }

  entry.spec.initial.T1 = get_double(raw, s, "T1");
  entry.spec.initial.T2 = get_double(raw, s, "T2");
  entry.spec.initial.e = get_double(raw, s, "e");
  if (cfg.stresses_positive) {
    entry.spec.initial.T1 = -std::abs(entry.spec.initial.T1);
    entry.spec.initial.T2 = -std::abs(entry.spec.initial.T2);
  }
  if (entry.spec.kind == TestKind::Oedometer)
    entry.spec.e_fin = get_double(raw, s, "e_fin");
  else
    entry.spec.eps_fin = get_double(raw, s, "eps_fin");
  if (s.has("n_step"))
    entry.spec.n_step = static_cast<int>(
        parse_long(raw.file, s.kv.at("n_step").first, s.kv.at("n_step").second));

  entry.name = s.has("name")
                   ? s.kv.at("name").second
                   : (kind + std::to_string(index));
  if (s.has("data")) {
    const fs::path p = s.kv.at("data").second;
    entry.data_path = p.is_absolute() ? p.string() : (fs::path(cfg.base_dir) / p).string();
  }

  try {
    validate(entry.spec);
  } catch (const DomainError& e) {
    throw ParseError(raw.file, s.line, "[test] " + entry.name + ": " + e.what());
  }
  cfg.tests.push_back(std::move(entry));
}

void load_params_section(const RawConfig& raw, const Section& s, RunConfig& cfg) {
  HypoParams p{};
  p.phi_c = deg_to_rad(get_double(raw, s, "phi_c_deg"));
  p.h_s = get_double(raw, s, "h_s");
  p.n = get_double(raw, s, "n");
  p.e_d0 = get_double(raw, s, "e_d0");
  p.e_c0 = get_double(raw, s, "e_c0");
  p.e_i0 = get_double(raw, s, "e_i0");
  p.alpha = get_double(raw, s, "alpha");
  p.beta = get_double(raw, s, "beta");
  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ParseError(raw.file, s.line, std::string("[params] ") + e.what());
  }
  cfg.params = p;
}

void load_ga_section(const RawConfig& raw, const Section& s, RunConfig& cfg) {
  GaConfig& ga = cfg.ga;
  const auto opt_double = [&](const std::string& key, double& dest) {
    if (s.has(key)) dest = parse_double(raw.file, s.kv.at(key).first, s.kv.at(key).second);
  };
  if (s.has("n_individuals"))
    ga.n_individuals = static_cast<int>(
        parse_long(raw.file, s.kv.at("n_individuals").first, s.kv.at("n_individuals").second));
  if (s.has("n_iterations"))
    ga.n_iterations = static_cast<int>(
        parse_long(raw.file, s.kv.at("n_iterations").first, s.kv.at("n_iterations").second));
  opt_double("elite_fraction", ga.elite_fraction);
  opt_double("mating_fraction", ga.mating_fraction);
  opt_double("mutation_start", ga.mutation_start);
  opt_double("mutation_end", ga.mutation_end);
  opt_double("lambda_d", ga.lambda_d);
  opt_double("lambda_i", ga.lambda_i);
  opt_double("w1", ga.weights.w1);
  opt_double("w2", ga.weights.w2);
  opt_double("w3", ga.weights.w3);
  if (s.has("seed"))
    ga.seed = static_cast<std::uint64_t>(
        parse_long(raw.file, s.kv.at("seed").first, s.kv.at("seed").second));
  cfg.has_ga = true;
}

void load_bounds_section(const RawConfig& raw, const Section& s, RunConfig& cfg) {
  const char* keys[kNumSearchParams] = {"phi_c_deg", "h_s", "n", "e_c0", "alpha", "beta"};
  for (int j = 0; j < kNumSearchParams; ++j) {
    const auto it = s.kv.find(keys[j]);
    if (it == s.kv.end())
      throw ParseError(raw.file, s.line, std::string("[bounds] missing key '") + keys[j] + "'");
    std::istringstream iss(it->second.second);
    std::string lo_tok, hi_tok, extra;
    if (!(iss >> lo_tok >> hi_tok) || (iss >> extra))
      throw ParseError(raw.file, it->second.first,
                       std::string("[bounds] ") + keys[j] + " needs exactly two values");
    double lo = parse_double(raw.file, it->second.first, lo_tok);
    double hi = parse_double(raw.file, it->second.first, hi_tok);
    if (j == 0) {
      lo = deg_to_rad(lo);
      hi = deg_to_rad(hi);
    }
    cfg.ga.bounds_min[j] = lo;
    cfg.ga.bounds_max[j] = hi;
  }
  cfg.has_bounds = true;
}

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

json params_json(const HypoParams& p) {
  return json{{"phi_c_deg", rad_to_deg(p.phi_c)}, {"h_s_kPa", p.h_s}, {"n", p.n},
              {"e_d0", p.e_d0},                   {"e_c0", p.e_c0},   {"e_i0", p.e_i0},
              {"alpha", p.alpha},                 {"beta", p.beta}};
}

// display transform per search coordinate: degrees for phi_c, GPa for h_s
double display_value(int j, double v) {
  if (j == 0) return rad_to_deg(v);
  if (j == 1) return v * 1e-6;
  return v;
}

const char* display_name(int j) {
  static const char* names[kNumSearchParams] = {"phi_c_deg", "h_s_GPa", "n",
                                                "e_c0",      "alpha",   "beta"};
  return names[j];
}

}  // namespace

RunConfig load_config(const std::string& path) {
  const RawConfig raw = read_raw(path);
  RunConfig cfg;
  cfg.base_dir = fs::path(path).parent_path().string();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";

  if (const auto it = raw.top.find("stress_sign"); it != raw.top.end()) {
    const std::string& v = it->second.second;
    if (v == "positive")
      cfg.stresses_positive = true;
    else if (v != "negative")
      throw ParseError(path, it->second.first, "stress_sign must be 'negative' or 'positive'");
  }

  int test_index = 0;
  for (const auto& s : raw.sections) {
    if (s.name == "test") {
      load_test_section(raw, s, cfg, ++test_index);
    } else if (s.name == "params") {
      load_params_section(raw, s, cfg);
    } else if (s.name == "ga") {
      load_ga_section(raw, s, cfg);
    } else if (s.name == "bounds") {
      load_bounds_section(raw, s, cfg);
    } else {
      throw ParseError(path, s.line, "unknown section [" + s.name + "]");
    }
  }
  return cfg;
}

void validate_for_mode(const RunConfig& config, Mode mode) {
  if (mode == Mode::Validate) return;
  if (config.tests.empty()) throw ConfigError("config defines no [test] sections");
  if (mode == Mode::Simulate) {
    if (!config.params) throw ConfigError("simulate mode requires a [params] section");
    return;
  }
  // calibrate / ensemble
  if (!config.has_bounds) throw ConfigError("calibration requires a [bounds] section");
  int n_oedo = 0, n_triax = 0;
  for (const auto& t : config.tests) {
    if (t.data_path.empty())
      throw ConfigError("test '" + t.name + "' has no data file");
    (t.spec.kind == TestKind::Oedometer ? n_oedo : n_triax) += 1;
  }
  if (n_oedo < 1 || n_triax < 1)
    throw ConfigError("calibration needs at least one oedometer and one triaxial test");
  validate(config.ga);
}

ExperimentalDataset load_dataset(const std::vector<TestEntry>& entries,
                                 bool stresses_positive) {
  ExperimentalDataset data;
  for (const auto& entry : entries) {
    std::ifstream in(entry.data_path);
    if (!in) throw ParseError(entry.data_path, 0, "cannot open file");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError(entry.data_path, 1, "empty file");
    ++line_no;
    const std::vector<std::string> header = split(trim(line), ',');
    std::map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);

    const bool oedometric = entry.spec.kind == TestKind::Oedometer;
    const std::vector<std::string> needed =
        oedometric ? std::vector<std::string>{"T1_kPa", "e"}
                   : std::vector<std::string>{"eps_a", "q_kPa", "eps_v"};
    for (const auto& name : needed)
      if (!col.count(name))
        throw ParseError(entry.data_path, 1, "missing column '" + name + "'");

    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty()) continue;
      const std::vector<std::string> fields = split(t, ',');
      if (fields.size() < header.size())
        throw ParseError(entry.data_path, line_no, "fewer fields than header columns");
      std::array<double, 3> row{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < needed.size(); ++i)
        row[i] = parse_double(entry.data_path, line_no, fields[col[needed[i]]]);
      rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(entry.data_path, line_no + 1, "no data rows");

    ExperimentalTest test;
    test.spec = entry.spec;
    test.name = entry.name;
    const int m = static_cast<int>(rows.size());
    if (oedometric) {
      test.oedometer.resize(m, 2);
      for (int i = 0; i < m; ++i) {
        double T1 = rows[i][0];
        if (stresses_positive) T1 = -std::abs(T1);
        test.oedometer(i, 0) = T1;
        test.oedometer(i, 1) = rows[i][1];
      }
    } else {
      test.deviatoric.resize(m, 2);
      test.volumetric.resize(m, 2);
      for (int i = 0; i < m; ++i) {
        test.deviatoric(i, 0) = rows[i][0];
        test.deviatoric(i, 1) = rows[i][1];
        test.volumetric(i, 0) = rows[i][0];
        test.volumetric(i, 1) = rows[i][2];
      }
    }
    data.tests.push_back(std::move(test));
  }
  validate(data);
  return data;
}

void write_curve_csv(const std::string& path, const Trajectory& traj) {
  std::string out = "t,T1_kPa,T2_kPa,e,eps_a,q_kPa,eps_v\n";
  for (int i = 0; i < traj.size(); ++i) {
    const auto& s = traj.samples[i];
    out += format_g(s.t, 17) + ',' + format_g(s.T1, 17) + ',' + format_g(s.T2, 17) +
           ',' + format_g(s.e, 17) + ',' + format_g(traj.eps_a(i), 17) + ',' +
           format_g(traj.q(i), 17) + ',' + format_g(traj.eps_v(i), 17) + '\n';
  }
  write_text_file(path, out);
}

void write_experimental_csv(const std::string& path, const ExperimentalTest& test) {
  std::string out;
  if (test.spec.kind == TestKind::Oedometer) {
    out = "T1_kPa,e\n";
    for (int i = 0; i < test.oedometer.rows(); ++i)
      out += format_g(test.oedometer(i, 0), 10) + ',' +
             format_g(test.oedometer(i, 1), 10) + '\n';
  } else {
    out = "eps_a,q_kPa,eps_v\n";
    for (int i = 0; i < test.deviatoric.rows(); ++i)
      out += format_g(test.deviatoric(i, 0), 10) + ',' +
             format_g(test.deviatoric(i, 1), 10) + ',' +
             format_g(test.volumetric(i, 1), 10) + '\n';
  }
  write_text_file(path, out);
}

std::string param_table(const HypoParams& p) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "parameter   unit        value\n"
                "phi_c       deg    %10.4f\n"
                "h_s         GPa    %10.4f\n"
                "n           -      %10.4f\n"
                "e_d0        -      %10.4f\n"
                "e_c0        -      %10.4f\n"
                "e_i0        -      %10.4f\n"
                "alpha       -      %10.4f\n"
                "beta        -      %10.4f\n",
                rad_to_deg(p.phi_c), p.h_s * 1e-6, p.n, p.e_d0, p.e_c0, p.e_i0,
                p.alpha, p.beta);
  return buf;
}

void write_calibration_report_text(const std::string& path, const CalibrationResult& result) {
  std::ostringstream out;
  out << param_table(result.expanded) << '\n';
  out << "cost               " << format_g(result.cost, 6) << '\n';
  out << "delta_oedometer    " << format_g(result.plane_deltas[0], 6) << '\n';
  out << "delta_deviatoric   " << format_g(result.plane_deltas[1], 6) << '\n';
  out << "delta_volumetric   " << format_g(result.plane_deltas[2], 6) << '\n';
  out << "seed               " << result.seed << '\n';
  write_text_file(path, out.str());
}

void write_calibration_report_json(const std::string& path, const CalibrationResult& result) {
  json j;
  j["mode"] = "calibrate";
  j["seed"] = result.seed;
  j["cost"] = result.cost;
  j["deltas"] = {{"oedometer", result.plane_deltas[0]},
                 {"deviatoric", result.plane_deltas[1]},
                 {"volumetric", result.plane_deltas[2]}};
  j["params"] = params_json(result.expanded);
  j["search"] = {{"lambda_d", result.best.lambda_d}, {"lambda_i", result.best.lambda_i}};
  j["history"] = {{"best", result.best_history},
                  {"mean_mating_pool", result.mean_pool_history}};
  write_text_file(path, j.dump(2) + "\n");
}

void write_ensemble_report_text(const std::string& path, const EnsembleResult& ensemble) {
  std::ostringstream out;
  out << "trials      " << ensemble.n_trials << '\n';
  out << "failed      " << ensemble.n_failed << "\n\n";
  out << "parameter       mean     sigma/mu        min        max\n";
  for (int j = 0; j < kNumSearchParams; ++j) {
    const auto& s = ensemble.summary[j];
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %10.4f %10.4g %10.4f %10.4f\n",
                  display_name(j), display_value(j, s.mean),
                  s.mean != 0.0 ? s.stddev / std::abs(s.mean) : 0.0,
                  display_value(j, s.min), display_value(j, s.max));
    out << buf;
  }
  out << "\npearson correlation (" << (ensemble.pearson_valid ? "valid" : "not available")
      << ")\n";
  if (ensemble.pearson_valid) {
    out << "          ";
    for (int j = 0; j < kNumSearchParams; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%8s", kParamNames[j]);
      out << buf;
    }
    out << '\n';
    for (int i = 0; i < kNumSearchParams; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%-10s", kParamNames[i]);
      out << buf;
      for (int j = 0; j < kNumSearchParams; ++j) {
        std::snprintf(buf, sizeof(buf), "%8.3f", ensemble.pearson(i, j));
        out << buf;
      }
      out << '\n';
    }
  }
  if (!ensemble.regressions.empty()) {
    out << "\nlinear regressions (|r| >= " << kRegressionThreshold << ")\n";
    for (const auto& reg : ensemble.regressions) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s = %.6g * %s + %.6g   (r = %.3f)\n",
                    kParamNames[reg.yi], reg.fit.slope, kParamNames[reg.xi],
                    reg.fit.intercept, reg.fit.r);
      out << buf;
    }
  }
  write_text_file(path, out.str());
}

void write_ensemble_report_json(const std::string& path, const EnsembleResult& ensemble,
                                std::uint64_t base_seed) {
  json j;
  j["mode"] = "ensemble";
  j["base_seed"] = base_seed;
  j["trials"] = ensemble.n_trials;
  j["failed"] = ensemble.n_failed;

  json summary;
  for (int k = 0; k < kNumSearchParams; ++k) {
    const auto& s = ensemble.summary[k];
    summary[display_name(k)] = {{"mean", display_value(k, s.mean)},
                                {"stddev", display_value(k, s.stddev)},
                                {"cv", s.mean != 0.0 ? s.stddev / std::abs(s.mean) : 0.0},
                                {"min", display_value(k, s.min)},
                                {"max", display_value(k, s.max)}};
  }
  j["summary"] = summary;

  if (ensemble.pearson_valid) {
    std::vector<std::vector<double>> matrix(kNumSearchParams,
                                            std::vector<double>(kNumSearchParams));
    for (int a = 0; a < kNumSearchParams; ++a)
      for (int b = 0; b < kNumSearchParams; ++b) matrix[a][b] = ensemble.pearson(a, b);
    j["pearson"] = {{"order", std::vector<std::string>(kParamNames, kParamNames + kNumSearchParams)},
                    {"matrix", matrix}};
  }

  json regs = json::array();
  for (const auto& reg : ensemble.regressions) {
    regs.push_back({{"x", kParamNames[reg.xi]},
                    {"y", kParamNames[reg.yi]},
                    {"slope", reg.fit.slope},
                    {"intercept", reg.fit.intercept},
                    {"r", reg.fit.r}});
  }
  j["regressions"] = regs;

  if (!ensemble.trials.empty()) {
    double best_cost = ensemble.trials.front().cost;
    const CalibrationResult* best = &ensemble.trials.front();
    for (const auto& t : ensemble.trials) {
      if (t.cost < best_cost) {
        best_cost = t.cost;
        best = &t;
      }
    }
    j["best"] = {{"cost", best->cost}, {"seed", best->seed}, {"params", params_json(best->expanded)}};
  }
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hypocal::io
