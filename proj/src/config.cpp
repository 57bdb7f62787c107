#include "chrate/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chrate/grid.hpp"

namespace chrate {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strip an unquoted trailing comment.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad number: '" + s + "'");
  return v;
}

std::vector<std::string> split_array(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::runtime_error("expected array: '" + s + "'");
  std::vector<std::string> out;
  std::string body = s.substr(1, s.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string parse_string(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;  // bare word
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::runtime_error("expected true/false: '" + s + "'");
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& raw) {
  std::string v = trim(raw);
  if (key == "b") cfg.b = parse_string(v);
  else if (key == "sigma") cfg.sigma = parse_string(v);
  else if (key == "sigma_c") cfg.sigma_c = parse_number(v);
  else if (key == "u0") cfg.u0 = parse_string(v);
  else if (key == "u0_c") cfg.u0_c = parse_number(v);
  else if (key == "u0_k") cfg.u0_k = static_cast<int>(parse_number(v));
  else if (key == "u0_poly") {
    cfg.u0_poly.clear();
    for (const auto& it : split_array(v)) cfg.u0_poly.push_back(parse_number(it));
  } else if (key == "n") cfg.n = static_cast<int>(parse_number(v));
  else if (key == "n_list") {
    cfg.n_list.clear();
    for (const auto& it : split_array(v))
      cfg.n_list.push_back(static_cast<int>(parse_number(it)));
  } else if (key == "m") cfg.m = static_cast<int>(parse_number(v));
  else if (key == "T") cfg.T = parse_number(v);
  else if (key == "eps") cfg.eps = parse_number(v);
  else if (key == "eps_list") {
    cfg.eps_list.clear();
    for (const auto& it : split_array(v)) cfg.eps_list.push_back(parse_number(it));
  } else if (key == "xbar") cfg.xbar = parse_number(v);
  else if (key == "y") cfg.y = parse_number(v);
  else if (key == "y_list") {
    cfg.y_list.clear();
    for (const auto& it : split_array(v)) cfg.y_list.push_back(parse_number(it));
  } else if (key == "samples") cfg.samples = static_cast<long long>(parse_number(v));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number(v));
  else if (key == "threads") cfg.threads = static_cast<int>(parse_number(v));
  else if (key == "output_dir") cfg.output_dir = parse_string(v);
  else if (key == "importance_sampling") cfg.importance_sampling = parse_bool(v);
  else if (key == "green_modes") cfg.green_modes = static_cast<int>(parse_number(v));
  else if (key == "endpoint_only") cfg.endpoint_only = parse_bool(v);
  else if (key == "dump_minimizer") cfg.dump_minimizer = parse_bool(v);
  else throw std::runtime_error("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    try {
      if (s.front() == '[')
        throw std::runtime_error("sections are not supported; use flat keys");
      std::size_t eq = s.find('=');
      if (eq == std::string::npos) throw std::runtime_error("expected key = value");
      apply_config_entry(cfg, trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  auto arr_d = [&](const std::vector<double>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << g17(v[i]);
    os << "]";
  };
  os << "b=" << b << "\nsigma=" << sigma << "\nsigma_c=" << g17(sigma_c)
     << "\nu0=" << u0 << "\nu0_c=" << g17(u0_c) << "\nu0_k=" << u0_k << "\nu0_poly=";
  arr_d(u0_poly);
  os << "\nn=" << n << "\nn_list=[";
  for (std::size_t i = 0; i < n_list.size(); ++i) os << (i ? "," : "") << n_list[i];
  os << "]\nm=" << m << "\nT=" << g17(T) << "\neps=" << g17(eps) << "\neps_list=";
  arr_d(eps_list);
  os << "\nxbar=" << g17(xbar) << "\ny=" << g17(y) << "\ny_list=";
  arr_d(y_list);
  os << "\nsamples=" << samples << "\nseed=" << seed
     << "\nimportance_sampling=" << (importance_sampling ? "true" : "false")
     << "\ngreen_modes=" << green_modes
     << "\nendpoint_only=" << (endpoint_only ? "true" : "false")
     << "\ndump_minimizer=" << (dump_minimizer ? "true" : "false") << "\n";
  // threads and output_dir deliberately excluded: they must not change results
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Coefficients ExperimentConfig::coefficients() const {
  return make_coefficients(b, sigma, sigma_c, u0, u0_c, u0_k, u0_poly);
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errs;
  if (n < 2) errs.push_back("n must be >= 2");
  for (int nn : n_list)
    if (nn < 2) errs.push_back("n_list entries must be >= 2");
  if (m < 1) errs.push_back("m must be >= 1");
  if (!(T > 0.0)) errs.push_back("T must be positive");
  if (!(eps > 0.0)) errs.push_back("eps must be positive");
  for (double e : eps_list)
    if (!(e > 0.0)) errs.push_back("eps_list entries must be positive");
  if (xbar < 0.0 || xbar > kPi) errs.push_back("xbar must lie in [0, pi]");
  if (samples < 100) errs.push_back("samples must be >= 100");
  if (threads < 0) errs.push_back("threads must be >= 0");
  if (green_modes < 8) errs.push_back("green_modes must be >= 8");
  if (b != "cubic" && b != "zero") errs.push_back("b must be cubic or zero");
  if (sigma != "one" && sigma != "shifted_sine" && sigma != "tanh_clamp")
    errs.push_back("sigma must be one, shifted_sine or tanh_clamp");
  if (u0 != "constant" && u0 != "cos" && u0 != "polynomial")
    errs.push_back("u0 must be constant, cos or polynomial");
  return errs;
}

}  // namespace chrate
