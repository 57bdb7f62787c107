#include "chrate/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chrate {

namespace {

constexpr char kMagic[4] = {'C', 'H', 'R', 'B'};

void put_u64(std::ofstream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  char buf[8];
  in.read(buf, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

void put_f64(std::ofstream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

double get_f64(std::ifstream& in) {
  std::uint64_t bits = get_u64(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void write_header(std::ofstream& out, char kind, int rows, int n, int m, double T) {
  out.write(kMagic, 4);
  out.put(kind);
  out.put(0);
  out.put(0);
  out.put(0);
  put_u64(out, static_cast<std::uint64_t>(n));
  put_u64(out, static_cast<std::uint64_t>(m));
  put_f64(out, T);
  put_u64(out, static_cast<std::uint64_t>(rows));
}

void read_header(std::ifstream& in, char expect_kind, int& rows, int& n, int& m,
                 double& T) {
  char magic[4], kind;
  in.read(magic, 4);
  in.read(&kind, 1);
  in.ignore(3);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || kind != expect_kind)
    throw std::runtime_error("bad binary container header");
  n = static_cast<int>(get_u64(in));
  m = static_cast<int>(get_u64(in));
  T = get_f64(in);
  rows = static_cast<int>(get_u64(in));
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string provenance_line(std::uint64_t config_hash) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "# chrate %s config=%016llx", kVersion,
                static_cast<unsigned long long>(config_hash));
  return buf;
}

void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows) {
  std::ofstream out = open_out(path, false);
  out << provenance_line(config_hash) << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].text;
    out << "\n";
  }
}

void write_path_csv(const std::string& path, std::uint64_t config_hash,
                    const SpaceTimePath& p) {
  SpatialGrid grid(p.n);
  std::vector<std::vector<CsvCell>> rows;
  rows.reserve(static_cast<std::size_t>(p.m + 1) * p.n);
  for (int j = 0; j <= p.m; ++j)
    for (int k = 1; k <= p.n; ++k)
      rows.push_back({j * p.dt(), k, grid.node(k), p.states(j, k - 1)});
  write_csv(path, config_hash, {"t", "node", "x", "value"}, rows);
}

void write_control_csv(const std::string& path, std::uint64_t config_hash,
                       const Control& c) {
  SpatialGrid grid(c.n);
  std::vector<std::vector<CsvCell>> rows;
  rows.reserve(static_cast<std::size_t>(c.m) * c.n);
  for (int j = 0; j < c.m; ++j)
    for (int k = 1; k <= c.n; ++k)
      rows.push_back({j * c.dt(), k, grid.node(k), c.values(j, k - 1)});
  write_csv(path, config_hash, {"t", "cell", "x", "value"}, rows);
}

void write_path_binary(const std::string& path, const SpaceTimePath& p) {
  std::ofstream out = open_out(path, true);
  write_header(out, 'P', p.m + 1, p.n, p.m, p.T);
  for (int j = 0; j <= p.m; ++j)
    for (int k = 0; k < p.n; ++k) put_f64(out, p.states(j, k));
}

SpaceTimePath read_path_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  int rows, n, m;
  SpaceTimePath p;
  read_header(in, 'P', rows, n, m, p.T);
  if (rows != m + 1) throw std::runtime_error("corrupt path container");
  p.n = n;
  p.m = m;
  p.states.resize(m + 1, n);
  for (int j = 0; j <= m; ++j)
    for (int k = 0; k < n; ++k) p.states(j, k) = get_f64(in);
  if (!in) throw std::runtime_error("truncated path container");
  return p;
}

void write_control_binary(const std::string& path, const Control& c) {
  std::ofstream out = open_out(path, true);
  write_header(out, 'C', c.m, c.n, c.m, c.T);
  for (int j = 0; j < c.m; ++j)
    for (int k = 0; k < c.n; ++k) put_f64(out, c.values(j, k));
}

Control read_control_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  int rows, n, m;
  Control c;
  read_header(in, 'C', rows, n, m, c.T);
  if (rows != m) throw std::runtime_error("corrupt control container");
  c.n = n;
  c.m = m;
  c.values.resize(m, n);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < n; ++k) c.values(j, k) = get_f64(in);
  if (!in) throw std::runtime_error("truncated control container");
  return c;
}

std::string default_output_dir() {
  const char* env = std::getenv("CHRATE_OUT");
  return (env && *env) ? env : ".";
}

}  // namespace chrate
