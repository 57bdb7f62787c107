#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chrate/config.hpp"
#include "chrate/io.hpp"

using namespace chrate;

namespace {

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config file parsing with comments, arrays and overrides") {
  const char* path = "test_cfg.toml";
  {
    std::ofstream out(path);
    out << "# experiment\n"
        << "b = \"cubic\"\n"
        << "sigma = \"shifted_sine\"  # with parameter\n"
        << "sigma_c = 2.5\n"
        << "n_list = [8, 16, 32]\n"
        << "eps_list = [0.4, 0.2]\n"
        << "T = 0.75\n"
        << "seed = 99\n"
        << "importance_sampling = false\n";
  }
  ExperimentConfig cfg = load_config(path);
  CHECK(cfg.sigma == "shifted_sine");
  CHECK(cfg.sigma_c == doctest::Approx(2.5));
  CHECK(cfg.n_list == std::vector<int>{8, 16, 32});
  CHECK(cfg.eps_list.size() == 2);
  CHECK(cfg.T == doctest::Approx(0.75));
  CHECK(cfg.seed == 99);
  CHECK_FALSE(cfg.importance_sampling);
  CHECK(cfg.validate().empty());

  // flag-style override wins
  apply_config_entry(cfg, "T", "1.25");
  CHECK(cfg.T == doctest::Approx(1.25));
  CHECK_THROWS(apply_config_entry(cfg, "no_such_key", "1"));
  std::remove(path);
}

TEST_CASE("bad config lines are rejected with positions") {
  const char* path = "test_bad.toml";
  {
    std::ofstream out(path);
    out << "n = 8\n[section]\n";
  }
  CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains(":2:"),
                       std::runtime_error);
  std::remove(path);
}

TEST_CASE("config hash tracks semantic content only") {
  ExperimentConfig a, b;
  CHECK(a.hash() == b.hash());
  b.threads = 16;  // execution detail, not semantics
  b.output_dir = "elsewhere";
  CHECK(a.hash() == b.hash());
  b.y = 2.0;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("validation catches out-of-range values") {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.T = -1.0;
  cfg.xbar = 4.0;
  auto errs = cfg.validate();
  CHECK(errs.size() >= 3);
}

TEST_CASE("csv emission: provenance line, header, full precision") {
  const char* path = "test_out.csv";
  write_csv(path, 0x1234abcdull, {"a", "b"}, {{1.0 / 3.0, 7}});
  std::string text = slurp(path);
  CHECK(text.find("# chrate") == 0);
  CHECK(text.find("00000000")); // 16-digit zero-padded hash
  CHECK(text.find("a,b\n") != std::string::npos);
  CHECK(text.find("0.33333333333333331,7\n") != std::string::npos);
  std::remove(path);
}

TEST_CASE("binary containers round trip exactly") {
  SpaceTimePath p;
  p.T = 0.5;
  p.m = 3;
  p.n = 4;
  p.states = Mat::Random(4, 4);
  write_path_binary("test_p.bin", p);
  SpaceTimePath q = read_path_binary("test_p.bin");
  CHECK(q.T == p.T);
  CHECK((q.states - p.states).norm() == 0.0);
  std::remove("test_p.bin");

  Control c;
  c.T = 0.25;
  c.m = 2;
  c.n = 5;
  c.values = Mat::Random(2, 5);
  write_control_binary("test_c.bin", c);
  Control d = read_control_binary("test_c.bin");
  CHECK((d.values - c.values).norm() == 0.0);
  std::remove("test_c.bin");

  // kind bytes are checked
  write_control_binary("test_k.bin", c);
  CHECK_THROWS(read_path_binary("test_k.bin"));
  std::remove("test_k.bin");
}
