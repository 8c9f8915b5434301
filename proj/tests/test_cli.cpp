#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("croute_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(CROUTE_BIN) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("gen writes edge lists") {
  TempDir tmp;
  CHECK(run("gen --kind grid --dims 3,3 --out " + (tmp / "g.txt")) == 0);
  CHECK(data_lines(tmp / "g.txt").size() == 12);
  CHECK(run("gen --kind star --n 5 --out " + (tmp / "s.txt")) == 0);
  auto star = data_lines(tmp / "s.txt");
  CHECK(star.size() == 4);
  CHECK(star[0] == "0 1");
  CHECK(run("gen --kind power-law --n 300 --seed 4 --out " + (tmp / "a.txt")) == 0);
  CHECK(run("gen --kind power-law --n 300 --seed 4 --out " + (tmp / "b.txt")) == 0);
  CHECK(slurp(tmp / "a.txt") == slurp(tmp / "b.txt"));
  CHECK(run("gen --kind bogus --n 5") != 0);
  CHECK(run("gen --kind grid --out " + (tmp / "x.txt")) == 2);
}

TEST_CASE("eval on a tiny path") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "p3.txt");
    f << "# P3\na b\nb c\n";
  }
  REQUIRE(run("eval --graph " + (tmp / "p3.txt") + " --schemes trivial --all-pairs --out-dir " + (tmp / "out")) == 0);
  auto lines = data_lines(tmp / "out/summary.csv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "scheme,n,edges,pairs,delivery,avg_stretch,max_stretch,mean_entries,max_entries,mean_bits,max_bits,"
        "neighbor_direct,build_s,eval_s,note");
  auto f = split(lines[1]);
  REQUIRE(f.size() >= 12);
  CHECK(f[0] == "trivial");
  CHECK(f[1] == "3");
  CHECK(f[2] == "2");
  CHECK(f[3] == "6");
  CHECK(f[4] == "1");
  CHECK(f[5] == "1");
  CHECK(f[8] == "2");
  auto hist = data_lines(tmp / "out/trivial_stretch_hist.csv");
  REQUIRE(hist.size() == 2);
  CHECK(hist[1] == "trivial,stretch,1,1.05,6");
  CHECK(fs::exists(tmp.path / "out/trivial_rt_hist.csv"));
}

TEST_CASE("eval with several schemes is byte-reproducible") {
  TempDir tmp;
  const std::string args =
      "eval --gen power-law --n 400 --seed 3 --schemes trivial,tz,bc,hybrid,ni,hier --pairs 2000 --out-dir ";
  REQUIRE(run(args + (tmp / "a") + " --threads 1") == 0);
  REQUIRE(run(args + (tmp / "b") + " --threads 4") == 0);
  for (const char* file : {"summary.csv", "tz_stretch_hist.csv", "ni_rt_hist.csv", "hier_stretch_hist.csv"}) {
    CAPTURE(file);
    CHECK(slurp(tmp / (std::string("a/") + file)) == slurp(tmp / (std::string("b/") + file)));
  }
  const std::string summary = slurp(tmp / "a/summary.csv");
  CHECK(summary.find("# graph=synthetic stand-in generator=power-law n=400") != std::string::npos);
  CHECK(summary.find("# seed=3 pairs=uniform count=2000 seed=3") != std::string::npos);
  auto lines = data_lines(tmp / "a/summary.csv");
  CHECK(lines.size() == 7);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split(lines[i])[4] == "1");
}

TEST_CASE("eval exit codes") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "two.txt");
    f << "0 1\n2 3\n3 4\n";
  }
  // Disconnected input is reduced to its largest component.
  CHECK(run("eval --graph " + (tmp / "two.txt") + " --schemes trivial,tz --all-pairs --out-dir " + (tmp / "o")) == 0);
  CHECK(split(data_lines(tmp / "o/summary.csv")[1])[1] == "3");
  // Grid needs dimensions; the build failure is reported with exit code 1.
  CHECK(run("eval --gen star --n 10 --schemes grid,trivial --all-pairs --out-dir " + (tmp / "f")) == 1);
  auto lines = data_lines(tmp / "f/summary.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].find("build failed") != std::string::npos);
  CHECK(run("eval --gen star --n 10 --schemes nope --out-dir " + (tmp / "g")) != 0);
  CHECK(run("eval --schemes trivial --out-dir " + (tmp / "h")) != 0);
  {
    std::ofstream f(tmp / "bad.txt");
    f << "0 1\n1\n";
  }
  CHECK(run("eval --graph " + (tmp / "bad.txt") + " --schemes trivial --out-dir " + (tmp / "i")) == 2);
}

TEST_CASE("sweep writes one row per size and seed") {
  TempDir tmp;
  REQUIRE(run("sweep --scheme tz --sizes 200,400 --seeds 2 --pairs 100 --out " + (tmp / "s.csv")) == 0);
  auto lines = data_lines(tmp / "s.csv");
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] ==
        "scheme,n,seed,edges,mean_entries,max_entries,mean_bits,max_bits,avg_stretch,delivery,"
        "entries_per_sqrt_nlogn,bits_per_log2n_sq");
  CHECK(lines[1].rfind("tz,200,1,", 0) == 0);
  CHECK(lines[4].rfind("tz,400,2,", 0) == 0);
}
