#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sifter/binarize.hpp"
#include "sifter/imageio.hpp"

namespace fs = std::filesystem;
using namespace sifter;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "sifter_cli_test";

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run_cli(const std::string& args) {
  const auto out = kRoot / "stdout.txt";
  const auto err = kRoot / "stderr.txt";
  const std::string cmd = "cd '" + kRoot.string() + "' && '" SIFTER_CLI_PATH "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// One shared synthetic benchmark and trained purifier for the whole file.
struct Fixture {
  Fixture() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
    REQUIRE(run_cli("synth --out bench --seed 4 --train-per-class 6 --test-per-class 3").code == 0);
    REQUIRE(run_cli("train --seeds bench/seeds/manifest.csv --out run").code == 0);
  }
};

void ensure_fixture() { static Fixture fixture; }

}  // namespace

TEST_CASE("train is deterministic and logs what it memorized") {
  ensure_fixture();
  REQUIRE(run_cli("train --seeds bench/train/manifest.csv --seeds-per-class 3 --out t1").code == 0);
  REQUIRE(run_cli("train --seeds bench/train/manifest.csv --seeds-per-class 3 --out t2").code == 0);
  CHECK(slurp(kRoot / "t1/purifier.sftr") == slurp(kRoot / "t2/purifier.sftr"));
  const auto log = nlohmann::json::parse(slurp(kRoot / "t1/train_log.json"));
  CHECK(log["patterns_per_channel"] == 30);
  CHECK(log["seeds_per_class"] == std::vector<int>(10, 3));
  CHECK(log.contains("wall_time_s"));
}

TEST_CASE("train rejects a seed set missing a class") {
  ensure_fixture();
  const auto r = run_cli("train --seeds bench/seeds/manifest.csv --classes 12 --out t3");
  CHECK(r.code == 3);
  CHECK(r.err.find("class 10") != std::string::npos);
}

TEST_CASE("purify a single image") {
  ensure_fixture();
  const auto r = run_cli("purify --purifier run/purifier.sftr --input bench/test/img000000.pgm --out p1");
  CHECK(r.code == 0);
  const auto img = read_image(kRoot / "p1/img000000.pgm");
  for (auto p : img.channel(0).pixels()) CHECK((p == 0 || p == 255));
  CHECK(fs::exists(kRoot / "p1/manifest.csv"));
}

TEST_CASE("purify with remove_time 0 returns binarized inputs") {
  ensure_fixture();
  REQUIRE(run_cli("purify --purifier run/purifier.sftr --input bench/test --remove-time 0 --out p0").code == 0);
  for (const auto& entry : fs::directory_iterator(kRoot / "bench/test")) {
    if (entry.path().extension() != ".pgm") continue;
    const auto in = read_image(entry.path());
    const auto out = read_image(kRoot / "p0" / entry.path().filename());
    CHECK(out.channel(0) == binarize_global(in.channel(0), 127).plane());
  }
  CHECK(read_csv(kRoot / "p0/manifest.csv").size() == 31);
}

TEST_CASE("purify over a mixed-shape directory is a partial failure") {
  ensure_fixture();
  fs::create_directories(kRoot / "mixed");
  fs::copy_file(kRoot / "bench/test/img000000.pgm", kRoot / "mixed/a.pgm", fs::copy_options::overwrite_existing);
  write_image(Image(5, 5, 1, 9), kRoot / "mixed/b.pgm");
  write_image(Image(28, 28, 3, 9), kRoot / "mixed/c.ppm");
  const auto r = run_cli("purify --purifier run/purifier.sftr --input mixed --out pm");
  CHECK(r.code == 4);
  CHECK(fs::exists(kRoot / "pm/a.pgm"));
  CHECK_FALSE(fs::exists(kRoot / "pm/b.pgm"));
  CHECK(r.err.find("b.pgm") != std::string::npos);
  CHECK(r.err.find("c.ppm") != std::string::npos);
  CHECK(read_csv(kRoot / "pm/skipped.csv").size() == 3);
}

TEST_CASE("eval reports and determinism") {
  ensure_fixture();
  const std::string common =
      "eval --purifier run/purifier.sftr --train-set bench/train/manifest.csv "
      "--test-set bench/test/manifest.csv --seed 2 --remove-time 1000 ";
  REQUIRE(run_cli(common + "--ratio 0.3 --out e1").code == 0);
  REQUIRE(run_cli(common + "--ratio 0.3 --out e2").code == 0);
  CHECK(slurp(kRoot / "e1/items.csv") == slurp(kRoot / "e2/items.csv"));
  CHECK(slurp(kRoot / "e1/summary.csv") == slurp(kRoot / "e2/summary.csv"));
  const auto report = nlohmann::json::parse(slurp(kRoot / "e1/report.json"));
  CHECK(report["acc"].get<double>() >= 0.9);
  CHECK(report.contains("wall_times"));

  const auto vacuous = run_cli(common + "--ratio 0 --out e0");
  REQUIRE(vacuous.code == 0);
  const auto r0 = nlohmann::json::parse(slurp(kRoot / "e0/report.json"));
  CHECK(r0["asr"] == 0.0);
  CHECK(r0["notes"].dump().find("no poisoned items") != std::string::npos);
  CHECK(vacuous.out.find("no poisoned items") != std::string::npos);
}

TEST_CASE("sweep emits one row per remove_time") {
  ensure_fixture();
  const auto r = run_cli(
      "sweep --purifier run/purifier.sftr --train-set bench/train/manifest.csv "
      "--test-set bench/test/manifest.csv --ratio 0.3 --remove-times 0,50,200,500 --out s1");
  REQUIRE(r.code == 0);
  const auto rows = read_csv(kRoot / "s1/sweep.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "remove_time");
  CHECK(rows[4][0] == "500");
  CHECK(std::stod(rows[4][2]) <= std::stod(rows[1][2]));
}

TEST_CASE("export writes a purified dataset that reloads") {
  ensure_fixture();
  REQUIRE(run_cli("export --purifier run/purifier.sftr --input bench/test/manifest.csv --out x1").code == 0);
  const auto rows = read_csv(kRoot / "x1/manifest.csv");
  CHECK(rows.size() == 31);
  CHECK(rows[0] == std::vector<std::string>{"filename", "label", "poisoned", "original_label"});
}

TEST_CASE("capacity table") {
  ensure_fixture();
  REQUIRE(run_cli("capacity --n 784 --p 1,40 --trials 2 --out c1").code == 0);
  auto rows = read_csv(kRoot / "c1/capacity.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][4] == "theoretical_capacity");
  CHECK(std::stod(rows[1][4]) == doctest::Approx(784.0 / (2.0 * std::log2(784.0))));
  CHECK(std::stod(rows[1][4]) == doctest::Approx(40.8).epsilon(0.01));
  CHECK(std::stod(rows[1][6]) == 0.0);

  REQUIRE(run_cli("capacity --n 200 --alphas 0.05,0.1,0.2,0.3 --trials 3 --out c2").code == 0);
  rows = read_csv(kRoot / "c2/capacity.csv");
  REQUIRE(rows.size() == 5);
  CHECK(std::stod(rows[4][5]) > std::stod(rows[1][5]));
  CHECK(std::stod(rows[3][5]) >= std::stod(rows[2][5]));
}

TEST_CASE("ising trajectories") {
  ensure_fixture();
  REQUIRE(run_cli("ising --steps 0 --out i0").code == 0);
  auto rows = read_csv(kRoot / "i0/ising.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"step", "energy", "magnetization"});
  CHECK(rows[1][0] == "0");

  REQUIRE(run_cli("ising --width 16 --height 16 --steps 200000 --every 50000 --seed 3 --out i1").code == 0);
  rows = read_csv(kRoot / "i1/ising.csv");
  CHECK(std::stod(rows.back()[2]) == 1.0);

  REQUIRE(run_cli("ising --coupling 0 --temperature 1e9 --steps 100000 --every 1000 --out i2").code == 0);
  rows = read_csv(kRoot / "i2/ising.csv");
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stoul(rows[i][0]) < 50000) continue;
    sum += std::stod(rows[i][2]);
    ++count;
  }
  CHECK(std::abs(sum / count) < 0.1);

  const auto again = run_cli("ising --width 16 --height 16 --steps 200000 --every 50000 --seed 3 --out i3");
  CHECK(slurp(kRoot / "i1/ising.csv") == slurp(kRoot / "i3/ising.csv"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
  ensure_fixture();
  {
    std::ofstream cfg(kRoot / "run.toml");
    cfg << "seed = 11\n[purifier]\nremove_time = 5\nthreshold = 100\n";
  }
  auto r = run_cli("--config run.toml --print-config train --seeds bench/seeds/manifest.csv --remove-time 7");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("remove_time = 7") != std::string::npos);
  CHECK(r.out.find("threshold = 100") != std::string::npos);
  CHECK(r.out.find("seed = 11") != std::string::npos);
  CHECK(r.out.find("binarize = \"global\"") != std::string::npos);

  r = run_cli("--config run.toml --print-config train --seeds bench/seeds/manifest.csv");
  CHECK(r.out.find("remove_time = 5") != std::string::npos);

  r = run_cli("--print-config train --seeds bench/seeds/manifest.csv");
  CHECK(r.out.find("remove_time = 1000") != std::string::npos);
  CHECK_FALSE(fs::exists(kRoot / "out/purifier.sftr"));
}

TEST_CASE("configuration errors exit with status 2") {
  ensure_fixture();
  CHECK(run_cli("train").code == 2);
  CHECK(run_cli("train --seeds bench/seeds/manifest.csv --binarize otsu").code == 2);
  CHECK(run_cli("train --seeds bench/seeds/manifest.csv --k-size 4 --binarize localdiff").code == 2);
  CHECK(run_cli("nonsense").code == 2);
  {
    std::ofstream cfg(kRoot / "bad.toml");
    cfg << "seed = \n";
  }
  CHECK(run_cli("--config bad.toml capacity").code == 2);
  CHECK(run_cli("purify --purifier run/purifier.sftr --input bench/test --binarize localdiff --out z").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("data errors exit with status 3") {
  ensure_fixture();
  CHECK(run_cli("train --seeds nowhere.csv").code == 3);
  CHECK(run_cli("purify --purifier missing.sftr --input bench/test --out z").code == 3);
}
