// Runs the corrbench binary end to end and checks exit codes, messages and
// on-disk artifacts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "corrbench/image.hpp"
#include "corrbench/serialization.hpp"
#include "corrbench/tables.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace corrbench;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" CORRBENCH_CLI "' " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / (name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return "'" + (path / f).string() + "'"; }
};

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  }
  return out;
}

void write_partition(const TempDir& dir) {
  const CategoryPartition p = CategoryPartition::by_family(list_corruptions());
  write_json(dir.path / "partition.json", partition_to_json(p));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run("").code == 2);
  CHECK(run("generate --bogus").code == 2);
  CHECK(run("generate --n 2").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("list prints the roster") {
  const Run r = run("list --json");
  REQUIRE(r.code == 0);
  CHECK(parse_json(r.output, "stdout")["corruptions"].size() == 40);
}

TEST_CASE("generate with k above every category size is a domain error") {
  TempDir dir("corrbench_cli_gen");
  write_partition(dir);
  const Run r = run("--seed 1 generate --partition " + (dir / "partition.json") + " --n 2 --k 10");
  CHECK(r.code == 1);
  CHECK(r.output.find("InfeasibleParams") != std::string::npos);
}

TEST_CASE("seed comes from the flag, the environment or a config file") {
  TempDir dir("corrbench_cli_seed");
  write_partition(dir);
  const std::string gen = "generate --partition " + (dir / "partition.json") + " --n 3 --k 2 --count 5";
  const Run flag = run("--seed 42 " + gen);
  REQUIRE(flag.code == 0);
  CHECK(run(gen, "CORRBENCH_SEED=42").output == flag.output);
  CHECK(run("--seed 42 " + gen, "CORRBENCH_SEED=7").output == flag.output);
  CHECK(run(gen, "CORRBENCH_SEED=7").output != flag.output);
  write_text_file(dir.path / "run.toml", "seed = 42\n");
  CHECK(run("--config " + (dir / "run.toml") + " " + gen).output == flag.output);
  CHECK(parse_json(flag.output, "stdout")["params"]["seed"] == 42);
}

TEST_CASE("parse errors name the file, line and column") {
  TempDir dir("corrbench_cli_parse");
  write_text_file(dir.path / "matrix.csv", "corruption,a,b\na,1,0.5\nb,0.5,x\n");
  const Run r = run("--seed 1 categorize --matrix " + (dir / "matrix.csv"));
  CHECK(r.code == 1);
  CHECK(r.output.find("ParseError") != std::string::npos);
  CHECK(r.output.find("matrix.csv:3:") != std::string::npos);
}

TEST_CASE("corrupt writes one image per corruption and input, reproducibly") {
  TempDir dir("corrbench_cli_corrupt");
  const auto images = oracle::fixture_images();
  fs::create_directories(dir.path / "in" / "sub");
  for (int i = 0; i < 16; ++i) {
    const Image& img = images[i % images.size()];
    const fs::path name = (i < 8 ? dir.path / "in" : dir.path / "in" / "sub") /
                          ("img_" + std::to_string(i) + (i % 4 == 3 ? ".jpg" : ".png"));
    image_io::write(img, name);
  }
  write_text_file(dir.path / "in" / "notes.txt", "not an image");

  const std::string args = " corrupt --input " + (dir / "in") + " --jobs 4 --output ";
  REQUIRE(run("--seed 5" + args + (dir / "a")).code == 0);
  REQUIRE(run("--seed 5" + args + (dir / "b")).code == 0);
  const auto a = tree(dir.path / "a");
  CHECK(a.size() == 640 + 1);
  CHECK(a.count("motion_blur/sub/img_11.jpg") == 1);
  const Json manifest = parse_json(a.at("manifest.json"), "manifest.json");
  CHECK(manifest["outputs"] == 640);
  CHECK(manifest["images"] == 16);
  CHECK(manifest["corruptions"].size() == 40);
  CHECK(a == tree(dir.path / "b"));

  REQUIRE(run("--seed 6" + args + (dir / "c")).code == 0);
  CHECK(tree(dir.path / "c").at("gaussian_noise/img_0.png") != a.at("gaussian_noise/img_0.png"));
}

TEST_CASE("corrupt fails on an empty directory and on unreadable images") {
  TempDir dir("corrbench_cli_empty");
  fs::create_directories(dir.path / "in");
  Run r = run("--seed 1 corrupt --input " + (dir / "in") + " --output " + (dir / "out"));
  CHECK(r.code == 1);
  CHECK(r.output.find("no images found") != std::string::npos);

  image_io::write(oracle::fixture_images()[0], dir.path / "in" / "good.png");
  write_text_file(dir.path / "in" / "bad.png", "garbage");
  r = run("--seed 1 corrupt --corruptions invert,gamma --input " + (dir / "in") + " --output " + (dir / "out"));
  CHECK(r.code == 1);
  CHECK(r.output.find("bad.png") != std::string::npos);
  CHECK(fs::exists(dir.path / "out" / "invert" / "good.png"));
  CHECK(read_json(dir.path / "out" / "manifest.json")["failures"].size() == 1);
}

TEST_CASE("pipeline artifacts round-trip and embed provenance") {
  TempDir dir("corrbench_cli_pipeline");
  const std::string seed = "--seed 9 ";
  REQUIRE(run(seed + "simulate --output " + (dir / "acc.csv") + " --manifest " + (dir / "models.csv")).code == 0);
  REQUIRE(run(seed + "overlap --accuracies " + (dir / "acc.csv") + " --manifest " + (dir / "models.csv") +
              " --output " + (dir / "matrix.csv"))
              .code == 0);
  REQUIRE(run(seed + "categorize --matrix " + (dir / "matrix.csv") + " --output " + (dir / "partition.json")).code ==
          0);
  const Json partition = read_json(dir.path / "partition.json");
  CHECK(partition["k"] == 6);
  CHECK(partition["provenance"]["inputs"][0]["sha256"] == sha256_file(dir.path / "matrix.csv"));
  CHECK(read_json(dir.path / "matrix.csv.meta.json")["sha256"] == sha256_file(dir.path / "matrix.csv"));

  REQUIRE(run(seed + "generate --partition " + (dir / "partition.json") + " --n 4 --k 2 --count 20 --output " +
              (dir / "b.json"))
              .code == 0);
  REQUIRE(run(seed + "substitute --input " + (dir / "b.json") + " --partition " + (dir / "partition.json") +
              " --steps 3 --output " + (dir / "s.json"))
              .code == 0);
  const auto subs = benchmarks_from_json(read_json(dir.path / "s.json"), "s.json");
  CHECK(subs.size() == 60);
  CHECK(subs[2].lineage.size() == 3);
  REQUIRE(run(seed + "correlate --input " + (dir / "s.json") + " --accuracies " + (dir / "acc.csv") +
              " --natural natural --output " + (dir / "r.json"))
              .code == 0);
  const RobustnessReport r = report_from_json(read_json(dir.path / "r.json"), "r.json");
  CHECK(r.benchmarks.size() == 60);
  CHECK(r.models.size() == 21);

  const Run missing = run(seed + "correlate --input " + (dir / "s.json") + " --accuracies " + (dir / "acc.csv") +
                          " --natural imagenet_r");
  CHECK(missing.code == 1);
  CHECK(missing.output.find("imagenet_r") != std::string::npos);
}

}
