// corrbench: build synthetic corruption benchmarks and measure how well they
// track natural distribution shift.
//
// Exit codes: 0 success, 1 domain or I/O error, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "corrbench/benchmarks.hpp"
#include "corrbench/categories.hpp"
#include "corrbench/correlation.hpp"
#include "corrbench/corruptions.hpp"
#include "corrbench/error.hpp"
#include "corrbench/image.hpp"
#include "corrbench/metrics.hpp"
#include "corrbench/serialization.hpp"
#include "corrbench/tables.hpp"

namespace fs = std::filesystem;
using namespace corrbench;

namespace {

std::uint64_t g_seed = 0;

// CSV outputs carry their provenance in a sibling "<file>.meta.json".
void write_csv_output(const fs::path& path, const std::string& text, const Json& prov) {
  write_text_file(path, text);
  fs::path meta = path;
  meta += ".meta.json";
  write_json(meta, Json{{"file", path.filename().string()}, {"sha256", sha256_hex(text)}, {"provenance", prov}});
}

void emit_json(const std::string& output, const Json& doc) {
  if (output.empty() || output == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json(output, doc);
  }
}

// Corruptions with an augmented model, roster order first, then the rest sorted.
std::vector<std::string> manifest_corruptions(const ModelManifest& manifest) {
  std::vector<std::string> ids;
  for (const CorruptionSpec& spec : list_corruptions()) {
    if (manifest.has_augmented(spec.id)) ids.push_back(spec.id);
  }
  std::vector<std::string> extra;
  for (const auto& [model, role] : manifest.entries()) {
    if (role.kind != ModelRole::Kind::augmented) continue;
    if (std::find(ids.begin(), ids.end(), role.corruption_id) == ids.end()) extra.push_back(role.corruption_id);
  }
  std::sort(extra.begin(), extra.end());
  ids.insert(ids.end(), extra.begin(), extra.end());
  return ids;
}

void require_covered(const CategoryPartition& partition, std::span<const Benchmark> group, const std::string& what) {
  for (const Benchmark& b : group) {
    for (const std::string& c : b.corruptions) {
      if (!partition.find(c)) {
        throw Error(ErrorCode::InconsistentInput,
                    "benchmark '" + b.id + "' uses '" + c + "', which " + what + " does not cover");
      }
    }
  }
}

// ---- list ------------------------------------------------------------------

struct ListCmd {
  bool json = false;

  void run() const {
    if (json) {
      Json items = Json::array();
      for (const CorruptionSpec& s : list_corruptions()) {
        items.push_back({{"id", s.id}, {"family", std::string(to_string(s.family_hint))}, {"severity", s.severity},
                         {"params", s.params}});
      }
      emit_json("", Json{{"roster_version", std::string(kRosterVersion)}, {"corruptions", std::move(items)}});
      return;
    }
    for (const CorruptionSpec& s : list_corruptions()) {
      std::printf("%-22s %-9s %.2f\n", s.id.c_str(), std::string(to_string(s.family_hint)).c_str(), s.severity);
    }
  }
};

// ---- corrupt ---------------------------------------------------------------

struct CorruptCmd {
  std::string input;
  std::string output;
  std::vector<std::string> corruptions;
  std::optional<double> severity;
  unsigned jobs = 0;

  int run() const {
    std::vector<CorruptionSpec> specs;
    if (corruptions.empty()) {
      specs = list_corruptions();
    } else {
      for (const std::string& id : corruptions) specs.push_back(find_corruption(id));
    }
    if (severity) {
      for (CorruptionSpec& s : specs) s.severity = *severity;
    }

    const fs::path root(input);
    if (!fs::is_directory(root)) throw Error(ErrorCode::IoError, "'" + input + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && image_io::is_supported_extension(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::IoError, "no images found in '" + input + "'");

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<std::pair<std::string, std::string>> failures;
    std::size_t written = 0;
    auto worker = [&] {
      for (std::size_t i = next++; i < files.size(); i = next++) {
        const std::string rel = fs::relative(files[i], root).generic_string();
        try {
          const Image img = image_io::read(files[i]);
          for (const CorruptionSpec& spec : specs) {
            const fs::path dest = fs::path(output) / spec.id / rel;
            fs::create_directories(dest.parent_path());
            image_io::write(apply_corruption(img, spec, derive_seed(g_seed, spec.id, rel)), dest);
          }
          std::lock_guard lock(mu);
          written += specs.size();
        } catch (const std::exception& e) {
          std::lock_guard lock(mu);
          std::cerr << "corrbench: skipping " << rel << ": " << e.what() << "\n";
          failures.emplace_back(rel, e.what());
        }
      }
    };
    const unsigned threads = std::max(1u, jobs ? jobs : std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(failures.begin(), failures.end());

    Json ids = Json::array();
    for (const CorruptionSpec& s : specs) ids.push_back({{"id", s.id}, {"severity", s.severity}});
    Json fails = Json::array();
    for (const auto& [rel, what] : failures) fails.push_back({{"path", rel}, {"error", what}});
    Json manifest{{"tool", "corrbench"},
                  {"roster_version", std::string(kRosterVersion)},
                  {"seed", g_seed},
                  {"images", files.size() - failures.size()},
                  {"outputs", written},
                  {"corruptions", std::move(ids)},
                  {"failures", std::move(fails)}};
    fs::create_directories(output);
    write_json(fs::path(output) / "manifest.json", manifest);
    std::cerr << "corrbench: wrote " << written << " images to " << output << "\n";
    return failures.empty() ? 0 : 1;
  }
};

// ---- simulate --------------------------------------------------------------

struct SimulateCmd {
  std::string output;
  std::string manifest;
  SyntheticCohortConfig cohort;
  OverlapStudyConfig study;

  void run() {
    const CategoryPartition families = CategoryPartition::by_family(list_corruptions());
    cohort.categories = static_cast<int>(families.size());
    cohort.seed = substream_seed(g_seed, 1);
    study.seed = substream_seed(g_seed, 2);
    OverlapStudy sim = simulate_overlap_study(study, families);
    const AccuracyTable models = simulate_cohort(cohort, families);
    for (const auto& [key, acc] : models.entries()) {
      if (sim.table.contains(key.first, key.second)) {
        throw Error(ErrorCode::InconsistentInput, "model '" + key.first + "' is defined twice");
      }
      sim.table.set(key.first, key.second, acc);
    }
    Json prov = provenance(g_seed, {});
    prov["cohort"] = {{"models", cohort.models}, {"skill_spread", cohort.skill_spread}, {"noise", cohort.noise},
                      {"natural_noise", cohort.natural_noise},
                      {"base_drop", cohort.base_drop}, {"natural", cohort.natural_id}};
    write_csv_output(output, csv::format_accuracies(sim.table), prov);
    if (!manifest.empty()) write_csv_output(manifest, csv::format_manifest(sim.manifest), prov);
  }
};

// ---- overlap ---------------------------------------------------------------

struct OverlapCmd {
  std::string accuracies;
  std::string manifest;
  std::string output;

  void run() const {
    const AccuracyTable table = csv::read_accuracies(accuracies);
    const ModelManifest man = csv::read_manifest(manifest);
    const std::vector<std::string> ids = manifest_corruptions(man);
    if (ids.size() < 2) throw Error(ErrorCode::InconsistentInput, "manifest lists fewer than two augmented models");
    const OverlapMatrix matrix = build_overlap_matrix(table, man, ids);
    const fs::path inputs[] = {accuracies, manifest};
    write_csv_output(output, csv::format_matrix(matrix), provenance(std::nullopt, inputs));
  }
};

// ---- categorize ------------------------------------------------------------

struct CategorizeCmd {
  std::string matrix;
  std::string output;
  ClusterConfig config;
  std::optional<int> fixed_k;

  void run() {
    const OverlapMatrix m = csv::read_matrix(matrix);
    config.seed = g_seed;
    Json doc;
    if (fixed_k) {
      const CategoryPartition partition = kmeans_cluster(m, *fixed_k, config);
      doc = partition_to_json(partition);
      doc["stats"] = stats_json(partition_pair_stats(m, partition));
    } else {
      const MinKResult result = find_min_k(m, config);
      doc = partition_to_json(result.partition);
      doc["stats"] = stats_json(result.stats);
      Json trace = Json::array();
      for (const auto& [k, score] : result.trace) trace.push_back({{"k", k}, {"mean_scc", score}});
      doc["search"] = std::move(trace);
    }
    doc["config"] = {{"threshold", config.threshold}, {"restarts", config.restarts}, {"kmin", config.k_min},
                     {"kmax", config.k_max},          {"max_iters", config.max_iters}};
    const fs::path inputs[] = {matrix};
    doc["provenance"] = provenance(g_seed, inputs);
    emit_json(output, doc);
  }

  static Json stats_json(const PairStats& s) {
    return Json{{"mean_scc", s.mean_scc},   {"mean_dcc", s.mean_dcc},   {"scc_pairs", s.scc_pairs},
                {"dcc_pairs", s.dcc_pairs}, {"skipped_pairs", s.skipped_pairs}};
  }
};

// ---- generate --------------------------------------------------------------

struct GenerateCmd {
  std::string partition;
  std::string output;
  GenerationParams params;

  void run() {
    const CategoryPartition p = partition_from_json(read_json(partition), partition);
    params.seed = g_seed;
    const std::vector<Benchmark> group = generate_group(p, params);
    Json doc = benchmarks_to_json(group, p, {{"n", params.n}, {"k", params.k}, {"count", params.count},
                                             {"seed", params.seed}});
    const fs::path inputs[] = {partition};
    doc["provenance"] = provenance(g_seed, inputs);
    emit_json(output, doc);
  }
};

// ---- substitute ------------------------------------------------------------

struct SubstituteCmd {
  std::string input;
  std::string partition;
  std::string output;
  int steps = 5;
  bool keep_inputs = false;

  void run() const {
    const CategoryPartition p = partition_from_json(read_json(partition), partition);
    const Json in = read_json(input);
    const std::vector<Benchmark> group = benchmarks_from_json(in, input);
    require_covered(p, group, "the partition");
    ChainResult chains = substitution_chains(group, steps, p, g_seed);
    std::vector<Benchmark> out;
    if (keep_inputs && steps > 0) out.assign(group.begin(), group.end());
    out.insert(out.end(), chains.benchmarks.begin(), chains.benchmarks.end());

    Json params = in.at("params");
    params["steps"] = steps;
    params["substitution_seed"] = g_seed;
    Json doc = benchmarks_to_json(out, p, std::move(params));
    Json truncated = Json::array();
    for (const auto& [id, done] : chains.truncated) truncated.push_back({{"id", id}, {"completed_steps", done}});
    doc["truncated"] = std::move(truncated);
    const fs::path inputs[] = {input, partition};
    doc["provenance"] = provenance(g_seed, inputs);
    emit_json(output, doc);
    if (!chains.truncated.empty()) {
      std::cerr << "corrbench: " << chains.truncated.size() << " chains ran out of valid substitutions\n";
    }
  }
};

// ---- select ----------------------------------------------------------------

struct SelectCmd {
  std::string input;
  std::string matrix;
  std::string partition;
  std::string output;

  void run() const {
    const CategoryPartition p = partition_from_json(read_json(partition), partition);
    const OverlapMatrix m = csv::read_matrix(matrix);
    const Json in = read_json(input);
    const std::vector<Benchmark> group = benchmarks_from_json(in, input);
    if (group.empty()) throw Error(ErrorCode::NoScorableBenchmark, "'" + input + "' holds no benchmarks");
    require_covered(p, group, "the partition");
    const Selection sel = select_min_scc_overlap(group, m, p);
    if (sel.excluded > 0) {
      std::cerr << "corrbench: " << sel.excluded << " benchmarks have no same-category pair and were skipped\n";
    }
    const Benchmark& best = group[sel.index];
    Json doc = benchmarks_to_json(std::span(&best, 1), p, in.at("params"));
    doc["selection"] = {{"id", best.id}, {"scc_overlap", sel.score}, {"group_size", group.size()},
                        {"excluded", sel.excluded}};
    const fs::path inputs[] = {input, matrix, partition};
    doc["provenance"] = provenance(std::nullopt, inputs);
    emit_json(output, doc);
  }
};

// ---- correlate -------------------------------------------------------------

struct CorrelateCmd {
  std::string input;
  std::string accuracies;
  std::string natural;
  std::string output;

  void run() const {
    const AccuracyTable table = csv::read_accuracies(accuracies);
    const std::vector<Benchmark> group = benchmarks_from_json(read_json(input), input);
    if (group.empty()) throw Error(ErrorCode::EmptyBenchmark, "'" + input + "' holds no benchmarks");
    const RobustnessReport report = natural_correlation(group, table, natural);
    if (report.excluded > 0) {
      std::cerr << "corrbench: warning: " << report.excluded << " benchmarks had constant robustness and were excluded\n";
    }
    Json doc = report_to_json(report);
    const fs::path inputs[] = {input, accuracies};
    doc["provenance"] = provenance(std::nullopt, inputs);
    emit_json(output, doc);
  }
};

// ---- trend -----------------------------------------------------------------

struct TrendCmd {
  std::string accuracies;
  std::string partition;
  std::string output;
  TrendConfig config;
  SyntheticCohortConfig cohort;

  void run() {
    const CategoryPartition p = partition.empty() ? CategoryPartition::by_family(list_corruptions())
                                                  : partition_from_json(read_json(partition), partition);
    config.seed = g_seed;
    std::vector<fs::path> inputs;
    AccuracyTable table;
    if (accuracies.empty()) {
      cohort.categories = static_cast<int>(p.size());
      cohort.seed = substream_seed(g_seed, 1);
      cohort.natural_id = config.natural_id;
      table = simulate_cohort(cohort, p);
    } else {
      table = csv::read_accuracies(accuracies);
      inputs.emplace_back(accuracies);
    }
    if (!partition.empty()) inputs.emplace_back(partition);
    const TrendReport report = trend_report(p, table, config);

    Json cells = Json::array();
    for (const TrendCell& c : report.cells) {
      cells.push_back({{"n", c.n}, {"k", c.k}, {"mean_r", c.mean_r}, {"mean_p_value", c.mean_p_value},
                       {"benchmarks", c.benchmarks}});
    }
    Json buckets = Json::array();
    for (const TrendBucket& b : report.buckets) {
      buckets.push_back({{"std", b.tenths / 10.0}, {"mean_r", b.mean_r}, {"benchmarks", b.benchmarks}});
    }
    Json doc{{"natural", config.natural_id}, {"count", config.count}, {"cells", std::move(cells)},
             {"std_sweep", std::move(buckets)}, {"truncated_chains", report.truncated_chains}};
    doc["provenance"] = provenance(g_seed, inputs);
    emit_json(output, doc);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic corruption benchmarks and their correlation with natural distribution shift"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI file supplying option values; command-line flags take precedence");
  app.add_option("--seed", g_seed, "Global seed for every randomized step")->envname("CORRBENCH_SEED");

  ListCmd list;
  auto* c_list = app.add_subcommand("list", "Print the corruption roster");
  c_list->add_flag("--json", list.json, "Print as JSON");

  CorruptCmd corrupt;
  auto* c_corrupt = app.add_subcommand("corrupt", "Apply corruptions to every image under a directory");
  c_corrupt->add_option("--input", corrupt.input, "Directory of PNG/JPEG images")->required();
  c_corrupt->add_option("--output", corrupt.output, "Output root; writes <output>/<corruption>/<relative path>")
      ->required();
  c_corrupt->add_option("--corruptions", corrupt.corruptions, "Corruption ids (default: whole roster)")
      ->delimiter(',');
  c_corrupt->add_option("--severity", corrupt.severity, "Override every severity")->check(CLI::Range(0.0, 1.0));
  c_corrupt->add_option("--jobs", corrupt.jobs, "Worker threads (default: hardware concurrency)");

  SimulateCmd simulate;
  auto* c_sim = app.add_subcommand("simulate", "Write accuracies of a simulated overlap study and model cohort");
  c_sim->add_option("--output", simulate.output, "Accuracy CSV")->required();
  c_sim->add_option("--manifest", simulate.manifest, "Model manifest CSV for the overlap study");
  c_sim->add_option("--models", simulate.cohort.models, "Cohort size")->capture_default_str();
  c_sim->add_option("--skill-spread", simulate.cohort.skill_spread, "Per-category skill sd")->capture_default_str();
  c_sim->add_option("--noise", simulate.cohort.noise, "Observation noise sd on corruptions")->capture_default_str();
  c_sim->add_option("--natural-noise", simulate.cohort.natural_noise, "Observation noise sd on the natural distribution")
      ->capture_default_str();
  c_sim->add_option("--natural", simulate.cohort.natural_id, "Natural distribution id")->capture_default_str();

  OverlapCmd overlap;
  auto* c_overlap = app.add_subcommand("overlap", "Compute the overlap matrix from accuracies");
  c_overlap->add_option("--accuracies", overlap.accuracies, "Accuracy CSV")->required()->check(CLI::ExistingFile);
  c_overlap->add_option("--manifest", overlap.manifest, "Model manifest CSV")->required()->check(CLI::ExistingFile);
  c_overlap->add_option("--output", overlap.output, "Matrix CSV")->required();

  CategorizeCmd categorize;
  auto* c_cat = app.add_subcommand("categorize", "Cluster corruptions into categories");
  c_cat->add_option("--matrix", categorize.matrix, "Overlap matrix CSV")->required()->check(CLI::ExistingFile);
  c_cat->add_option("--output", categorize.output, "Partition JSON (default: stdout)");
  c_cat->add_option("--threshold", categorize.config.threshold, "Mean SCC correlation to exceed")
      ->capture_default_str();
  c_cat->add_option("--restarts", categorize.config.restarts, "k-means restarts per k")->capture_default_str();
  c_cat->add_option("--kmin", categorize.config.k_min, "Smallest k tried")->capture_default_str();
  c_cat->add_option("--kmax", categorize.config.k_max, "Largest k tried")->capture_default_str();
  c_cat->add_option("--k", categorize.fixed_k, "Cluster with this k instead of searching");

  GenerateCmd generate;
  auto* c_gen = app.add_subcommand("generate", "Generate a group of distinct benchmarks");
  c_gen->add_option("--partition", generate.partition, "Partition JSON")->required()->check(CLI::ExistingFile);
  c_gen->add_option("--n", generate.params.n, "Categories represented")->required();
  c_gen->add_option("--k", generate.params.k, "Representatives per category")->required();
  c_gen->add_option("--count", generate.params.count, "Benchmarks to generate")->capture_default_str();
  c_gen->add_option("--output", generate.output, "Benchmarks JSON (default: stdout)");

  SubstituteCmd substitute_cmd;
  auto* c_sub = app.add_subcommand("substitute", "Unbalance benchmarks by chains of substitutions");
  c_sub->add_option("--input", substitute_cmd.input, "Benchmarks JSON")->required()->check(CLI::ExistingFile);
  c_sub->add_option("--partition", substitute_cmd.partition, "Partition JSON")->required()->check(CLI::ExistingFile);
  c_sub->add_option("--steps", substitute_cmd.steps, "Substitutions per chain")->capture_default_str();
  c_sub->add_flag("--keep-inputs", substitute_cmd.keep_inputs, "Also emit the unmodified inputs");
  c_sub->add_option("--output", substitute_cmd.output, "Benchmarks JSON (default: stdout)");

  SelectCmd select;
  auto* c_sel = app.add_subcommand("select", "Pick the benchmark whose same-category corruptions overlap least");
  c_sel->add_option("--input", select.input, "Benchmarks JSON")->required()->check(CLI::ExistingFile);
  c_sel->add_option("--matrix", select.matrix, "Overlap matrix CSV")->required()->check(CLI::ExistingFile);
  c_sel->add_option("--partition", select.partition, "Partition JSON")->required()->check(CLI::ExistingFile);
  c_sel->add_option("--output", select.output, "Benchmarks JSON with the selected benchmark (default: stdout)");

  CorrelateCmd correlate;
  auto* c_corr = app.add_subcommand("correlate", "Correlate benchmark robustness with a natural distribution");
  c_corr->add_option("--input", correlate.input, "Benchmarks JSON")->required()->check(CLI::ExistingFile);
  c_corr->add_option("--accuracies", correlate.accuracies, "Accuracy CSV")->required()->check(CLI::ExistingFile);
  c_corr->add_option("--natural", correlate.natural, "Natural distribution id")->required();
  c_corr->add_option("--output", correlate.output, "Report JSON (default: stdout)");

  TrendCmd trend;
  auto* c_trend = app.add_subcommand("trend", "Mean correlation per (n, k) cell and per balance std");
  c_trend->add_option("--accuracies", trend.accuracies, "Accuracy CSV (default: simulate a cohort)")
      ->check(CLI::ExistingFile);
  c_trend->add_option("--partition", trend.partition, "Partition JSON (default: roster families)")
      ->check(CLI::ExistingFile);
  c_trend->add_option("--count", trend.config.count, "Benchmarks per cell")->capture_default_str();
  c_trend->add_option("--steps", trend.config.sweep_steps, "Substitutions per sweep chain")->capture_default_str();
  c_trend->add_option("--natural", trend.config.natural_id, "Natural distribution id")->capture_default_str();
  c_trend->add_option("--skill-spread", trend.cohort.skill_spread, "Simulated cohort: per-category skill sd")
      ->capture_default_str();
  c_trend->add_option("--noise", trend.cohort.noise, "Simulated cohort: noise sd on corruptions")
      ->capture_default_str();
  c_trend->add_option("--natural-noise", trend.cohort.natural_noise, "Simulated cohort: noise sd on the natural distribution")
      ->capture_default_str();
  c_trend->add_option("--output", trend.output, "Report JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_list) list.run();
    if (*c_corrupt) return corrupt.run();
    if (*c_sim) simulate.run();
    if (*c_overlap) overlap.run();
    if (*c_cat) categorize.run();
    if (*c_gen) generate.run();
    if (*c_sub) substitute_cmd.run();
    if (*c_sel) select.run();
    if (*c_corr) correlate.run();
    if (*c_trend) trend.run();
  } catch (const Error& e) {
    std::cerr << "corrbench: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "corrbench: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
