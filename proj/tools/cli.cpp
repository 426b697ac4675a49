#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "arcgd/report.hpp"

namespace arcgd::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void add_dataset_flags(CLI::App* cmd, std::string& data, bool& synthetic,
                       std::size_t& subset) {
  auto* data_opt =
      cmd->add_option("--data", data, "CIFAR-10 binary file or directory");
  cmd->add_flag("--synthetic", synthetic, "use the built-in synthetic dataset")
      ->excludes(data_opt);
  cmd->add_option("--subset", subset,
                  "keep only the first N records before the split");
}

void require_dataset_choice(const std::string& data, bool synthetic) {
  if (data.empty() && !synthetic)
    throw UsageError("one of --data or --synthetic is required", 1);
}

std::string fmt_acc(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

Metadata base_metadata(std::uint64_t seed, std::string command) {
  Metadata meta;
  meta.master_seed = seed;
  meta.command = std::move(command);
  return meta;
}

int run_rosenbrock(const RosenbrockArgs& a) {
  ConvergencePolicy policy;
  policy.max_iterations = a.max_iters;
  const MatrixConfig cfg =
      a.config == "A" ? MatrixConfig::A : MatrixConfig::B;

  const std::vector<TestSetResult> results =
      run_matrix(cfg, a.dims, a.runs, policy, a.seed, a.trace_every);

  const fs::path out(a.out);
  std::vector<RunSummary> all_summaries;
  for (const TestSetResult& set : results) {
    emit_run_csv(set.records, out / (set.name + "_records.csv"));
    for (const LabeledTrace& tr : set.traces)
      emit_rosenbrock_trace_csv(
          tr.points, out / (set.name + "_" + tr.optimizer + "_run" +
                            std::to_string(tr.run_index) + "_trace.csv"));
    all_summaries.insert(all_summaries.end(), set.summaries.begin(),
                         set.summaries.end());
  }

  Metadata meta = base_metadata(a.seed, "bench-rosenbrock");
  meta.settings["config"] = a.config;
  {
    std::string dims;
    for (std::size_t d : a.dims)
      dims += (dims.empty() ? "" : ",") + std::to_string(d);
    meta.settings["dims"] = dims;
  }
  meta.settings["runs"] = std::to_string(a.runs);
  meta.settings["max_iters"] = std::to_string(a.max_iters);
  meta.settings["trace_every"] = std::to_string(a.trace_every);
  emit_summary_json(all_summaries, meta, out / "summary.json");
  emit_metadata_json(meta, out / "metadata.json");

  for (const RunSummary& s : all_summaries) {
    std::printf("%-8s %-6s converged %llu/%llu", s.test_set.c_str(),
                s.optimizer.c_str(),
                static_cast<unsigned long long>(s.converged_runs),
                static_cast<unsigned long long>(s.total_runs));
    if (s.avg_iterations)
      std::printf("  avg_iters %.0f  avg_distance %.3e", *s.avg_iterations,
                  *s.avg_distance);
    std::printf("\n");
  }
  std::printf("wrote %s\n", (out / "summary.json").string().c_str());
  return 0;
}

Dataset load_dataset(const std::string& data, bool synthetic,
                     std::size_t subset, std::uint64_t seed) {
  if (synthetic) return synthetic_dataset(2000, 32, 4, seed);
  return load_cifar10_binary(data, seed, subset);
}

OptimizerSpec resolve_spec(const std::string& optimizer, double eta_low) {
  OptimizerSpec spec = make_optimizer_spec(optimizer);
  if (eta_low > 0.0) {
    if (auto* cfg = std::get_if<ArcGDConfig>(&spec.config)) {
      cfg->eta_low = eta_low;
      for (const std::string& w : cfg->validate())
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else {
      std::fprintf(stderr, "warning: --eta-low ignored for %s\n",
                   optimizer.c_str());
    }
  }
  return spec;
}

TrainPolicy make_policy(std::uint64_t seed, std::uint64_t max_iters) {
  TrainPolicy policy;
  policy.seed = seed;
  policy.max_iterations = max_iters;
  std::erase_if(policy.eval_checkpoints,
                [&](std::uint64_t c) { return c > max_iters; });
  if (policy.eval_checkpoints.empty() ||
      policy.eval_checkpoints.back() != max_iters)
    policy.eval_checkpoints.push_back(max_iters);
  return policy;
}

int run_train(const TrainArgs& a) {
  require_dataset_choice(a.data, a.synthetic);
  const Dataset ds = load_dataset(a.data, a.synthetic, a.subset, a.seed);
  const MLPArchitecture arch =
      make_architecture(a.arch, ds.train_features.cols, ds.num_classes);
  const OptimizerSpec spec = resolve_spec(a.optimizer, a.eta_low);
  const TrainPolicy policy = make_policy(a.seed, a.max_iters);

  const TrainResult result = train(arch, spec, policy, ds);

  const fs::path out(a.out);
  const fs::path curve_file =
      out / ("curve_" + a.arch + "_" + a.optimizer + ".csv");
  emit_mlp_curve_csv(result.curve, curve_file);

  Metadata meta = base_metadata(a.seed, "train-mlp");
  meta.settings["arch"] = a.arch;
  meta.settings["optimizer"] = a.optimizer;
  meta.settings["dataset"] = a.synthetic ? "synthetic" : a.data;
  meta.settings["subset"] = std::to_string(a.subset);
  meta.settings["max_iters"] = std::to_string(a.max_iters);
  meta.settings["early_stop_monitor"] = "test_accuracy";
  if (a.eta_low > 0.0) meta.settings["eta_low"] = std::to_string(a.eta_low);
  emit_metadata_json(meta, out / "metadata.json");

  const CurvePoint& last = result.curve.back();
  std::printf("%s/%s: %llu iterations%s  train_acc %s  test_acc %s\n",
              a.arch.c_str(), result.optimizer.c_str(),
              static_cast<unsigned long long>(result.iterations),
              result.early_stopped ? " (early stop)" : "",
              fmt_acc(last.train_acc).c_str(), fmt_acc(last.test_acc).c_str());
  std::printf("wrote %s\n", curve_file.string().c_str());
  return 0;
}

int run_ablate(const AblateArgs& a) {
  require_dataset_choice(a.data, a.synthetic);
  const Dataset ds = load_dataset(a.data, a.synthetic, a.subset, a.seed);
  const std::vector<std::string> archs = split_list(a.arch);
  if (archs.empty()) throw UsageError("--arch must name at least one preset", 1);
  const TrainPolicy policy = make_policy(a.seed, a.max_iters);

  const std::vector<AblationRow> rows =
      eta_low_ablation(archs, ds, policy, 0.01, a.eta_low);

  const fs::path out(a.out);
  emit_ablation_csv(rows, out / "ablation_eta_low.csv");

  Metadata meta = base_metadata(a.seed, "ablate-eta-low");
  meta.settings["arch"] = a.arch;
  meta.settings["dataset"] = a.synthetic ? "synthetic" : a.data;
  meta.settings["subset"] = std::to_string(a.subset);
  meta.settings["max_iters"] = std::to_string(a.max_iters);
  meta.settings["eta_low_arms"] = "0.01," + std::to_string(a.eta_low);
  emit_metadata_json(meta, out / "metadata.json");

  for (const AblationRow& r : rows)
    std::printf("%-14s it %6llu  acc(%.3g) %s  acc(%.3g) %s  delta %+.4f\n",
                r.arch.c_str(), static_cast<unsigned long long>(r.iteration),
                r.eta_low_first, fmt_acc(r.acc_first).c_str(),
                r.eta_low_second, fmt_acc(r.acc_second).c_str(), r.delta);
  std::printf("wrote %s\n", (out / "ablation_eta_low.csv").string().c_str());
  return 0;
}

int run_report(const ReportArgs& a) {
  if (a.data.empty()) throw UsageError("report requires --data", 1);

  std::vector<fs::path> files;
  if (fs::is_directory(a.data)) {
    for (const auto& entry : fs::directory_iterator(a.data))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.emplace_back(a.data);
  }
  if (files.empty()) throw UsageError("no records CSV found under --data", 1);

  std::vector<RunSummary> summaries;
  for (const fs::path& file : files) {
    std::vector<RunRecord> records = parse_run_csv(file);
    std::string set = file.stem().string();
    if (set.size() > 8 && set.ends_with("_records"))
      set.resize(set.size() - 8);
    for (RunRecord& r : records) r.test_set = set;

    std::vector<std::string> names;
    for (const RunRecord& r : records)
      if (std::find(names.begin(), names.end(), r.optimizer) == names.end())
        names.push_back(r.optimizer);
    std::sort(names.begin(), names.end());
    for (const std::string& name : names) {
      std::vector<RunRecord> group;
      for (const RunRecord& r : records)
        if (r.optimizer == name) group.push_back(r);
      summaries.push_back(summarize_runs(group));
    }
  }

  Metadata meta = base_metadata(0, "report");
  meta.settings["data"] = a.data;
  emit_summary_json(summaries, meta, fs::path(a.out) / "summary.json");
  std::printf("summarized %zu file(s) -> %s\n", files.size(),
              (fs::path(a.out) / "summary.json").string().c_str());
  return 0;
}

}  // namespace

CliCommand parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"ArcGD optimizer benchmarks"};
  app.require_subcommand(1);

  RosenbrockArgs rb;
  auto* rb_cmd = app.add_subcommand(
      "bench-rosenbrock", "stochastic Rosenbrock optimizer comparison");
  rb_cmd->add_option("--config", rb.config, "test matrix, A or B")
      ->check(CLI::IsMember({"A", "B"}));
  rb_cmd->add_option("--dims", rb.dims, "comma-separated dimensions")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  rb_cmd->add_option("--runs", rb.runs, "runs per dimension")
      ->check(CLI::PositiveNumber);
  rb_cmd->add_option("--seed", rb.seed, "master seed");
  rb_cmd->add_option("--max-iters", rb.max_iters, "iteration cap per run")
      ->check(CLI::PositiveNumber);
  rb_cmd->add_option("--trace-every", rb.trace_every,
                     "write loss traces, subsampled every k iterations")
      ->check(CLI::NonNegativeNumber);
  rb_cmd->add_option("--out", rb.out, "output directory");

  TrainArgs tr;
  auto* tr_cmd =
      app.add_subcommand("train-mlp", "train one MLP with one optimizer");
  tr_cmd->add_option("--arch", tr.arch, "architecture preset")
      ->check(CLI::IsMember({"tiny", "shallow", "medium", "deep", "very_deep",
                             "const_shallow", "const_medium", "const_deep"}));
  tr_cmd->add_option("--optimizer", tr.optimizer, "optimizer id")
      ->check(CLI::IsMember({"arcgd", "adam", "adamw", "lion", "sgd"}));
  add_dataset_flags(tr_cmd, tr.data, tr.synthetic, tr.subset);
  tr_cmd->add_option("--seed", tr.seed, "master seed");
  tr_cmd->add_option("--max-iters", tr.max_iters, "training iterations")
      ->check(CLI::PositiveNumber);
  tr_cmd->add_option("--eta-low", tr.eta_low, "ArcGD floor budget override")
      ->check(CLI::PositiveNumber);
  tr_cmd->add_option("--out", tr.out, "output directory");

  AblateArgs ab;
  auto* ab_cmd = app.add_subcommand(
      "ablate-eta-low", "compare ArcGD eta_low values across architectures");
  ab_cmd->add_option("--arch", ab.arch, "comma-separated preset names");
  add_dataset_flags(ab_cmd, ab.data, ab.synthetic, ab.subset);
  ab_cmd->add_option("--seed", ab.seed, "master seed");
  ab_cmd->add_option("--max-iters", ab.max_iters, "training iterations")
      ->check(CLI::PositiveNumber);
  ab_cmd->add_option("--eta-low", ab.eta_low, "second-arm eta_low")
      ->check(CLI::PositiveNumber);
  ab_cmd->add_option("--out", ab.out, "output directory");

  ReportArgs rp;
  auto* rp_cmd = app.add_subcommand(
      "report", "re-summarize records CSV files into summary JSON");
  rp_cmd->add_option("--data", rp.data, "records CSV file or directory");
  rp_cmd->add_option("--out", rp.out, "output directory");

  std::vector<const char*> argv;
  argv.push_back("arcgd");
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    if (e.get_exit_code() == 0) {
      msg << app.help();
    } else {
      msg << e.what() << "\n" << app.help();
    }
    throw UsageError(msg.str(), e.get_exit_code() == 0 ? 0 : 1);
  }

  if (rb_cmd->parsed()) return rb;
  if (tr_cmd->parsed()) {
    require_dataset_choice(tr.data, tr.synthetic);
    return tr;
  }
  if (ab_cmd->parsed()) {
    require_dataset_choice(ab.data, ab.synthetic);
    return ab;
  }
  if (rp.data.empty()) throw UsageError("report requires --data", 1);
  return rp;
}

int run_command(const CliCommand& cmd) {
  return std::visit(
      [](const auto& args) -> int {
        using T = std::decay_t<decltype(args)>;
        if constexpr (std::is_same_v<T, RosenbrockArgs>)
          return run_rosenbrock(args);
        else if constexpr (std::is_same_v<T, TrainArgs>)
          return run_train(args);
        else if constexpr (std::is_same_v<T, AblateArgs>)
          return run_ablate(args);
        else
          return run_report(args);
      },
      cmd);
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_command(parse_cli(args));
  } catch (const UsageError& e) {
    std::fprintf(e.exit_code == 0 ? stdout : stderr, "%s\n", e.what());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace arcgd::cli
