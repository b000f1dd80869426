// Copyright 2026 The harbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "harbench/dataset.hpp"
#include "harbench/features.hpp"
#include "harbench/parallel.hpp"
#include "harbench/reference.hpp"
#include "harbench/simd/kernels.hpp"
#include "json.hpp"

namespace harbench::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p, Errc missing) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(missing, p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Runs a command body, mapping failures to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(category(e.code()));
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputeFailure;
  }
}

void require_dir(const fs::path& root) {
  if (root.empty() || !fs::is_directory(root)) {
    throw Error(Errc::InvalidArgument, "dataset root '" + root.string() + "' is not a directory");
  }
}

[[noreturn]] void bad_key(const std::string& key, const std::string& want) {
  throw Error(Errc::InvalidConfig, "config key '" + key + "' must be " + want);
}

std::uint64_t as_unsigned(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) bad_key(key, "a non-negative integer");
  return v.get<std::uint64_t>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_key(key, "an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_key(key, "a string");
  return v.get<std::string>();
}

// One row of the comparison table.
struct Row {
  std::string model, input, source;
  double acc = 0, acc_std = reference::kNotReported;
  double f1 = 0, f1_std = reference::kNotReported;
  double auc = 0, auc_std = reference::kNotReported;
  double time_s = reference::kNotReported;
  double published_acc = reference::kNotReported;
};

std::vector<Row> comparison_rows(const std::vector<evaluation::EvalReport>& runs, const std::vector<std::string>& labels) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    Row row{r.model, r.input, "measured: " + (i < labels.size() ? labels[i] : r.model)};
    row.acc = r.accuracy.mean;
    row.acc_std = r.accuracy.std;
    row.f1 = r.macro_f1.mean;
    row.f1_std = r.macro_f1.std;
    row.auc = r.ovo_auc.mean;
    row.auc_std = r.ovo_auc.std;
    row.time_s = r.train_time_s.mean;
    if (const auto* ref = reference::find_monte_carlo(r.model, r.input)) row.published_acc = ref->accuracy;
    rows.push_back(row);
  }
  for (const auto& lit : reference::kLiterature) {
    Row row{std::string(lit.method), "-", "source: published"};
    row.acc = lit.accuracy;
    row.f1 = lit.f1;
    row.auc = lit.auc;
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.acc > b.acc; });
  return rows;
}

std::string cell(double v, double sd, const char* spec) {
  if (std::isnan(v)) return "-";
  if (std::isnan(sd)) return fmt(spec, v);
  return fmt(spec, v) + " ± " + fmt(spec, sd);
}

std::string plain(double v, const char* spec) { return std::isnan(v) ? "" : fmt(spec, v); }

}  // namespace

int exit_code(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::validation: return kValidation;
    case ErrorCategory::data: return kDataDefect;
    case ErrorCategory::compute: return kComputeFailure;
  }
  return kComputeFailure;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "dataset_root", "model",     "input",     "iterations", "train_fraction",   "output_dir",
      "seed_base",    "split_strategy", "threads", "rounds",   "max_depth",        "eta",
      "lambda_l2",    "alpha_l1",  "gamma",     "min_child_weight", "n_bins", "target_features", "lambdas"};
  return keys;
}

void ExperimentConfig::merge_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
  if (doc.contains("format")) {
    if (doc["format"] != "harbench.manifest" || !doc.contains("config")) {
      throw Error(Errc::InvalidConfig, "unrecognized document format");
    }
    doc = doc["config"];
  }
  const auto& keys = config_keys();
  for (const auto& [key, v] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
    }
    if (key == "dataset_root") dataset_root = as_string(v, key);
    else if (key == "model") model.kind = evaluation::parse_model(as_string(v, key));
    else if (key == "input") input = evaluation::InputSpec::parse(as_string(v, key));
    else if (key == "iterations") mc.iterations = as_unsigned(v, key);
    else if (key == "train_fraction") mc.train_fraction = as_number(v, key);
    else if (key == "output_dir") output_dir = as_string(v, key);
    else if (key == "seed_base") mc.seed_base = as_unsigned(v, key);
    else if (key == "split_strategy") mc.strategy = evaluation::parse_strategy(as_string(v, key));
    else if (key == "threads") threads = as_unsigned(v, key);
    else if (key == "rounds") model.gbdt.rounds = as_int(v, key);
    else if (key == "max_depth") model.gbdt.max_depth = as_int(v, key);
    else if (key == "eta") model.gbdt.eta = as_number(v, key);
    else if (key == "lambda_l2") model.gbdt.lambda_l2 = as_number(v, key);
    else if (key == "alpha_l1") model.gbdt.alpha_l1 = as_number(v, key);
    else if (key == "gamma") model.gbdt.gamma = as_number(v, key);
    else if (key == "min_child_weight") model.gbdt.min_child_weight = as_number(v, key);
    else if (key == "n_bins") model.gbdt.n_bins = as_int(v, key);
    else if (key == "target_features") model.target_features = as_unsigned(v, key);
    else if (key == "lambdas") {
      if (!v.is_array()) bad_key(key, "an array of numbers");
      model.lambdas.clear();
      for (const auto& x : v) model.lambdas.push_back(as_number(x, key));
    }
  }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  ExperimentConfig c;
  c.merge_json(text);
  return c;
}

std::string ExperimentConfig::to_json() const {
  const auto& g = model.gbdt;
  const json j = {
      {"dataset_root", dataset_root.string()},
      {"model", std::string(evaluation::model_name(model.kind))},
      {"input", input.tag()},
      {"iterations", mc.iterations},
      {"train_fraction", mc.train_fraction},
      {"output_dir", output_dir.string()},
      {"seed_base", mc.seed_base},
      {"split_strategy", std::string(evaluation::strategy_name(mc.strategy))},
      {"threads", threads},
      {"rounds", g.rounds},
      {"max_depth", g.max_depth},
      {"eta", g.eta},
      {"lambda_l2", g.lambda_l2},
      {"alpha_l1", g.alpha_l1},
      {"gamma", g.gamma},
      {"min_child_weight", g.min_child_weight},
      {"n_bins", g.n_bins},
      {"target_features", model.target_features},
      {"lambdas", model.lambdas},
  };
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (model.kind == evaluation::ModelKind::gbdt && !input.precomputed) {
    throw Error(Errc::IncompatibleInput, "gbdt runs on the precomputed feature matrix only, not " + input.tag());
  }
  if (dataset_root.empty()) throw Error(Errc::InvalidConfig, "dataset_root is required");
  if (output_dir.empty()) throw Error(Errc::InvalidConfig, "output_dir is required");
  if (mc.iterations == 0) throw Error(Errc::InvalidConfig, "iterations must be at least 1");
  if (!(mc.train_fraction > 0.0 && mc.train_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "train_fraction must lie in (0, 1)");
  }
  model.gbdt.validate();
  if (model.target_features < minirocket::kKernelCount) throw Error(Errc::InvalidConfig, "target_features must be >= 84");
  if (model.lambdas.empty()) throw Error(Errc::InvalidConfig, "lambdas must not be empty");
  for (double l : model.lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(Errc::InvalidConfig, "lambdas must be positive");
  }
}

int cmd_verify(const fs::path& root, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_dir(root);
    const auto bundle = dataset::load_bundle(root);
    const auto report = dataset::verify_bundle(bundle);
    out << report.to_text();
    for (const auto& w : bundle.warnings) out << "warning: " << w << '\n';
    if (!report.all_classes_present()) {
      err << "error: dataset is missing one or more activity classes\n";
      return int{kDataDefect};
    }
    return int{kOk};
  });
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    require_dir(config.dataset_root);
    fs::create_directories(config.output_dir);
    if (config.threads > 0) set_thread_count(config.threads);

    const auto bundle = dataset::load_bundle(config.dataset_root);
    out << "loaded " << bundle.size() << " instances from " << config.dataset_root.string() << '\n';
    out << "model " << evaluation::model_name(config.model.kind) << ", input " << config.input.tag() << ", "
        << config.mc.iterations << " iterations\n";
    const auto report = evaluation::run_mccv(bundle, config.model, config.input, config.mc);

    write_file(config.output_dir / "report.json", evaluation::report_to_json(report));
    write_file(config.output_dir / "report.csv", evaluation::report_to_csv(report));
    write_file(config.output_dir / "confusion.csv", evaluation::confusion_to_csv(report.confusion));
    json seeds = json::array();
    for (const auto& r : report.results) seeds.push_back(r.seed);
    const json manifest = {
        {"format", "harbench.manifest"},
        {"version", std::string(kVersion)},
        {"config", json::parse(config.to_json())},
        {"seeds", seeds},
        {"simd", std::string(simd::isa_name(simd::active_kernels().isa))},
        {"threads", thread_count()},
    };
    write_file(config.output_dir / "run-manifest.json", manifest.dump(2));

    for (const auto& r : report.results) {
      out << "  iteration " << r.iteration << ": accuracy " << fmt("%.4f", r.accuracy) << ", F1 "
          << fmt("%.4f", r.macro_f1) << ", AUC " << fmt("%.4f", r.ovo_auc) << ", fit " << fmt("%.1f", r.train_time_s)
          << " s\n";
    }
    out << "accuracy " << cell(report.accuracy.mean, report.accuracy.std, "%.4f") << ", F1 "
        << cell(report.macro_f1.mean, report.macro_f1.std, "%.4f") << ", AUC "
        << cell(report.ovo_auc.mean, report.ovo_auc.std, "%.4f") << ", training time "
        << fmt("%.1f", report.train_time_s.mean) << " s\n";
    out << evaluation::confusion_to_text(report.confusion);
    out << "wrote " << config.output_dir.string() << '\n';
    return int{kOk};
  });
}

std::string comparison_markdown(const std::vector<evaluation::EvalReport>& runs, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "| Rank | Model | Input | Accuracy | F1 | AUC | Training time (s) | Published accuracy | Source |\n";
  out << "|---:|---|---|---|---|---|---:|---:|---|\n";
  std::size_t rank = 1;
  for (const auto& r : comparison_rows(runs, labels)) {
    const bool measured = !std::isnan(r.acc_std);
    const char* spec = measured ? "%.4f" : "%.3f";
    out << "| " << rank++ << " | " << r.model << " | " << r.input << " | " << cell(r.acc, r.acc_std, spec) << " | "
        << cell(r.f1, r.f1_std, spec) << " | " << cell(r.auc, r.auc_std, spec) << " | "
        << (std::isnan(r.time_s) ? "-" : fmt("%.1f", r.time_s)) << " | "
        << (std::isnan(r.published_acc) ? "-" : fmt("%.4f", r.published_acc)) << " | " << r.source << " |\n";
  }
  return out.str();
}

std::string comparison_csv(const std::vector<evaluation::EvalReport>& runs, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "rank,model,input,accuracy,accuracy_std,f1,f1_std,auc,auc_std,train_time_s,published_accuracy,source\n";
  std::size_t rank = 1;
  for (const auto& r : comparison_rows(runs, labels)) {
    out << rank++ << ',' << r.model << ',' << r.input << ',' << plain(r.acc, "%.6f") << ',' << plain(r.acc_std, "%.6f")
        << ',' << plain(r.f1, "%.6f") << ',' << plain(r.f1_std, "%.6f") << ',' << plain(r.auc, "%.6f") << ','
        << plain(r.auc_std, "%.6f") << ',' << plain(r.time_s, "%.3f") << ',' << plain(r.published_acc, "%.4f") << ','
        << r.source << '\n';
  }
  return out.str();
}

int cmd_report(const std::vector<fs::path>& run_dirs, const std::optional<fs::path>& out_dir, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    if (run_dirs.empty()) throw Error(Errc::InvalidArgument, "report needs at least one run directory");
    std::vector<evaluation::EvalReport> runs;
    std::vector<std::string> labels;
    for (const auto& dir : run_dirs) {
      runs.push_back(evaluation::report_from_json(read_file(dir / "report.json", Errc::MissingReport)));
      labels.push_back(dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string());
    }
    const std::string md = comparison_markdown(runs, labels);
    out << md;
    if (out_dir) {
      fs::create_directories(*out_dir);
      write_file(*out_dir / "comparison.md", md);
      write_file(*out_dir / "comparison.csv", comparison_csv(runs, labels));
    }
    return int{kOk};
  });
}

int cmd_features_compute(const fs::path& root, const fs::path& csv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_dir(root);
    const auto bundle = dataset::load_bundle(root);
    const auto& catalog = features::FeatureCatalog::standard();
    const std::size_t n = bundle.size(), d = catalog.size();
    MatrixD values(n, d);
    std::vector<std::vector<std::size_t>> degenerate(n);
    parallel_for(n, [&](std::size_t i) {
      auto fv = features::compute_feature_vector(bundle.inertial.window(i), catalog);
      std::copy(fv.values.begin(), fv.values.end(), values.row(i).begin());
      degenerate[i] = std::move(fv.degenerate);
    });

    const auto names = catalog.names();
    std::ostringstream text;
    text << "subject,activity";
    for (const auto& name : names) text << ",\"" << name << '"';
    text << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      text << bundle.subjects[i] << ',' << dataset::activity_name(bundle.labels[i]);
      for (double v : values.row(i)) text << ',' << fmt("%.10g", v);
      text << '\n';
    }
    if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
    write_file(csv, text.str());

    // Sidecar: degenerate-window counts and agreement with shipped columns.
    std::vector<std::size_t> degenerate_count(d, 0);
    for (const auto& list : degenerate) {
      for (auto j : list) ++degenerate_count[j];
    }
    json deg = json::object(), corr = json::object();
    for (std::size_t j = 0; j < d; ++j) {
      if (degenerate_count[j]) deg[names[j]] = degenerate_count[j];
      const auto& shipped = bundle.features.names;
      const auto it = std::find(shipped.begin(), shipped.end(), names[j]);
      if (it == shipped.end()) continue;
      const auto k = static_cast<std::size_t>(it - shipped.begin());
      double ma = 0, mb = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ma += values(i, j);
        mb += bundle.features.values(i, k);
      }
      ma /= static_cast<double>(n);
      mb /= static_cast<double>(n);
      double sab = 0, saa = 0, sbb = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = values(i, j) - ma, b = bundle.features.values(i, k) - mb;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
      }
      if (saa > 0 && sbb > 0) corr[names[j]] = sab / std::sqrt(saa * sbb);
    }
    const json sidecar = {
        {"format", "harbench.features"},
        {"version", std::string(kVersion)},
        {"rows", n},
        {"columns", d},
        {"pipeline",
         {{"median_window", 3},
          {"noise_filter", "butterworth order 3, 20 Hz, zero phase"},
          {"gravity_filter", "butterworth order 3, 0.3 Hz, zero phase"},
          {"sample_rate_hz", 50}}},
        {"degenerate_windows", deg},
        {"correlation_with_shipped", corr},
    };
    fs::path side = csv;
    side += ".json";
    write_file(side, sidecar.dump(2));
    out << "wrote " << n << " x " << d << " features to " << csv.string() << " (sidecar " << side.string() << ")\n";
    return int{kOk};
  });
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"harbench: human-activity-recognition benchmark engine"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string verify_root;
  auto* verify = app.add_subcommand("verify", "Load and check a dataset directory");
  verify->add_option("root", verify_root, "Dataset root (the directory holding train/ and test/)")->required();

  std::string config_path, model, input, out_dir, dataset_root, strategy;
  std::size_t iterations = 0, threads = 0;
  double fraction = 0;
  std::uint64_t seed_base = 0;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run->add_option("--config", config_path, "Flat JSON config or a run-manifest.json to replay");
  auto* o_model = run->add_option("--model", model, "gbdt | minirocket");
  auto* o_input = run->add_option("--input", input, "precomputed | channel:<name>");
  auto* o_iter = run->add_option("--iterations", iterations, "Monte Carlo iterations");
  auto* o_frac = run->add_option("--train-fraction", fraction, "Training share of each split");
  auto* o_out = run->add_option("--out", out_dir, "Output directory");
  auto* o_seed = run->add_option("--seed-base", seed_base, "Seed of iteration 0");
  auto* o_data = run->add_option("--dataset", dataset_root, "Dataset root");
  auto* o_threads = run->add_option("--threads", threads, "Worker threads (0 = default)");
  auto* o_split = run->add_option("--split", strategy, "instance | stratified | subject_disjoint");

  std::vector<std::string> report_dirs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Compare finished runs with published results");
  report->add_option("dirs", report_dirs, "Run directories holding report.json")->required();
  auto* o_report_out = report->add_option("--out", report_out, "Also write comparison.md and comparison.csv here");

  std::string features_root, features_csv;
  auto* feats = app.add_subcommand("features", "Feature pipeline commands");
  feats->require_subcommand(1);
  auto* compute = feats->add_subcommand("compute", "Recompute the 561 features from the raw windows");
  compute->add_option("root", features_root, "Dataset root")->required();
  compute->add_option("--out", features_csv, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  if (verify->parsed()) return cmd_verify(verify_root, out, err);
  if (report->parsed()) {
    std::vector<fs::path> dirs(report_dirs.begin(), report_dirs.end());
    std::optional<fs::path> where;
    if (o_report_out->count()) where = report_out;
    return cmd_report(dirs, where, out, err);
  }
  if (compute->parsed()) return cmd_features_compute(features_root, features_csv, out, err);

  // run: defaults < config file < flags
  return guarded(err, [&] {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg.merge_json(read_file(config_path, Errc::InvalidArgument));
    if (o_model->count()) cfg.model.kind = evaluation::parse_model(model);
    if (o_input->count()) cfg.input = evaluation::InputSpec::parse(input);
    if (o_iter->count()) cfg.mc.iterations = iterations;
    if (o_frac->count()) cfg.mc.train_fraction = fraction;
    if (o_out->count()) cfg.output_dir = out_dir;
    if (o_seed->count()) cfg.mc.seed_base = seed_base;
    if (o_data->count()) cfg.dataset_root = dataset_root;
    if (o_threads->count()) cfg.threads = threads;
    if (o_split->count()) cfg.mc.strategy = evaluation::parse_strategy(strategy);
    return cmd_run(cfg, out, err);
  });
}

}  // namespace harbench::cli
