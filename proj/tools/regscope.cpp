// regscope - dead-box triage toolkit over registry/filesystem artifacts.
//
// Subcommands:
//   caro     parse a vendor detection name
//   catalog  list or validate artifact catalogs
//   extract  behavior reports -> labeled dataset CSV
//   train    dataset CSV -> model JSON
//   predict  model + report -> triage report
//   eval     model + dataset -> accuracy/confusion
//   grid     split-ratio x classifier experiment table
//   datagen  synthetic dataset from class profiles
//
// Exit codes: 0 success, 1 usage error, 2 data/environment error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "regscope/regscope.hpp"
#include "regscope/reputation_http.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) regscope::fail(regscope::ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    regscope::fail(regscope::ErrorCode::IoError, "cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) regscope::fail(regscope::ErrorCode::IoError, "cannot open " + path);
  out << bytes;
  out.flush();
  if (!out)
    regscope::fail(regscope::ErrorCode::IoError, "cannot write " + path);
}

void emit(const std::string& bytes, const std::string& out_path) {
  if (out_path.empty())
    std::cout << bytes;
  else
    write_file(out_path, bytes);
}

// --catalog flag, then REGSCOPE_CATALOG, then the builtin table.
regscope::Catalog load_catalog(const std::string& flag_value) {
  std::string path = flag_value;
  if (path.empty())
    if (const char* env = std::getenv("REGSCOPE_CATALOG")) path = env;
  if (path.empty()) return regscope::Catalog::builtin();
  return regscope::Catalog::from_manifest(read_file(path));
}

regscope::ReportFormat parse_format(const std::string& name) {
  if (name == "auto") return regscope::ReportFormat::Auto;
  if (name == "cuckoo") return regscope::ReportFormat::Cuckoo;
  if (name == "native") return regscope::ReportFormat::Native;
  regscope::fail(regscope::ErrorCode::InvalidArgument,
                 "unknown report format '" + name + "'");
}

regscope::ClassSet parse_class_set(const std::string& name) {
  auto set = regscope::class_set_from_name(name);
  if (!set)
    regscope::fail(regscope::ErrorCode::InvalidArgument,
                   "unknown class set '" + name + "'");
  return *set;
}

regscope::Class parse_class_arg(const std::string& text) {
  if (auto c = regscope::class_from_name(text)) return *c;
  try {
    std::size_t used = 0;
    int code = std::stoi(text, &used);
    if (used == text.size())
      if (auto c = regscope::class_from_code(code)) return *c;
  } catch (const std::exception&) {
  }
  regscope::fail(regscope::ErrorCode::InvalidArgument,
                 "unknown class '" + text + "'");
}

json caro_to_json(const regscope::CaroName& n) {
  json out;
  out["raw"] = n.raw;
  out["type"] = n.type.empty() ? json() : json(n.type);
  out["platform"] = n.platform.empty() ? json() : json(n.platform);
  out["family"] = n.family;
  out["variant"] = n.variant.empty() ? json() : json(n.variant);
  out["suffixes"] = n.suffixes;
  out["residue"] = n.residue.empty() ? json() : json(n.residue);
  out["conforming"] = n.conforming;
  out["nonconforming_reason"] =
      n.nonconforming_reason.empty() ? json() : json(n.nonconforming_reason);
  auto cls = regscope::coarse_class(n);
  out["coarse_class"] = cls ? json(regscope::class_name(*cls)) : json();
  return out;
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

struct ExtractOptions {
  std::string report_path;
  std::string format = "auto";
  std::string label;
  std::string reputation_file;
  std::string reputation_url;
  int reputation_threshold = regscope::kDefaultReputationThreshold;
  std::string catalog_path;
  std::string out_path;
};

int cmd_extract(const ExtractOptions& opt) {
  regscope::Catalog catalog = load_catalog(opt.catalog_path);
  regscope::LocationMatcher matcher(catalog);
  regscope::ReportFormat fmt = parse_format(opt.format);

  std::optional<regscope::Class> fixed_label;
  if (!opt.label.empty()) fixed_label = parse_class_arg(opt.label);

  std::unique_ptr<regscope::FileReputationSource> file_source;
  if (!opt.reputation_file.empty())
    file_source = std::make_unique<regscope::FileReputationSource>(
        read_file(opt.reputation_file));
  std::unique_ptr<regscope::HttpReputationSource> http_source;
  if (!opt.reputation_url.empty())
    http_source =
        std::make_unique<regscope::HttpReputationSource>(opt.reputation_url);

  if (!fixed_label && !file_source && !http_source)
    regscope::fail(regscope::ErrorCode::InvalidArgument,
                   "need --label, --reputation or --reputation-url");

  std::vector<std::string> files;
  if (fs::is_directory(opt.report_path)) {
    for (const auto& entry : fs::directory_iterator(opt.report_path))
      if (entry.is_regular_file()) files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
      regscope::fail(regscope::ErrorCode::IoError,
                     "no report files in " + opt.report_path);
  } else {
    files.push_back(opt.report_path);
  }

  regscope::Dataset ds;
  std::size_t unlabeled = 0;
  for (const std::string& file : files) {
    regscope::SandboxReport report;
    try {
      report = regscope::load_report(read_file(file), fmt);
    } catch (const regscope::Error& e) {
      regscope::fail(e.code(), file + ": " + e.what());
    }

    std::optional<regscope::Class> label = fixed_label;
    if (!label) {
      std::optional<regscope::ReputationVerdict> verdict;
      if (file_source) verdict = file_source->lookup(report.sample_id);
      if (!verdict && http_source)
        verdict = http_source->lookup(report.sample_id);
      if (verdict)
        label = regscope::label_from_reputation(*verdict,
                                                opt.reputation_threshold);
    }
    if (!label) {
      std::cerr << "warning: no reputation verdict for '" << report.sample_id
                << "', skipping\n";
      ++unlabeled;
      continue;
    }
    std::size_t width = std::max<std::size_t>(
        regscope::kStandardFeatureWidth,
        static_cast<std::size_t>(catalog.max_id()));
    ds.samples.push_back(
        regscope::report_to_sample(report, *label, matcher, width));
  }
  if (ds.samples.empty())
    regscope::fail(regscope::ErrorCode::EmptyDataset,
                   "no labeled samples produced (" +
                       std::to_string(unlabeled) + " without verdicts)");
  emit(regscope::save_dataset(ds), opt.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// train / eval / grid share hyperparameter plumbing
// ---------------------------------------------------------------------------

struct HyperFlags {
  regscope::TrainDefaults hp;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-depth", max_depth,
                    "tree depth limit (decision_tree/random_forest: 6, "
                    "boosted_tree: 3)");
    cmd->add_option("--min-leaf", hp.tree_min_leaf,
                    "minimum samples per tree leaf");
    cmd->add_option("--trees", hp.forest_trees, "random_forest: tree count");
    cmd->add_option("--feature-frac", hp.forest_feature_frac,
                    "random_forest: feature fraction per split");
    cmd->add_flag("--no-bootstrap", no_bootstrap,
                  "random_forest: train every tree on the full sample");
    cmd->add_option("--rounds", hp.boost_rounds, "boosted_tree: round count");
    cmd->add_option("--learning-rate", hp.boost_learning_rate,
                    "boosted_tree: shrinkage");
    cmd->add_option("--epochs", epochs,
                    "logistic/neural_net: gradient descent epochs");
    cmd->add_option("--step", step, "logistic/neural_net: learning rate");
    cmd->add_option("--l2", hp.logistic_l2, "logistic: L2 penalty");
    cmd->add_option("--hidden", hp.mlp_hidden, "neural_net: hidden units");
  }

  regscope::TrainDefaults resolve() {
    regscope::TrainDefaults out = hp;
    out.forest_bootstrap = !no_bootstrap;
    if (max_depth >= 0) {
      out.tree_max_depth = max_depth;
      out.boost_max_depth = max_depth;
    }
    if (epochs >= 0) {
      out.logistic_epochs = static_cast<std::size_t>(epochs);
      out.mlp_epochs = static_cast<std::size_t>(epochs);
    }
    if (step > 0) {
      out.logistic_step = step;
      out.mlp_step = step;
    }
    return out;
  }

  int max_depth = -1;
  long long epochs = -1;
  double step = -1;
  bool no_bootstrap = false;
};

struct TrainOptions {
  std::string dataset_path;
  std::string kind = "boosted_tree";
  std::string class_set = "flat5";
  std::uint64_t seed = 0;
  std::string out_path;
  HyperFlags hyper;
};

int cmd_train(TrainOptions& opt) {
  auto kind = regscope::model_kind_from_name(opt.kind);
  if (!kind)
    regscope::fail(regscope::ErrorCode::InvalidArgument,
                   "unknown classifier kind '" + opt.kind + "'");
  regscope::Dataset ds = regscope::load_dataset(
      read_file(opt.dataset_path), parse_class_set(opt.class_set));
  regscope::TriageModel model =
      regscope::train_model(*kind, ds, opt.seed, opt.hyper.resolve());
  emit(regscope::save_model(model), opt.out_path);
  return 0;
}

struct EvalOptions {
  std::string model_path;
  std::string dataset_path;
  std::string class_set = "flat5";
  bool as_json = false;
};

int cmd_eval(const EvalOptions& opt) {
  regscope::TriageModel model =
      regscope::load_model(read_file(opt.model_path));
  regscope::Dataset ds = regscope::load_dataset(
      read_file(opt.dataset_path), parse_class_set(opt.class_set));
  regscope::Metrics metrics = regscope::evaluate(model, ds);

  if (opt.as_json) {
    json out;
    out["accuracy"] = metrics.accuracy;
    out["n_test"] = metrics.n_test;
    std::vector<int> codes;
    for (regscope::Class c : model.classes)
      codes.push_back(regscope::class_code(c));
    out["classes"] = codes;
    out["confusion"] = metrics.confusion;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "accuracy %.6f on %zu samples\n",
                metrics.accuracy, metrics.n_test);
  std::cout << buf << "confusion (rows true, cols predicted):\n";
  for (std::size_t i = 0; i < model.classes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "  %-10s",
                  regscope::class_name(model.classes[i]));
    std::cout << buf;
    for (std::size_t j = 0; j < model.classes.size(); ++j) {
      std::snprintf(buf, sizeof(buf), " %6zu", metrics.confusion[i][j]);
      std::cout << buf;
    }
    std::cout << "\n";
  }
  return 0;
}

struct GridOptions {
  std::string dataset_path;
  std::string ratios = "80/20,70/30,60/40,50/50";
  std::string class_set = "flat5";
  std::uint64_t seed = 0;
  std::string out_path;
  HyperFlags hyper;
};

int cmd_grid(GridOptions& opt) {
  regscope::Dataset ds = regscope::load_dataset(
      read_file(opt.dataset_path), parse_class_set(opt.class_set));

  std::vector<regscope::SplitRatio> ratios;
  std::size_t start = 0;
  const std::string& spec = opt.ratios;
  for (std::size_t i = 0; i <= spec.size(); ++i)
    if (i == spec.size() || spec[i] == ',') {
      if (i > start)
        ratios.push_back(regscope::SplitRatio::parse(
            std::string_view(spec).substr(start, i - start)));
      start = i + 1;
    }

  regscope::GridResult grid =
      regscope::run_grid(ds, ratios, opt.seed, opt.hyper.resolve());
  std::string csv = regscope::grid_to_csv(grid);
  emit(csv, opt.out_path);
  if (!opt.out_path.empty())
    write_file(opt.out_path + ".confusion.json",
               regscope::grid_confusions_json(grid).dump(2) + "\n");
  return 0;
}

struct DatagenOptions {
  std::string profiles = "separable";
  std::size_t n_per_class = 90;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_datagen(const DatagenOptions& opt) {
  std::vector<regscope::ClassProfile> profiles;
  if (opt.profiles == "separable")
    profiles = regscope::default_profiles();
  else if (opt.profiles == "hard")
    profiles = regscope::hard_profiles();
  else
    profiles = regscope::profiles_from_csv(read_file(opt.profiles));
  regscope::Dataset ds =
      regscope::generate_dataset(profiles, opt.n_per_class, opt.seed);
  emit(regscope::save_dataset(ds), opt.out_path);
  return 0;
}

struct PredictOptions {
  std::string model_path;
  std::string report_path;
  std::string format = "auto";
  std::string catalog_path;
  bool as_json = false;
};

int cmd_predict(const PredictOptions& opt) {
  regscope::TriageModel model =
      regscope::load_model(read_file(opt.model_path));
  regscope::Catalog catalog = load_catalog(opt.catalog_path);
  regscope::LocationMatcher matcher(catalog);
  regscope::SandboxReport report =
      regscope::load_report(read_file(opt.report_path), parse_format(opt.format));
  regscope::TriageReport triage =
      regscope::make_triage_report(model, report, catalog, matcher);
  if (opt.as_json)
    std::cout << regscope::triage_to_json(triage).dump(2) << "\n";
  else
    std::cout << regscope::render_triage_text(triage);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dead-box malware triage over registry/filesystem artifacts",
               "regscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", regscope::kVersion);

  // caro
  std::string caro_name;
  CLI::App* caro = app.add_subcommand("caro", "parse a detection name");
  caro->add_option("name", caro_name, "vendor detection name")->required();

  // catalog
  CLI::App* catalog_cmd =
      app.add_subcommand("catalog", "inspect artifact catalogs");
  catalog_cmd->require_subcommand(1);
  std::string catalog_list_path;
  CLI::App* catalog_list =
      catalog_cmd->add_subcommand("list", "print the active catalog");
  catalog_list->add_option("--catalog", catalog_list_path,
                           "manifest file (default: REGSCOPE_CATALOG or "
                           "builtin)");
  std::string catalog_check_path;
  CLI::App* catalog_check =
      catalog_cmd->add_subcommand("check", "validate a manifest file");
  catalog_check->add_option("file", catalog_check_path, "manifest file")
      ->required();

  // extract
  ExtractOptions ex;
  CLI::App* extract =
      app.add_subcommand("extract", "behavior reports -> dataset CSV");
  extract->add_option("--report", ex.report_path,
                      "report file or directory of reports")
      ->required();
  extract->add_option("--format", ex.format, "auto|native|cuckoo");
  extract->add_option("--label", ex.label,
                      "fixed class label (name or code) for all reports");
  extract->add_option("--reputation", ex.reputation_file,
                      "offline reputation JSON file");
  extract->add_option("--reputation-url", ex.reputation_url,
                      "reputation service base URL (network opt-in)");
  extract->add_option("--reputation-threshold", ex.reputation_threshold,
                      "positives at/above this count mean malware");
  extract->add_option("--catalog", ex.catalog_path, "manifest file");
  extract->add_option("--out", ex.out_path, "output CSV (default stdout)");

  // train
  TrainOptions tr;
  CLI::App* train = app.add_subcommand("train", "dataset CSV -> model JSON");
  train->add_option("--dataset", tr.dataset_path, "dataset CSV")->required();
  train->add_option("--kind", tr.kind,
                    "logistic|neural_net|decision_tree|random_forest|"
                    "boosted_tree");
  train->add_option("--class-set", tr.class_set, "flat5|binary|family4");
  train->add_option("--seed", tr.seed, "training seed");
  train->add_option("--out", tr.out_path, "output model (default stdout)");
  tr.hyper.attach(train);

  // predict
  PredictOptions pr;
  CLI::App* predict =
      app.add_subcommand("predict", "triage one behavior report");
  predict->add_option("--model", pr.model_path, "model JSON")->required();
  predict->add_option("--report", pr.report_path, "behavior report")
      ->required();
  predict->add_option("--format", pr.format, "auto|native|cuckoo");
  predict->add_option("--catalog", pr.catalog_path, "manifest file");
  predict->add_flag("--json", pr.as_json, "emit JSON instead of text");

  // eval
  EvalOptions ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a model on a dataset");
  eval_cmd->add_option("--model", ev.model_path, "model JSON")->required();
  eval_cmd->add_option("--dataset", ev.dataset_path, "dataset CSV")
      ->required();
  eval_cmd->add_option("--class-set", ev.class_set, "flat5|binary|family4");
  eval_cmd->add_flag("--json", ev.as_json, "emit JSON instead of text");

  // grid
  GridOptions gr;
  CLI::App* grid =
      app.add_subcommand("grid", "split-ratio x classifier experiment");
  grid->add_option("--dataset", gr.dataset_path, "dataset CSV")->required();
  grid->add_option("--ratios", gr.ratios, "comma-separated, e.g. 80/20,70/30");
  grid->add_option("--class-set", gr.class_set, "flat5|binary|family4");
  grid->add_option("--seed", gr.seed, "experiment seed");
  grid->add_option("--out", gr.out_path,
                   "output CSV; confusion matrices go to <out>.confusion.json");
  gr.hyper.attach(grid);

  // datagen
  DatagenOptions dg;
  CLI::App* datagen =
      app.add_subcommand("datagen", "synthesize a dataset from profiles");
  datagen->add_option("--profiles", dg.profiles,
                      "'separable', 'hard', or a profile CSV file");
  datagen->add_option("--n", dg.n_per_class, "samples per class");
  datagen->add_option("--seed", dg.seed, "generation seed");
  datagen->add_option("--out", dg.out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;
  }

  try {
    if (caro->parsed()) {
      std::cout << caro_to_json(regscope::parse_caro(caro_name)).dump()
                << "\n";
      return 0;
    }
    if (catalog_list->parsed()) {
      std::cout << load_catalog(catalog_list_path).to_manifest();
      return 0;
    }
    if (catalog_check->parsed()) {
      regscope::Catalog cat =
          regscope::Catalog::from_manifest(read_file(catalog_check_path));
      std::cout << cat.size() << " locations ok (" << cat.version_tag()
                << ")\n";
      return 0;
    }
    if (extract->parsed()) return cmd_extract(ex);
    if (train->parsed()) return cmd_train(tr);
    if (predict->parsed()) return cmd_predict(pr);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (grid->parsed()) return cmd_grid(gr);
    if (datagen->parsed()) return cmd_datagen(dg);
  } catch (const regscope::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
