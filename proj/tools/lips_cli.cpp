// Command-line front end: simulate, ingest, mine, run, sweep.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "lips/config_json.hpp"
#include "lips/lips.hpp"

namespace {

std::vector<int> parse_tile_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

int cmd_simulate(std::size_t n, std::uint64_t seed, const std::string& red_left,
                 const std::string& red_right, double p_tilde, double q_tilde,
                 const std::string& out_path) {
  lips::TilingConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  if (!red_left.empty()) {
    auto v = parse_tile_list(red_left);
    cfg.red_left = std::set<int>(v.begin(), v.end());
  }
  if (!red_right.empty()) {
    auto v = parse_tile_list(red_right);
    cfg.red_right = std::set<int>(v.begin(), v.end());
  }
  cfg.p_tilde = p_tilde;
  cfg.q_tilde = q_tilde;
  auto ds = lips::generate(cfg);
  lips::write_csv(ds, out_path);
  auto [raw, noisy] = lips::exact_prior(cfg);
  std::cout << nlohmann::json{{"rows", ds.n()},
                              {"raw_prior", raw},
                              {"noisy_prior", noisy},
                              {"out", out_path}}
            << "\n";
  return 0;
}

int cmd_ingest(const std::string& input, const std::string& label,
               const std::string& missing) {
  auto policy = missing == "drop" ? lips::MissingPolicy::drop_row
                                  : lips::MissingPolicy::own_level;
  auto ds = lips::load_csv(input, label, policy);
  auto [mino, majo] = lips::class_partition(ds);
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : ds.variables)
    vars.push_back({{"name", v.name}, {"levels", v.levels.size()}});
  std::cout << nlohmann::json{{"n", ds.n()},
                              {"p", ds.p()},
                              {"minority", mino.size()},
                              {"majority", majo.size()},
                              {"variables", vars}}
            << "\n";
  return 0;
}

int cmd_mine(const std::string& input, const std::string& label,
             double supp_min, int max_len, const std::string& classes,
             const std::string& out_path) {
  auto ds = lips::load_csv(input, label);
  auto dm = lips::encode_dummies(ds);
  auto [mino, majo] = lips::class_partition(ds);
  auto dm_mino = lips::restrict_rows(dm, mino);
  auto dm_majo = lips::restrict_rows(dm, majo);

  lips::MinerConfig cfg;
  cfg.supp_min = supp_min;
  if (max_len > 0) cfg.max_len = static_cast<std::size_t>(max_len);

  auto mined = lips::mine(dm_mino, cfg);
  if (classes == "both") {
    auto from_majo = lips::mine(dm_majo, cfg);
    std::unordered_set<lips::Pattern, lips::PatternHash> seen;
    for (const auto& m : mined) seen.insert(m.pattern);
    for (const auto& m : from_majo) {
      if (seen.count(m.pattern)) continue;
      double ms = static_cast<double>(
                      lips::evaluate(m.pattern, dm_mino).count()) /
                  static_cast<double>(dm_mino.n);
      mined.push_back({m.pattern, ms, 0.0});
    }
  }
  mined = lips::attach_majority_support(std::move(mined), dm_majo);

  std::ostringstream csv;
  csv << "pattern,minority_support,majority_support\n";
  for (const auto& m : mined)
    csv << lips::pattern_text(m.pattern, ds) << ',' << m.minority_support
        << ',' << m.majority_support << '\n';
  if (out_path.empty())
    std::cout << csv.str();
  else
    write_text(out_path, csv.str());
  std::cerr << mined.size() << " frequent patterns\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  auto cfg = lips::experiment_config_from_json(read_json_file(config_path));
  auto summaries = lips::run_trials(cfg);
  write_text(out_dir + "/summary.csv", lips::summary_csv(summaries));

  // selection/model reports for the first trial of the first variant
  lips::CategoricalDataset ds = lips::detail::trial_dataset(cfg, cfg.seed);
  auto [train, test] = lips::split(ds, cfg.split_fraction, cfg.seed, true);
  auto out = lips::run_pipeline(cfg, cfg.variants.front(), train, test);
  write_text(out_dir + "/selection.json",
             lips::selection_to_json(out).dump(2) + "\n");
  write_text(out_dir + "/model.json",
             lips::model_to_json(out.model).dump(2) + "\n");

  std::cout << lips::summary_csv(summaries);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& grid_csv, const std::string& out_dir) {
  auto cfg = lips::experiment_config_from_json(read_json_file(config_path));
  lips::SweepAxis ax = axis == "sample-size" ? lips::SweepAxis::sample_size
                                             : lips::SweepAxis::imbalance;
  std::vector<double> grid;
  {
    std::stringstream ss(grid_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
  }
  if (grid.empty()) throw std::runtime_error("empty sweep grid");
  auto points = lips::sweep(cfg, ax, grid);
  std::string s = "grid_value,variant,metric,mean,sd\n";
  for (const auto& pt : points) {
    for (const auto& vs : pt.summaries) {
      auto row = [&](const char* name, const lips::MetricSummary& m) {
        s += std::to_string(pt.grid_value) + ',' +
             lips::variant_name(vs.variant) + ',' + name + ',' +
             std::to_string(m.mean) + ',' + std::to_string(m.sd) + '\n';
      };
      row("auc", vs.auc);
      row("sensitivity", vs.sensitivity);
      row("specificity", vs.specificity);
      row("npv", vs.npv);
      row("ppv", vs.ppv);
      row("n_terms", vs.n_terms);
    }
  }
  write_text(out_dir + "/sweep.csv", s);
  std::cout << s;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIPS: high-order categorical interaction learning for "
               "imbalanced logistic regression"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a tiling dataset CSV");
  std::size_t sim_n = 10000;
  std::uint64_t sim_seed = 0;
  std::string sim_red_left, sim_red_right, sim_out = "simulated.csv";
  double sim_p = 0.005, sim_q = 0.05;
  sim->add_option("--n", sim_n, "sample size");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--red-left", sim_red_left, "left red tiles, e.g. 1,15");
  sim->add_option("--red-right", sim_red_right, "right red tiles, e.g. 3,13");
  sim->add_option("--p-tilde", sim_p, "mislabel prob. for double-red rows");
  sim->add_option("--q-tilde", sim_q, "mislabel prob. otherwise");
  sim->add_option("--out", sim_out, "output CSV path");

  // ingest
  auto* ing = app.add_subcommand("ingest", "load and validate a dataset CSV");
  std::string ing_input, ing_label, ing_missing = "own-level";
  ing->add_option("--input", ing_input, "CSV path")->required();
  ing->add_option("--label", ing_label, "label column name")->required();
  ing->add_option("--missing", ing_missing, "own-level|drop");

  // mine
  auto* min = app.add_subcommand("mine", "targeted frequent-pattern search");
  std::string min_input, min_label, min_classes = "minority", min_out;
  double min_supp = 0.1;
  int min_maxlen = 0;
  min->add_option("--input", min_input, "CSV path")->required();
  min->add_option("--label", min_label, "label column name")->required();
  min->add_option("--supp-min", min_supp, "strict support threshold");
  min->add_option("--max-len", min_maxlen, "maximum pattern length (0 = off)");
  min->add_option("--classes", min_classes, "minority|both");
  min->add_option("--out", min_out, "output CSV (stdout if omitted)");

  // run
  auto* run = app.add_subcommand("run", "run experiment trials from a config");
  std::string run_config, run_out = ".";
  run->add_option("--config", run_config, "experiment config JSON")->required();
  run->add_option("--out-dir", run_out, "output directory");

  // sweep
  auto* swp = app.add_subcommand("sweep", "robustness sweep over a grid");
  std::string swp_config, swp_axis = "sample-size", swp_grid, swp_out = ".";
  swp->add_option("--config", swp_config, "experiment config JSON")->required();
  swp->add_option("--axis", swp_axis, "sample-size|imbalance");
  swp->add_option("--grid", swp_grid, "comma-separated grid values")
      ->required();
  swp->add_option("--out-dir", swp_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(sim_n, sim_seed, sim_red_left, sim_red_right, sim_p,
                          sim_q, sim_out);
    if (ing->parsed()) return cmd_ingest(ing_input, ing_label, ing_missing);
    if (min->parsed())
      return cmd_mine(min_input, min_label, min_supp, min_maxlen, min_classes,
                      min_out);
    if (run->parsed()) return cmd_run(run_config, run_out);
    if (swp->parsed()) return cmd_sweep(swp_config, swp_axis, swp_grid, swp_out);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}} << "\n";
    return 1;
  }
  return 0;
}
