// Batch command-line surface: data ingestion, fitting, selection,
// segmentation, simulation, and penalty audit. CSV in, JSON artifacts out.
// Exit codes: 0 success, 1 computational failure (JSON error on stderr),
// 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pivotal/csv.hpp"
#include "pivotal/group_lasso.hpp"
#include "pivotal/json_io.hpp"
#include "pivotal/lasso.hpp"
#include "pivotal/linselect.hpp"
#include "pivotal/model_core.hpp"
#include "pivotal/penalties.hpp"
#include "pivotal/refit.hpp"
#include "pivotal/scaled_lasso.hpp"
#include "pivotal/segmentation.hpp"
#include "pivotal/selectors.hpp"
#include "pivotal/sim.hpp"

namespace {

using pivotal::Dataset;
using pivotal::Json;
using pivotal::Matrix;
using pivotal::Support;
using pivotal::Vector;

struct DataArgs {
  std::string data_path;
  std::string response_path;
  int response_col = -1;
  bool header = false;
  bool normalize = false;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--data", args.data_path, "design CSV (rows = observations)")
      ->required();
  cmd->add_option("--response", args.response_path, "response CSV (one column)");
  cmd->add_option("--response-col", args.response_col,
                  "0-based response column inside --data");
  cmd->add_flag("--header", args.header, "skip the first CSV row");
  cmd->add_flag("--normalize-columns", args.normalize,
                "rescale columns to unit norm before fitting; coefficients "
                "are reported in the original coordinates");
}

struct LoadedData {
  Dataset data;
  Vector scales;  // per-column divisors applied before fitting
};

LoadedData load_data(const DataArgs& args) {
  std::optional<Dataset> data;
  if (!args.response_path.empty()) {
    data = pivotal::dataset_from_csv(args.data_path, args.response_path, args.header);
  } else if (args.response_col >= 0) {
    data = pivotal::dataset_from_csv(args.data_path, args.response_col, args.header);
  } else {
    throw pivotal::UsageError("need --response or --response-col");
  }
  if (args.normalize) {
    Vector scales;
    Dataset normalized = pivotal::normalized_columns(*data, &scales);
    return {std::move(normalized), std::move(scales)};
  }
  Vector ones = Vector::Ones(data->p());
  return {std::move(*data), std::move(ones)};
}

// Map a fit on the normalized design back to original coordinates.
pivotal::FitResult denormalize(pivotal::FitResult fit, const Vector& scales) {
  for (int j = 0; j < fit.beta.size(); ++j) {
    if (scales[j] != 0.0) fit.beta[j] /= scales[j];
  }
  return fit;
}

Json data_config_json(const DataArgs& args) {
  Json j;
  j["data"] = args.data_path;
  if (!args.response_path.empty()) j["response"] = args.response_path;
  if (args.response_col >= 0) j["response_col"] = args.response_col;
  j["header"] = args.header;
  j["normalize_columns"] = args.normalize;
  return j;
}

void emit(const std::string& out_path, const Json& j) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    pivotal::write_json_file(out_path, j);
  }
}

std::vector<int> parse_index_list(const std::string& csv) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoi(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

pivotal::PathFactory make_factory(const std::string& estimator,
                                  std::vector<double> grid) {
  if (estimator == "lasso") {
    return [grid](const Dataset& d) { return pivotal::lasso_path(d, grid); };
  }
  if (estimator == "gauss-lasso") {
    return [grid](const Dataset& d) {
      pivotal::EstimatorPath base = pivotal::lasso_path(d, grid);
      pivotal::EstimatorPath out;
      out.grid = base.grid;
      for (const auto& fit : base.fits) {
        auto refit = pivotal::gauss_lasso_refit(d, fit.support);
        refit.lambda = fit.lambda;
        out.fits.push_back(std::move(refit));
      }
      return out;
    };
  }
  throw pivotal::UsageError("unknown estimator: " + estimator);
}

std::vector<int> labels_from_csv(const std::string& path, bool header) {
  Vector raw = pivotal::read_csv_column(path, header);
  std::vector<int> labels(raw.size());
  for (int i = 0; i < raw.size(); ++i) labels[i] = static_cast<int>(raw[i]);
  return labels;
}

int run(int argc, char** argv) {
  CLI::App app{"variance-free tuning of sparse linear regression"};
  app.require_subcommand(1);

  // ---- kstar ----
  auto* kstar_cmd = app.add_subcommand("kstar", "sparsity rule of thumb");
  long long kn = 0, kp = 0;
  kstar_cmd->add_option("--n", kn)->required();
  kstar_cmd->add_option("--p", kp)->required();
  kstar_cmd->callback([&] { std::cout << pivotal::compute_kstar(kn, kp) << "\n"; });

  // ---- pen ----
  auto* pen_cmd = app.add_subcommand("pen", "penalty audit as CSV rows");
  int pen_n = 0;
  std::vector<int> pen_d;
  std::vector<double> pen_delta;
  std::string pen_out;
  pen_cmd->add_option("--n", pen_n)->required();
  pen_cmd->add_option("--d", pen_d)->required()->delimiter(',');
  pen_cmd->add_option("--delta", pen_delta)->required()->delimiter(',');
  pen_cmd->add_option("--out", pen_out);
  pen_cmd->callback([&] {
    std::ostringstream rows;
    rows << "n,d,delta,pen_delta,pen\n";
    for (int d : pen_d) {
      for (double delta : pen_delta) {
        auto spec = pivotal::make_penalty_spec(pen_n, d, delta);
        rows << spec.n << "," << spec.D << "," << spec.delta << ","
             << std::setprecision(17) << spec.pen_delta << "," << spec.pen << "\n";
      }
    }
    if (pen_out.empty()) {
      std::cout << rows.str();
    } else {
      std::ofstream f(pen_out);
      if (!f) throw pivotal::DataError("cannot write " + pen_out);
      f << rows.str();
    }
  });

  // ---- fit-lasso ----
  auto* lasso_cmd = app.add_subcommand("fit-lasso", "lasso fit or path");
  DataArgs lasso_data;
  add_data_options(lasso_cmd, lasso_data);
  double lasso_lambda = -1.0;
  int grid_size = 100;
  double grid_min_ratio = 1e-3;
  std::string lasso_out;
  lasso_cmd->add_option("--lambda", lasso_lambda, "single penalty; omit for a path");
  lasso_cmd->add_option("--grid-size", grid_size);
  lasso_cmd->add_option("--grid-min-ratio", grid_min_ratio);
  lasso_cmd->add_option("--out", lasso_out);
  lasso_cmd->callback([&] {
    LoadedData loaded = load_data(lasso_data);
    Json config = data_config_json(lasso_data);
    if (lasso_lambda >= 0.0) {
      config["lambda"] = lasso_lambda;
      auto fit = denormalize(pivotal::lasso_fit(loaded.data, lasso_lambda),
                             loaded.scales);
      emit(lasso_out, pivotal::artifact("fit-lasso", config, pivotal::to_json(fit)));
    } else {
      config["grid_size"] = grid_size;
      config["grid_min_ratio"] = grid_min_ratio;
      auto grid = pivotal::default_lambda_grid(loaded.data, grid_size, grid_min_ratio);
      auto path = pivotal::lasso_path(loaded.data, grid);
      for (auto& fit : path.fits) fit = denormalize(std::move(fit), loaded.scales);
      emit(lasso_out, pivotal::artifact("lasso-path", config, pivotal::to_json(path)));
    }
  });

  // ---- fit-sqrt-lasso ----
  auto* sqrt_cmd = app.add_subcommand("fit-sqrt-lasso", "pivotal square-root lasso");
  DataArgs sqrt_data;
  add_data_options(sqrt_cmd, sqrt_data);
  double sqrt_lambda = 0.0;
  std::string sqrt_out;
  sqrt_cmd->add_option("--lambda", sqrt_lambda,
                       "penalty level; default 2 sqrt(2 log p)");
  sqrt_cmd->add_option("--out", sqrt_out);
  sqrt_cmd->callback([&] {
    LoadedData loaded = load_data(sqrt_data);
    double lambda = sqrt_lambda > 0.0
                        ? sqrt_lambda
                        : 2.0 * std::sqrt(2.0 * std::log(double(loaded.data.p())));
    Json config = data_config_json(sqrt_data);
    config["lambda"] = lambda;
    auto fit = denormalize(pivotal::sqrt_lasso_fit(loaded.data, lambda), loaded.scales);
    emit(sqrt_out, pivotal::artifact("fit-sqrt-lasso", config, pivotal::to_json(fit)));
  });

  // ---- fit-group-lasso ----
  auto* group_cmd = app.add_subcommand("fit-group-lasso", "group lasso fit");
  DataArgs group_data;
  add_data_options(group_cmd, group_data);
  std::string groups_path, group_out;
  double group_lambda = -1.0;
  std::vector<double> group_lambdas;
  group_cmd->add_option("--groups", groups_path,
                        "CSV with one group label per covariate")->required();
  group_cmd->add_option("--lambda", group_lambda, "uniform per-group penalty");
  group_cmd->add_option("--lambdas", group_lambdas, "per-group penalties")
      ->delimiter(',');
  group_cmd->add_option("--out", group_out);
  group_cmd->callback([&] {
    LoadedData loaded = load_data(group_data);
    auto groups = pivotal::GroupStructure::from_labels(
        labels_from_csv(groups_path, group_data.header));
    std::vector<double> lambdas = group_lambdas;
    if (lambdas.empty()) {
      if (group_lambda < 0.0) {
        throw pivotal::UsageError("need --lambda or --lambdas");
      }
      lambdas.assign(groups.num_groups(), group_lambda);
    }
    Json config = data_config_json(group_data);
    config["groups"] = groups_path;
    config["lambdas"] = lambdas;
    auto fit = denormalize(pivotal::group_lasso_fit(loaded.data, groups, lambdas),
                           loaded.scales);
    emit(group_out,
         pivotal::artifact("fit-group-lasso", config, pivotal::to_json(fit)));
  });

  // ---- refit-gauss ----
  auto* refit_cmd = app.add_subcommand("refit-gauss", "least squares on a support");
  DataArgs refit_data;
  add_data_options(refit_cmd, refit_data);
  std::string support_list, from_fit, refit_out;
  refit_cmd->add_option("--support", support_list, "comma-separated column indices");
  refit_cmd->add_option("--from-fit", from_fit, "take the support of a fit JSON");
  refit_cmd->add_option("--out", refit_out);
  refit_cmd->callback([&] {
    LoadedData loaded = load_data(refit_data);
    Support support;
    if (!from_fit.empty()) {
      Json j = pivotal::read_json_file(from_fit);
      const Json& fit_json = j.contains("result") ? j["result"] : j;
      std::vector<int> idx;
      for (const auto& v : fit_json.at("support")) idx.push_back(v.get<int>());
      support = Support(idx);
    } else if (!support_list.empty()) {
      support = Support(parse_index_list(support_list));
    } else {
      throw pivotal::UsageError("need --support or --from-fit");
    }
    Json config = data_config_json(refit_data);
    config["support"] = support.indices();
    auto fit = denormalize(pivotal::gauss_lasso_refit(loaded.data, support),
                           loaded.scales);
    emit(refit_out, pivotal::artifact("refit-gauss", config, pivotal::to_json(fit)));
  });

  // ---- select-linselect ----
  auto* ls_cmd = app.add_subcommand("select-linselect",
                                    "projection criterion over a fitted path");
  DataArgs ls_data;
  add_data_options(ls_cmd, ls_data);
  std::string ls_path_file, ls_groups, ls_out;
  ls_cmd->add_option("--path", ls_path_file, "path JSON from fit-lasso")->required();
  ls_cmd->add_option("--groups", ls_groups, "group labels CSV for the group collection");
  ls_cmd->add_option("--out", ls_out);
  ls_cmd->callback([&] {
    LoadedData loaded = load_data(ls_data);
    Json pj = pivotal::read_json_file(ls_path_file);
    auto path = pivotal::path_from_json(pj.contains("result") ? pj["result"] : pj);
    // Selection runs on the design as fitted; stored paths are in original
    // coordinates, so rescale when normalization is on.
    if (ls_data.normalize) {
      for (auto& fit : path.fits) {
        for (int j = 0; j < fit.beta.size(); ++j) fit.beta[j] *= loaded.scales[j];
        fit.support = Support::from_beta(fit.beta);
      }
    }
    pivotal::Collection coll;
    if (!ls_groups.empty()) {
      auto groups = pivotal::GroupStructure::from_labels(
          labels_from_csv(ls_groups, ls_data.header));
      coll = pivotal::build_collection_group(path, groups, loaded.data);
    } else {
      coll = pivotal::build_collection_coordinate(path, loaded.data);
    }
    auto report = pivotal::linselect_select(path, coll, loaded.data);
    Json config = data_config_json(ls_data);
    config["path"] = ls_path_file;
    emit(ls_out,
         pivotal::artifact("select-linselect", config, pivotal::to_json(report)));
  });

  // ---- select-cv ----
  auto* cv_cmd = app.add_subcommand("select-cv", "V-fold or holdout selection");
  DataArgs cv_data;
  add_data_options(cv_cmd, cv_data);
  int vfolds = 10;
  double holdout_ratio = 0.0;
  std::uint64_t cv_seed = 0;
  std::string cv_estimator = "lasso", cv_out;
  int cv_grid_size = 100;
  cv_cmd->add_option("--vfolds", vfolds);
  cv_cmd->add_option("--holdout", holdout_ratio, "train fraction; replaces V-fold");
  auto* cv_seed_opt = cv_cmd->add_option("--seed", cv_seed);
  cv_cmd->add_option("--estimator", cv_estimator)
      ->check(CLI::IsMember({"lasso", "gauss-lasso"}));
  cv_cmd->add_option("--grid-size", cv_grid_size);
  cv_cmd->add_option("--out", cv_out);
  cv_cmd->callback([&] {
    if (cv_seed_opt->count() == 0) {
      throw pivotal::UsageError("--seed is required for stochastic selection");
    }
    LoadedData loaded = load_data(cv_data);
    auto grid = pivotal::default_lambda_grid(loaded.data, cv_grid_size);
    auto factory = make_factory(cv_estimator, grid);
    pivotal::SelectionReport report =
        holdout_ratio > 0.0
            ? pivotal::holdout_select(factory, loaded.data, holdout_ratio, cv_seed)
            : pivotal::vfold_cv_select(factory, loaded.data, vfolds, cv_seed);
    Json config = data_config_json(cv_data);
    config["estimator"] = cv_estimator;
    config["seed"] = cv_seed;
    config["grid_size"] = cv_grid_size;
    if (holdout_ratio > 0.0) {
      config["holdout"] = holdout_ratio;
    } else {
      config["vfolds"] = vfolds;
    }
    emit(cv_out, pivotal::artifact("select-cv", config, pivotal::to_json(report)));
  });

  // ---- select-bic ----
  auto* bic_cmd = app.add_subcommand("select-bic", "modified BIC over a path");
  DataArgs bic_data;
  add_data_options(bic_cmd, bic_data);
  std::string bic_estimator = "lasso", bic_out;
  int bic_grid_size = 100;
  bic_cmd->add_option("--estimator", bic_estimator)
      ->check(CLI::IsMember({"lasso", "gauss-lasso"}));
  bic_cmd->add_option("--grid-size", bic_grid_size);
  bic_cmd->add_option("--out", bic_out);
  bic_cmd->callback([&] {
    LoadedData loaded = load_data(bic_data);
    auto grid = pivotal::default_lambda_grid(loaded.data, bic_grid_size);
    auto path = make_factory(bic_estimator, grid)(loaded.data);
    auto report = pivotal::modified_bic_select(path, loaded.data);
    Json config = data_config_json(bic_data);
    config["estimator"] = bic_estimator;
    config["grid_size"] = bic_grid_size;
    emit(bic_out, pivotal::artifact("select-bic", config, pivotal::to_json(report)));
  });

  // ---- select-slope ----
  auto* slope_cmd = app.add_subcommand(
      "select-slope", "dimension-jump calibration from a criterion table");
  std::string slope_table, slope_out;
  bool slope_header = false;
  slope_cmd->add_option("--table", slope_table,
                        "CSV rows: dim,rss[,shape]; shape defaults to dim")
      ->required();
  slope_cmd->add_flag("--header", slope_header);
  slope_cmd->add_option("--out", slope_out);
  slope_cmd->callback([&] {
    Matrix table = pivotal::read_csv_matrix(slope_table, slope_header);
    if (table.cols() < 2) {
      throw pivotal::DataError("slope table needs at least dim,rss columns");
    }
    std::vector<pivotal::SlopePoint> points;
    for (int i = 0; i < table.rows(); ++i) {
      pivotal::SlopePoint pt;
      pt.dim = static_cast<int>(table(i, 0));
      pt.rss = table(i, 1);
      pt.shape = table.cols() > 2 ? table(i, 2) : table(i, 0);
      points.push_back(pt);
    }
    auto report = pivotal::slope_heuristic_select(points);
    Json config;
    config["table"] = slope_table;
    emit(slope_out,
         pivotal::artifact("select-slope", config, pivotal::to_json(report)));
  });

  // ---- bench-oracle ----
  auto* bench_cmd = app.add_subcommand(
      "bench-oracle", "exhaustive small-p benchmark selectors");
  DataArgs bench_data;
  add_data_options(bench_cmd, bench_data);
  std::string bench_method = "bgh", bench_out;
  double bench_sigma2 = -1.0;
  bench_cmd->add_option("--method", bench_method)
      ->check(CLI::IsMember({"bm", "lb", "bgh"}));
  bench_cmd->add_option("--sigma2", bench_sigma2, "known variance for bm / lb");
  bench_cmd->add_option("--out", bench_out);
  bench_cmd->callback([&] {
    LoadedData loaded = load_data(bench_data);
    Json config = data_config_json(bench_data);
    config["method"] = bench_method;
    if (bench_method == "bgh") {
      auto report = pivotal::bgh_select_exhaustive(loaded.data);
      emit(bench_out,
           pivotal::artifact("bench-oracle", config, pivotal::to_json(report)));
      return;
    }
    if (bench_sigma2 <= 0.0) {
      throw pivotal::UsageError("--sigma2 is required for bm / lb");
    }
    config["sigma2"] = bench_sigma2;
    if (bench_method == "bm") {
      auto report = pivotal::bm_select_exhaustive(loaded.data, bench_sigma2);
      emit(bench_out,
           pivotal::artifact("bench-oracle", config, pivotal::to_json(report)));
    } else {
      std::vector<double> weights;
      std::vector<Support> models;
      Vector fitted = pivotal::lb_aggregate_exhaustive(loaded.data, bench_sigma2,
                                                       &weights, &models);
      Json payload;
      Json warr = Json::array();
      for (std::size_t i = 0; i < weights.size(); ++i) {
        warr.push_back(Json{{"model", models[i].indices()}, {"weight", weights[i]}});
      }
      payload["weights"] = std::move(warr);
      Json fitted_json = Json::array();
      for (int i = 0; i < fitted.size(); ++i) fitted_json.push_back(fitted[i]);
      payload["fitted"] = std::move(fitted_json);
      emit(bench_out, pivotal::artifact("bench-oracle", config, payload));
    }
  });

  // ---- segment ----
  auto* seg_cmd = app.add_subcommand("segment", "changepoint segmentation");
  std::string seg_data_path, seg_method = "bgh", seg_out;
  bool seg_header = false;
  bool seg_plugin = false;
  double seg_sigma2 = -1.0;
  int seg_qmax = -1;
  seg_cmd->add_option("--data", seg_data_path, "single-column CSV")->required();
  seg_cmd->add_flag("--header", seg_header);
  seg_cmd->add_option("--method", seg_method)
      ->check(CLI::IsMember({"bgh", "lebarbier", "slope", "tv+linselect"}));
  seg_cmd->add_option("--sigma2", seg_sigma2, "known variance (lebarbier)");
  seg_cmd->add_flag("--plugin-variance", seg_plugin,
                    "difference-based variance estimate (lebarbier)");
  seg_cmd->add_option("--qmax", seg_qmax);
  seg_cmd->add_option("--out", seg_out);
  seg_cmd->callback([&] {
    Vector y = pivotal::read_csv_column(seg_data_path, seg_header);
    pivotal::Segmentation seg;
    Json config;
    config["data"] = seg_data_path;
    config["method"] = seg_method;
    if (seg_method == "bgh") {
      seg = pivotal::segment_select_bgh(y, seg_qmax);
    } else if (seg_method == "lebarbier") {
      double sigma2 = seg_sigma2;
      if (seg_plugin || sigma2 <= 0.0) {
        bool odd = false;
        sigma2 = pivotal::variance_plugin(y, &odd);
        config["plugin_variance"] = true;
      }
      config["sigma2"] = sigma2;
      int qmax = seg_qmax >= 0 ? seg_qmax : static_cast<int>((y.size() - 1) / 4);
      seg = pivotal::segment_select_lebarbier(y, qmax, sigma2);
    } else if (seg_method == "slope") {
      seg = pivotal::segment_select_slope(y, seg_qmax);
    } else {
      seg = pivotal::segment_select_tv_linselect(y);
    }
    if (seg_qmax >= 0) config["qmax"] = seg_qmax;
    emit(seg_out, pivotal::artifact("segment", config, pivotal::to_json(seg)));
  });

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "seeded experiment harness");
  std::string sim_experiment, sim_config_path, sim_out, sim_raw;
  std::uint64_t sim_seed = 0;
  int sim_workers = 1;
  sim_cmd->add_option("--experiment", sim_experiment)
      ->check(CLI::IsMember({"1", "2", "bic-demo"}))
      ->required();
  sim_cmd->add_option("--config", sim_config_path, "JSON config")->required();
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed);
  sim_cmd->add_option("--workers", sim_workers);
  sim_cmd->add_option("--out", sim_out)->required();
  sim_cmd->add_option("--raw-csv", sim_raw, "also dump raw samples as CSV");
  sim_cmd->callback([&] {
    if (sim_seed_opt->count() == 0) {
      throw pivotal::UsageError("--seed is required for stochastic subcommands");
    }
    Json cj = pivotal::read_json_file(sim_config_path);
    pivotal::SimConfig config = pivotal::sim_config_from_json(cj);
    config.seed = sim_seed;
    config.workers = sim_workers;
    pivotal::MetricsReport report;
    if (sim_experiment == "1") {
      report = pivotal::run_experiment1(config);
    } else if (sim_experiment == "2") {
      report = pivotal::run_experiment2(config);
    } else {
      report = pivotal::run_bic_demo(config.n, config.reps, config.seed,
                                     config.workers, config.sigma);
    }
    Json payload = pivotal::to_json(report);
    emit(sim_out, pivotal::artifact("simulate", payload["config"], payload));
    if (!sim_raw.empty()) {
      std::ofstream f(sim_raw);
      if (!f) throw pivotal::DataError("cannot write " + sim_raw);
      f << "method,metric,rep,value\n";
      for (const auto& m : report.methods) {
        for (std::size_t i = 0; i < m.samples.size(); ++i) {
          f << m.name << "," << m.metric << "," << i << ","
            << std::setprecision(17) << m.samples[i] << "\n";
        }
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pivotal::UsageError& e) {
    std::cerr << Json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const pivotal::Error& e) {
    std::cerr << Json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
