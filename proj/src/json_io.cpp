#include "pivotal/json_io.hpp"

#include <cmath>
#include <fstream>

namespace pivotal {

namespace {

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

Json pairs_to_json(const std::vector<std::pair<std::string, double>>& pairs) {
  Json obj = Json::object();
  for (const auto& [key, value] : pairs) obj[key] = value;
  return obj;
}

}  // namespace

Json to_json(const FitResult& fit) {
  Json j;
  j["beta"] = vector_to_json(fit.beta);
  j["support"] = fit.support.indices();
  j["lambda"] = fit.lambda;
  j["rss"] = fit.rss;
  if (fit.sigma_hat) j["sigma_hat"] = *fit.sigma_hat;
  j["kkt_violation"] = fit.kkt_violation;
  if (fit.degenerate) j["degenerate"] = true;
  if (fit.rank_deficient) j["rank_deficient"] = true;
  return j;
}

Json to_json(const EstimatorPath& path) {
  Json j;
  j["grid"] = path.grid;
  Json fits = Json::array();
  for (const FitResult& fit : path.fits) fits.push_back(to_json(fit));
  j["fits"] = std::move(fits);
  return j;
}

Json to_json(const SelectionReport& report) {
  Json j;
  j["method"] = report.method;
  j["chosen_index"] = report.chosen_index;
  j["chosen_lambda"] = report.chosen_lambda;
  j["chosen_support"] = report.chosen_support.indices();
  if (!report.chosen_model.empty()) {
    j["chosen_model"] = report.chosen_model.indices();
  }
  if (std::isfinite(report.sigma2)) j["sigma2"] = report.sigma2;
  j["flagged"] = report.flagged;
  if (report.flagged) j["flag_reason"] = report.flag_reason;
  if (!report.info.empty()) j["info"] = pairs_to_json(report.info);
  Json rows = Json::array();
  for (const ReportRow& row : report.rows) {
    Json r;
    r["lambda"] = row.lambda;
    r["crit"] = row.crit;
    r["support_size"] = row.support_size;
    if (!row.best_model.empty()) r["best_model"] = row.best_model.indices();
    if (!row.components.empty()) r["components"] = pairs_to_json(row.components);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const Segmentation& seg) {
  Json j;
  j["breakpoints"] = seg.breakpoints;
  j["q"] = seg.q;
  j["rss"] = seg.rss;
  j["fitted"] = vector_to_json(seg.fitted);
  if (seg.sigma2 > 0.0) j["sigma2"] = seg.sigma2;
  Json table = Json::array();
  for (const auto& [key, value] : seg.criterion) {
    table.push_back(Json{{"at", key}, {"crit", value}});
  }
  j["criterion"] = std::move(table);
  j["flagged"] = seg.flagged;
  if (seg.flagged) j["flag_reason"] = seg.flag_reason;
  return j;
}

Json to_json(const SimConfig& config) {
  Json j;
  j["n"] = config.n;
  j["p"] = config.p;
  j["design"] = design_family_name(config.design);
  j["rho"] = config.rho;
  j["k"] = config.k;
  j["beta_magnitude"] = config.beta_magnitude;
  j["sigma"] = config.sigma;
  j["reps"] = config.reps;
  j["seed"] = config.seed;
  j["normalize_columns"] = config.normalize_columns;
  j["grid_size"] = config.grid_size;
  j["grid_min_ratio"] = config.grid_min_ratio;
  j["vfolds"] = config.vfolds;
  j["sqrt_lasso_lambda"] = config.sqrt_lasso_lambda;
  return j;
}

SimConfig sim_config_from_json(const Json& j) {
  SimConfig config;
  if (j.contains("n")) config.n = j["n"].get<int>();
  if (j.contains("p")) config.p = j["p"].get<int>();
  if (j.contains("design")) {
    config.design = design_family_from_name(j["design"].get<std::string>());
  }
  if (j.contains("rho")) config.rho = j["rho"].get<double>();
  if (j.contains("k")) config.k = j["k"].get<int>();
  if (j.contains("beta_magnitude")) config.beta_magnitude = j["beta_magnitude"].get<double>();
  if (j.contains("sigma")) config.sigma = j["sigma"].get<double>();
  if (j.contains("reps")) config.reps = j["reps"].get<int>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("normalize_columns")) config.normalize_columns = j["normalize_columns"].get<bool>();
  if (j.contains("grid_size")) config.grid_size = j["grid_size"].get<int>();
  if (j.contains("grid_min_ratio")) config.grid_min_ratio = j["grid_min_ratio"].get<double>();
  if (j.contains("vfolds")) config.vfolds = j["vfolds"].get<int>();
  if (j.contains("sqrt_lasso_lambda")) config.sqrt_lasso_lambda = j["sqrt_lasso_lambda"].get<double>();
  return config;
}

Json to_json(const MetricsReport& report) {
  Json j;
  j["experiment"] = report.experiment;
  j["config"] = to_json(report.config);
  Json methods = Json::array();
  for (const MethodSummary& m : report.methods) {
    Json mj;
    mj["name"] = m.name;
    mj["metric"] = m.metric;
    mj["mean"] = m.mean;
    mj["sd"] = m.sd;
    mj["quantiles"] = Json{{"q00", m.quantiles[0]}, {"q25", m.quantiles[1]},
                           {"q50", m.quantiles[2]}, {"q75", m.quantiles[3]},
                           {"q90", m.quantiles[4]}, {"q95", m.quantiles[5]}};
    mj["samples"] = m.samples;
    methods.push_back(std::move(mj));
  }
  j["methods"] = std::move(methods);
  j["failed_reps"] = report.failed_reps;
  return j;
}

EstimatorPath path_from_json(const Json& j) {
  EstimatorPath path;
  for (const auto& g : j.at("grid")) path.grid.push_back(g.get<double>());
  for (const auto& f : j.at("fits")) {
    FitResult fit;
    fit.beta = vector_from_json(f.at("beta"));
    fit.support = Support::from_beta(fit.beta);
    if (f.contains("lambda")) {
      for (const auto& l : f["lambda"]) fit.lambda.push_back(l.get<double>());
    }
    fit.rss = f.at("rss").get<double>();
    if (f.contains("sigma_hat")) fit.sigma_hat = f["sigma_hat"].get<double>();
    path.fits.push_back(std::move(fit));
  }
  path.validate();
  return path;
}

Json artifact(const std::string& kind, Json config, Json payload) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["config"] = std::move(config);
  j["result"] = std::move(payload);
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace pivotal
