#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pivotal/types.hpp"

namespace pivotal {

enum class DesignFamily { identity, iid_gaussian, toeplitz };

DesignFamily design_family_from_name(const std::string& name);
const char* design_family_name(DesignFamily family);

struct SimConfig {
  int n = 100;
  int p = 100;
  DesignFamily design = DesignFamily::iid_gaussian;
  double rho = 0.5;  // toeplitz correlation
  int k = 5;         // true sparsity
  double beta_magnitude = 1.0;
  double sigma = 1.0;
  int reps = 100;
  std::uint64_t seed = 0;
  bool normalize_columns = true;
  int grid_size = 100;
  // Experiments stop the grid at 5% of the null threshold: the oracle region
  // sits mid-grid and the deep tail is ill-conditioned at n = p.
  double grid_min_ratio = 0.05;
  int vfolds = 10;
  double sqrt_lasso_lambda = 0.0;  // 0 -> 2 sqrt(2 log p)
  int workers = 1;

  void validate() const;
};

struct SimTruth {
  Vector beta0;
  Support support0;
};

/// Deterministic draw from (seed, rep).
std::pair<Dataset, SimTruth> generate_instance(const SimConfig& config, int rep);

/// Grid argmin of the true prediction loss; ties to the larger lambda.
int oracle_index(const EstimatorPath& path, const SimTruth& truth,
                 const Matrix& X);

/// fdr = |sel minus truth| / max(|sel|,1); power = |sel cap truth| / max(|truth|,1).
std::pair<double, double> fdr_power(const Support& selected, const Support& truth);

struct MethodSummary {
  std::string name;
  std::string metric;
  std::vector<double> samples;
  double mean = 0.0;
  double sd = 0.0;
  std::array<double, 6> quantiles{};  // 0/25/50/75/90/95%
};

MethodSummary summarize(std::string name, std::string metric,
                        std::vector<double> samples);

struct MetricsReport {
  std::string experiment;
  SimConfig config;
  std::vector<MethodSummary> methods;
  std::vector<int> failed_reps;
};

/// Lasso tuned by V-fold CV, the projection criterion, and the fixed-lambda
/// square-root lasso; per-rep prediction-risk ratios against the grid oracle.
MetricsReport run_experiment1(const SimConfig& config);

/// Support recovery: Gauss-lasso refits tuned by CV or the projection
/// criterion versus the square-root lasso; FDR and power per rep.
MetricsReport run_experiment2(const SimConfig& config);

/// Identity design, beta0 = 0: support size and risk of thresholding paths
/// tuned by the modified BIC.
MetricsReport run_bic_demo(int n, int reps, std::uint64_t seed, int workers = 1,
                           double sigma = 1.0);

const MethodSummary& find_summary(const MetricsReport& report,
                                  const std::string& name,
                                  const std::string& metric);

}  // namespace pivotal
