#pragma once

#include "drabc/abc.hpp"
#include "drabc/baselines.hpp"
#include "drabc/distreg.hpp"
#include "drabc/simulators.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace drabc {

enum class Method { full_dr, cond_dr, k2, sa };

Method parse_method(const std::string& name);
std::string method_name(Method method);

// One reproducible experiment: model, method, budgets, grids, master seed.
struct ExperimentConfig {
    ModelSpec model;
    Method method = Method::cond_dr;
    int L = 100;    // regression datasets
    int M = 1000;   // ABC particles
    int N = 200;    // points per dataset
    int f = 100;    // random Fourier features
    int runs = 20;
    Eigen::VectorXd theta_star;
    CvConfig cv;
    double epsilon = 0.0;      // <= 0 selects the soft threshold by pilot run
    double ess_target = 0.1;   // pilot target: effective sample size fraction
    std::uint64_t seed = 0;
    std::string output = "results.tsv";
    SaFeatureSpec sa_features;
    std::string digest;        // hash of the canonical config
};

// Strict schema: unknown keys are errors naming the offending key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ResultRecord {
    std::string digest;
    std::string method;
    int L = 0, M = 0, N = 0;
    int run = 0;
    bool ok = false;
    Eigen::VectorXd theta_hat;
    double sq_error = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t run_seed = 0;
    std::string error;
};

// Seed of experiment run `run`, derived from the master seed. All per-run
// randomness (observed data, training draws, ABC particles) flows from it,
// so different methods under one config share their random numbers.
std::uint64_t experiment_run_seed(std::uint64_t master_seed, int run);

// Draw the training set and fit the configured DR variant (with CV) for one
// run seed. Throws for the k2/sa methods, which have no regression model file.
RegressionModel fit_dr_model(const ExperimentConfig& cfg, std::uint64_t run_seed,
                             nlohmann::json* info = nullptr);

// Fit the configured method for one run seed and return the ABC discrepancy
// plus a description of the fitted stage (hyperparameters, for the log).
struct FittedMethod {
    Discrepancy discrepancy;
    nlohmann::json info;
    // Keeps whichever model backs the discrepancy alive.
    std::shared_ptr<void> state;
};
FittedMethod fit_method(const ExperimentConfig& cfg, const SplitBag& observed,
                        std::uint64_t run_seed);

// Full protocol: per run, generate observed data at theta_star, fit the
// method, run soft-threshold ABC, record the posterior mean and squared
// error. A failing run yields a failed record; remaining runs continue.
// Records are appended to `records_out` as they complete; `log_out`
// receives one JSON line per run.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         std::ostream* records_out = nullptr,
                                         std::ostream* log_out = nullptr);

void write_record_header(std::ostream& out);
void write_record(std::ostream& out, const ResultRecord& record);
std::vector<ResultRecord> read_records(const std::string& path);

struct AggregateRow {
    std::string method;
    int L = 0;
    int M = 0;
    int num_ok = 0;
    int num_failed = 0;
    double mean_mse = 0.0;
    double stderr_mse = 0.0;
};

// Group successful records by (method, L, M); failed runs are excluded and
// counted. Throws if no record succeeded.
std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records);

void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows);
// Plot data: x = M, y = mean MSE, one series per method/L.
void write_plot_data(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace drabc
