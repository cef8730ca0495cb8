#pragma once

#include "drabc/embeddings.hpp"
#include "drabc/kernels.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace drabc {

enum class Variant { full, conditional };

struct LabeledBag {
    Eigen::VectorXd theta;
    SampleBag bag;
};

struct LabeledSplitBag {
    Eigen::VectorXd theta;
    SplitBag bag;
};

// Grid configuration for five-fold cross-validation. Bandwidth grids multiply
// the respective median heuristics by `bandwidth_factors`; ridge penalties and
// the ABC soft threshold share `ridge_grid` (powers of ten).
struct CvConfig {
    int folds = 5;
    std::vector<double> bandwidth_factors;
    std::vector<double> ridge_grid;
    std::uint64_t seed = 0;

    // Ten equally spaced factors in [1e-4, 1000] and 10^e for ten equally
    // spaced exponents e in [-4, 1].
    static CvConfig defaults();
};

// Fitted distribution-regression predictor: the summary-statistic function.
struct RegressionModel {
    Variant variant = Variant::full;
    KernelSpec outer;      // gaussian(sigma_K) for full, linear for conditional
    double lambda = 0.0;   // ridge penalty (lambda2 for the conditional variant)
    double lambda1 = 0.0;  // conditional first stage only
    RffMap map_y;          // full variant
    RffMap map_z;          // conditional variant
    RffMap map_x;
    // One training feature per row: mean embeddings (L x f) for full,
    // flattened operator matrices (L x fx*fz) for conditional.
    Eigen::MatrixXd features;
    Eigen::MatrixXd dual;  // D x L, equals Theta (K + L lambda I)^-1

    int num_bags() const { return static_cast<int>(features.rows()); }
    int theta_dim() const { return static_cast<int>(dual.rows()); }
};

// Entry (l, l') = exp(-||mu_l - mu_l'||^2 / (2 sigma_k^2)); embeddings are rows.
Eigen::MatrixXd outer_gram_full(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                double sigma_k);

// Entry (l, l') = operator_kernel(C_l, C_l').
Eigen::MatrixXd outer_gram_conditional(const std::vector<OperatorFeatures>& ops);

// Theta (gram + L lambda I)^-1 via Cholesky; never an explicit inverse.
Eigen::MatrixXd ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                          const Eigen::Ref<const Eigen::MatrixXd>& thetas, double lambda);

// Summary statistic s(y): embed the query bag, form the cross-kernel vector
// against the training features, return dual * k. The bag type must match the
// model variant.
Eigen::VectorXd predict(const RegressionModel& model, const SampleBag& bag);
Eigen::VectorXd predict(const RegressionModel& model, const SplitBag& bag);

RegressionModel fit_full(const std::vector<LabeledBag>& train, const RffMap& map,
                         double sigma_k, double lambda);

RegressionModel fit_conditional(const std::vector<LabeledSplitBag>& train, const RffMap& map_z,
                                const RffMap& map_x, double lambda1, double lambda2);

struct FullHyper {
    double sigma = 0.0;    // data kernel bandwidth
    double sigma_k = 0.0;  // outer kernel bandwidth
    double lambda = 0.0;
    double cv_score = 0.0;
};

struct CondHyper {
    double sigma_z = 0.0;
    double sigma_x = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double cv_score = 0.0;
};

// Grid point minimizing mean held-out squared error over folds; ties broken
// toward stronger regularization (larger lambda, then larger bandwidth).
FullHyper cross_validate(const std::vector<LabeledBag>& train, int num_features,
                         const CvConfig& cv, std::uint64_t map_seed);
CondHyper cross_validate(const std::vector<LabeledSplitBag>& train, int num_features,
                         const CvConfig& cv, std::uint64_t map_seed);

// Deterministic fold assignment: fold id per training index.
std::vector<int> cv_fold_assignment(int num_bags, int folds, std::uint64_t seed);

// Map construction shared by the CV search and the final fit, so the selected
// bandwidths are evaluated with exactly the maps the fitted model will use.
RffMap build_map_y(int dim, int num_features, double sigma, std::uint64_t map_seed);
RffMap build_map_z(int dim, int num_features, double sigma, std::uint64_t map_seed);
RffMap build_map_x(int dim, int num_features, double sigma, std::uint64_t map_seed);

struct FullFit {
    RegressionModel model;
    FullHyper hyper;
};
struct CondFit {
    RegressionModel model;
    CondHyper hyper;
};

// Cross-validate, then fit on the whole training set at the selected point.
FullFit fit_full_cv(const std::vector<LabeledBag>& train, int num_features, const CvConfig& cv,
                    std::uint64_t map_seed);
CondFit fit_conditional_cv(const std::vector<LabeledSplitBag>& train, int num_features,
                           const CvConfig& cv, std::uint64_t map_seed);

// Structured text (JSON) model files; loading rebuilds the frozen RFF maps
// from their recorded seeds.
void save_model(const RegressionModel& model, const std::string& path);
RegressionModel load_model(const std::string& path);

}  // namespace drabc
