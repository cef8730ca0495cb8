#pragma once

#include "drabc/abc.hpp"
#include "drabc/distreg.hpp"
#include "drabc/embeddings.hpp"
#include "drabc/kernels.hpp"

#include <Eigen/Core>

#include <vector>

namespace drabc {

// K2-ABC: the feature-space MMD between the simulated and observed bags is
// the discrepancy; no summary-statistic regression.
WeightedPosterior run_k2_abc(const PriorSampler& prior, const BagSimulator& simulator,
                             const SplitBag& observed, const RffMap& map, const AbcConfig& cfg);
Discrepancy k2_discrepancy(const RffMap& map, const SplitBag& observed);

// Semi-automatic ABC: a linear model theta = beta g(y) + intercept fitted on
// flattened datasets.
enum class SaFeatureKind { identity, powers, pca };

struct SaFeatureSpec {
    SaFeatureKind kind = SaFeatureKind::identity;
    int degree = 2;       // powers: concatenates y, y^2, ..., y^degree
    int components = 10;  // pca: number of principal components
};

struct SaAbcModel {
    SaFeatureSpec feature;
    Eigen::MatrixXd beta;        // D x p
    Eigen::VectorXd intercept;   // D
    Eigen::VectorXd column_mean; // pca: raw-feature means
    Eigen::MatrixXd projection;  // pca: raw_dim x components
};

// Row-major flatten of the paired points: z columns then x columns per point.
// Requires every dataset in one experiment to have the same fixed size.
Eigen::VectorXd sa_flatten(const SplitBag& bag);

Eigen::VectorXd sa_features(const SaAbcModel& model, const SplitBag& bag);

// Least squares with a 1e-8 ridge jitter on the normal equations. A design
// that stays rank-deficient beyond the jitter raises an error recommending
// the PCA feature map.
SaAbcModel fit_sa_abc(const std::vector<LabeledSplitBag>& train, const SaFeatureSpec& feature);

// s(y) = beta g(y) + intercept
Eigen::VectorXd sa_predict(const SaAbcModel& model, const SplitBag& bag);

WeightedPosterior run_sa_abc(const PriorSampler& prior, const BagSimulator& simulator,
                             const SplitBag& observed, const SaAbcModel& model,
                             const AbcConfig& cfg);
Discrepancy sa_discrepancy(const SaAbcModel& model, const SplitBag& observed);

}  // namespace drabc
