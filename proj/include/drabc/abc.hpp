#pragma once

#include "drabc/distreg.hpp"
#include "drabc/embeddings.hpp"
#include "drabc/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace drabc {

struct AbcConfig {
    int num_particles = 1000;
    double epsilon = 1.0;  // soft threshold of the smoothing kernel
    std::uint64_t seed = 0;
};

// Weighted posterior sample: particles theta_j (rows) with normalized weights.
struct WeightedPosterior {
    Eigen::MatrixXd thetas;   // M x D
    Eigen::VectorXd weights;  // non-negative, sums to 1
};

using PriorSampler = std::function<Eigen::VectorXd(Rng&)>;
using BagSimulator = std::function<SplitBag(const Eigen::VectorXd& theta, std::uint64_t seed)>;
// Squared distance between a simulated bag and the observed data in summary space.
using Discrepancy = std::function<double(const SplitBag&)>;

// Raw particle sweep: prior draws plus their summary discrepancies. Particle j
// is seeded by derive_seed(seed, ., j), so the sweep parallelizes with
// bit-reproducible output. A simulator failure marks the particle with an
// infinite distance (zero weight) rather than aborting the sweep.
struct ParticleSet {
    Eigen::MatrixXd thetas;        // M x D
    Eigen::VectorXd sq_distances;  // M, +inf for failed simulations
    int num_failed = 0;
};

ParticleSet simulate_particles(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, int num_particles,
                               std::uint64_t seed);

// w_j ∝ exp(-d_j / epsilon), normalized to sum to one. Throws if every
// unnormalized weight underflows to zero (epsilon too small).
Eigen::VectorXd weights_from_distances(const Eigen::Ref<const Eigen::VectorXd>& sq_distances,
                                       double epsilon);

// Soft-threshold rejection ABC with an arbitrary discrepancy.
WeightedPosterior run_soft_abc(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, const AbcConfig& cfg);

// DR-ABC: discrepancy ||s(y_j) - s(y*)||^2 with s = predict under the fitted
// model. The observed bag is split for the conditional variant and joined for
// the full variant.
WeightedPosterior run_abc(const PriorSampler& prior, const BagSimulator& simulator,
                          const SplitBag& observed, const RegressionModel& model,
                          const AbcConfig& cfg);

// Model-based discrepancy reusable by the pilot phase and the harness.
Discrepancy model_discrepancy(const RegressionModel& model, const SplitBag& observed);

Eigen::VectorXd posterior_mean(const WeightedPosterior& posterior);

// Mean over runs of ||theta_hat - theta_star||^2.
double mse(const std::vector<Eigen::VectorXd>& estimates,
           const Eigen::Ref<const Eigen::VectorXd>& theta_star);

// Effective sample size 1 / sum w_j^2 of a normalized weight vector.
double effective_sample_size(const Eigen::Ref<const Eigen::VectorXd>& weights);

// Pilot-run soft-threshold selection: the grid value whose normalized weights
// have an effective-sample-size fraction closest to `target_ess_fraction`.
// Grid values where every weight underflows are skipped.
double select_epsilon(const Eigen::Ref<const Eigen::VectorXd>& sq_distances,
                      const std::vector<double>& grid, double target_ess_fraction);

}  // namespace drabc
