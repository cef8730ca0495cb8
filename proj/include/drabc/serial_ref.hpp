#pragma once

#include "drabc/abc.hpp"
#include "drabc/embeddings.hpp"
#include "drabc/kernels.hpp"

#include <vector>

// Plain single-threaded loop implementations of the hot kernels. They mirror
// the parallel versions entry for entry and exist so tests can pin the OpenMP
// paths against them and the benchmark can report speedups.
namespace drabc::serial {

Eigen::MatrixXd rff_feature_matrix(const RffMap& map,
                                   const Eigen::Ref<const Eigen::MatrixXd>& points);

double mmd2_unbiased(const SampleBag& a, const SampleBag& b, const KernelSpec& spec);

Eigen::MatrixXd outer_gram_full(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                double sigma_k);

Eigen::MatrixXd outer_gram_conditional(const std::vector<OperatorFeatures>& ops);

ParticleSet simulate_particles(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, int num_particles,
                               std::uint64_t seed);

}  // namespace drabc::serial
