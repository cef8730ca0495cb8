#pragma once

#include "drabc/kernels.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace drabc {

// One simulated or observed dataset treated as an i.i.d. bag of points.
struct SampleBag {
    Eigen::MatrixXd points;  // N x d

    SampleBag() = default;
    explicit SampleBag(Eigen::MatrixXd pts);

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// A bag of (z, x) pairs: z the auxiliary side, x the important side.
struct SplitBag {
    Eigen::MatrixXd z;  // N x dz
    Eigen::MatrixXd x;  // N x dx

    SplitBag() = default;
    SplitBag(Eigen::MatrixXd z_pts, Eigen::MatrixXd x_pts);

    int size() const { return static_cast<int>(z.rows()); }
    int dim_z() const { return static_cast<int>(z.cols()); }
    int dim_x() const { return static_cast<int>(x.cols()); }

    // Rows [z | x] as a plain bag.
    SampleBag joined() const;
};

// Mean of unit-norm feature vectors, so ||values|| <= 1.
struct EmbeddingVector {
    Eigen::VectorXd values;
    std::uint64_t source_map = 0;
};

// Finite-dimensional conditional embedding operator H_Z -> H_X in RFF coordinates.
struct OperatorFeatures {
    Eigen::MatrixXd matrix;  // fx x fz
    double lambda1 = 0.0;
    std::uint64_t map_z = 0;
    std::uint64_t map_x = 0;
};

EmbeddingVector mean_embedding(const SampleBag& bag, const RffMap& map);

// Unbiased U-statistic estimator; diagonal terms excluded in within-bag sums.
// May be negative. Both bags need at least two points.
double mmd2_unbiased(const SampleBag& a, const SampleBag& b, const KernelSpec& spec);

// Squared feature-space distance of mean embeddings (biased form, always >= 0).
double mmd2_rff(const EmbeddingVector& a, const EmbeddingVector& b);

// Phi_x^T (G_z + lambda1 I_N)^-1 Phi_z, computed in the primal form
// Phi_x^T Phi_z (Phi_z^T Phi_z + lambda1 I_f)^-1 whenever N > fz.
OperatorFeatures conditional_operator(const SplitBag& bag, const RffMap& map_z,
                                      const RffMap& map_x, double lambda1);

// Hilbert-Schmidt inner product <C, C2> = sum_ij C_ij C2_ij.
double operator_kernel(const OperatorFeatures& c, const OperatorFeatures& c2);

}  // namespace drabc
