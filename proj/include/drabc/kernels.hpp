#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace drabc {

enum class KernelFamily { gaussian, linear };

// Scalar kernel on real vectors. The bandwidth is ignored for the linear family.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;

    static KernelSpec gaussian(double sigma);
    static KernelSpec linear();
};

// gaussian: exp(-||x - x2||^2 / (2 sigma^2)); linear: <x, x2>.
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2);

// Median of Euclidean distances over all distinct unordered pairs of rows.
// Throws if fewer than two points or if the median distance is zero.
double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points);

// Frozen random Fourier feature map for the Gaussian kernel. Frequencies are
// drawn once at construction; the same (d, f, sigma, seed) always yields the
// same map. Features come in cos/sin pairs, so num_features is even.
struct RffMap {
    int input_dim = 0;
    int num_features = 0;
    Eigen::MatrixXd frequencies;  // (num_features/2) x input_dim
    double source_bandwidth = 1.0;
    std::uint64_t seed = 0;

    // Identity of the map; feature vectors from different maps never mix.
    std::uint64_t fingerprint() const;
};

// Frequencies i.i.d. from N(0, sigma^-2 I), matching the Gaussian kernel's
// spectral measure.
RffMap build_rff(int input_dim, int num_features, double sigma, std::uint64_t seed);

// phi(x)[2i:2i+2] = sqrt(2/f) [cos(w_i.x), sin(w_i.x)]; squared norm is exactly 1.
Eigen::VectorXd rff_features(const RffMap& map, const Eigen::Ref<const Eigen::VectorXd>& x);

// One feature row per input row.
Eigen::MatrixXd rff_feature_matrix(const RffMap& map,
                                   const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace drabc
