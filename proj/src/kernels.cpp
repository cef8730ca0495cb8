#include "drabc/kernels.hpp"

#include "drabc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace drabc {

KernelSpec KernelSpec::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian kernel requires bandwidth > 0");
    return KernelSpec{KernelFamily::gaussian, sigma};
}

KernelSpec KernelSpec::linear() { return KernelSpec{KernelFamily::linear, 1.0}; }

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2) {
    if (x.size() != x2.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    switch (spec.family) {
        case KernelFamily::gaussian: {
            const double sq = (x - x2).squaredNorm();
            return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
        }
        case KernelFamily::linear:
            return x.dot(x2);
    }
    throw std::logic_error("kernel_eval: unknown family");
}

double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("median_heuristic: need at least two points");

    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            dists.push_back((points.row(i) - points.row(j)).norm());

    const std::size_t m = dists.size();
    const std::size_t mid = m / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    double med = dists[mid];
    if (m % 2 == 0) {
        // even count: average the two central order statistics
        const double lo = *std::max_element(dists.begin(), dists.begin() + mid);
        med = 0.5 * (lo + med);
    }
    if (!(med > 0.0))
        throw std::invalid_argument("median_heuristic: degenerate points, zero bandwidth is invalid");
    return med;
}

std::uint64_t RffMap::fingerprint() const {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(input_dim));
    h = mix64(h ^ static_cast<std::uint64_t>(num_features));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(source_bandwidth));
    return h;
}

RffMap build_rff(int input_dim, int num_features, double sigma, std::uint64_t seed) {
    if (input_dim < 1) throw std::invalid_argument("build_rff: input_dim must be positive");
    if (num_features < 2 || num_features % 2 != 0)
        throw std::invalid_argument("build_rff: num_features must be positive and even");
    if (!(sigma > 0.0)) throw std::invalid_argument("build_rff: sigma must be positive");

    RffMap map;
    map.input_dim = input_dim;
    map.num_features = num_features;
    map.source_bandwidth = sigma;
    map.seed = seed;
    map.frequencies.resize(num_features / 2, input_dim);

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / sigma);
    for (Eigen::Index i = 0; i < map.frequencies.rows(); ++i)
        for (Eigen::Index j = 0; j < map.frequencies.cols(); ++j)
            map.frequencies(i, j) = normal(rng);
    return map;
}

Eigen::VectorXd rff_features(const RffMap& map, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != map.input_dim)
        throw std::invalid_argument("rff_features: dimension mismatch");
    const Eigen::Index half = map.frequencies.rows();
    const double scale = std::sqrt(2.0 / static_cast<double>(map.num_features));
    Eigen::VectorXd proj = map.frequencies * x;
    Eigen::VectorXd out(map.num_features);
    for (Eigen::Index i = 0; i < half; ++i) {
        out(2 * i) = scale * std::cos(proj(i));
        out(2 * i + 1) = scale * std::sin(proj(i));
    }
    return out;
}

Eigen::MatrixXd rff_feature_matrix(const RffMap& map,
                                   const Eigen::Ref<const Eigen::MatrixXd>& points) {
    if (points.cols() != map.input_dim)
        throw std::invalid_argument("rff_feature_matrix: dimension mismatch");
    const Eigen::Index n = points.rows();
    const Eigen::Index half = map.frequencies.rows();
    const double scale = std::sqrt(2.0 / static_cast<double>(map.num_features));

    Eigen::MatrixXd proj = points * map.frequencies.transpose();  // n x half
    Eigen::MatrixXd out(n, map.num_features);
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index i = 0; i < half; ++i) {
            out(r, 2 * i) = scale * std::cos(proj(r, i));
            out(r, 2 * i + 1) = scale * std::sin(proj(r, i));
        }
    }
    return out;
}

}  // namespace drabc
