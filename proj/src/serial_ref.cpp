#include "drabc/serial_ref.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drabc::serial {

Eigen::MatrixXd rff_feature_matrix(const RffMap& map,
                                   const Eigen::Ref<const Eigen::MatrixXd>& points) {
    if (points.cols() != map.input_dim)
        throw std::invalid_argument("serial rff_feature_matrix: dimension mismatch");
    const Eigen::Index n = points.rows();
    const Eigen::Index half = map.frequencies.rows();
    const double scale = std::sqrt(2.0 / static_cast<double>(map.num_features));
    Eigen::MatrixXd out(n, map.num_features);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index i = 0; i < half; ++i) {
            double proj = 0.0;
            for (Eigen::Index j = 0; j < points.cols(); ++j)
                proj += map.frequencies(i, j) * points(r, j);
            out(r, 2 * i) = scale * std::cos(proj);
            out(r, 2 * i + 1) = scale * std::sin(proj);
        }
    }
    return out;
}

double mmd2_unbiased(const SampleBag& a, const SampleBag& b, const KernelSpec& spec) {
    const Eigen::Index na = a.points.rows();
    const Eigen::Index nb = b.points.rows();
    if (na < 2 || nb < 2)
        throw std::invalid_argument("serial mmd2_unbiased: each bag needs at least two points");

    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j)
            if (i != j) aa += kernel_eval(spec, a.points.row(i), a.points.row(j));
    for (Eigen::Index i = 0; i < nb; ++i)
        for (Eigen::Index j = 0; j < nb; ++j)
            if (i != j) bb += kernel_eval(spec, b.points.row(i), b.points.row(j));
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < nb; ++j)
            ab += kernel_eval(spec, a.points.row(i), b.points.row(j));

    return aa / (static_cast<double>(na) * (na - 1)) + bb / (static_cast<double>(nb) * (nb - 1)) -
           2.0 * ab / (static_cast<double>(na) * nb);
}

Eigen::MatrixXd outer_gram_full(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                double sigma_k) {
    const Eigen::Index n = embeddings.rows();
    const double denom = 2.0 * sigma_k * sigma_k;
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::exp(-(embeddings.row(i) - embeddings.row(j)).squaredNorm() / denom);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

Eigen::MatrixXd outer_gram_conditional(const std::vector<OperatorFeatures>& ops) {
    const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = ops[i].matrix.cwiseProduct(ops[j].matrix).sum();
            gram(i, j) = v;
            gram(j, i) = v;
        }
    return gram;
}

ParticleSet simulate_particles(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, int num_particles,
                               std::uint64_t seed) {
    if (num_particles < 1)
        throw std::invalid_argument("serial simulate_particles: need at least one particle");
    // Stream tags match the parallel engine so the sweeps are comparable.
    constexpr std::uint64_t kPriorStream = 0x7072696f;
    constexpr std::uint64_t kSimStream = 0x73696d75;

    Rng probe = make_rng(derive_seed(seed, kPriorStream, 0));
    const Eigen::Index dim = prior(probe).size();

    ParticleSet out;
    out.thetas.resize(num_particles, dim);
    out.sq_distances.resize(num_particles);
    for (int j = 0; j < num_particles; ++j) {
        Rng rng = make_rng(derive_seed(seed, kPriorStream, static_cast<std::uint64_t>(j)));
        const Eigen::VectorXd theta = prior(rng);
        out.thetas.row(j) = theta;
        try {
            const SplitBag bag =
                simulator(theta, derive_seed(seed, kSimStream, static_cast<std::uint64_t>(j)));
            out.sq_distances(j) = discrepancy(bag);
        } catch (const std::exception&) {
            out.sq_distances(j) = std::numeric_limits<double>::infinity();
            ++out.num_failed;
        }
    }
    return out;
}

}  // namespace drabc::serial
