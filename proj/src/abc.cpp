#include "drabc/abc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drabc {

namespace {
constexpr std::uint64_t kPriorStream = 0x7072696f;  // "prio"
constexpr std::uint64_t kSimStream = 0x73696d75;    // "simu"
}  // namespace

ParticleSet simulate_particles(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, int num_particles,
                               std::uint64_t seed) {
    if (num_particles < 1)
        throw std::invalid_argument("simulate_particles: need at least one particle");

    // Probe one draw for the parameter dimension.
    Rng probe = make_rng(derive_seed(seed, kPriorStream, 0));
    const Eigen::Index dim = prior(probe).size();

    ParticleSet out;
    out.thetas.resize(num_particles, dim);
    out.sq_distances.resize(num_particles);
    Eigen::VectorXi failed = Eigen::VectorXi::Zero(num_particles);

#pragma omp parallel for schedule(dynamic)
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
            failed(j) = 1;
        }
    }
    out.num_failed = failed.sum();
    return out;
}

Eigen::VectorXd weights_from_distances(const Eigen::Ref<const Eigen::VectorXd>& sq_distances,
                                       double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("weights_from_distances: epsilon must be positive");
    Eigen::VectorXd w(sq_distances.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = std::exp(-sq_distances(j) / epsilon);
    const double total = w.sum();
    if (!(total > 0.0))
        throw std::runtime_error(
            "weights_from_distances: all weights underflowed to zero; increase epsilon");
    return w / total;
}

WeightedPosterior run_soft_abc(const PriorSampler& prior, const BagSimulator& simulator,
                               const Discrepancy& discrepancy, const AbcConfig& cfg) {
    const ParticleSet particles =
        simulate_particles(prior, simulator, discrepancy, cfg.num_particles, cfg.seed);
    WeightedPosterior posterior;
    posterior.thetas = particles.thetas;
    posterior.weights = weights_from_distances(particles.sq_distances, cfg.epsilon);
    return posterior;
}

Discrepancy model_discrepancy(const RegressionModel& model, const SplitBag& observed) {
    if (model.variant == Variant::conditional) {
        const Eigen::VectorXd s_star = predict(model, observed);
        return [&model, s_star](const SplitBag& bag) {
            return (predict(model, bag) - s_star).squaredNorm();
        };
    }
    const Eigen::VectorXd s_star = predict(model, observed.joined());
    return [&model, s_star](const SplitBag& bag) {
        return (predict(model, bag.joined()) - s_star).squaredNorm();
    };
}

WeightedPosterior run_abc(const PriorSampler& prior, const BagSimulator& simulator,
                          const SplitBag& observed, const RegressionModel& model,
                          const AbcConfig& cfg) {
    if (observed.size() < 1) throw std::invalid_argument("run_abc: observed data is empty");
    return run_soft_abc(prior, simulator, model_discrepancy(model, observed), cfg);
}

Eigen::VectorXd posterior_mean(const WeightedPosterior& posterior) {
    return posterior.thetas.transpose() * posterior.weights;
}

double mse(const std::vector<Eigen::VectorXd>& estimates,
           const Eigen::Ref<const Eigen::VectorXd>& theta_star) {
    if (estimates.empty()) throw std::invalid_argument("mse: no estimates");
    double total = 0.0;
    for (const auto& est : estimates) {
        if (est.size() != theta_star.size())
            throw std::invalid_argument("mse: estimate dimension mismatch");
        total += (est - theta_star).squaredNorm();
    }
    return total / static_cast<double>(estimates.size());
}

double effective_sample_size(const Eigen::Ref<const Eigen::VectorXd>& weights) {
    const double s2 = weights.squaredNorm();
    if (!(s2 > 0.0)) throw std::invalid_argument("effective_sample_size: zero weights");
    return 1.0 / s2;
}

double select_epsilon(const Eigen::Ref<const Eigen::VectorXd>& sq_distances,
                      const std::vector<double>& grid, double target_ess_fraction) {
    if (grid.empty()) throw std::invalid_argument("select_epsilon: empty grid");
    const double m = static_cast<double>(sq_distances.size());
    double best_eps = 0.0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double eps : grid) {
        Eigen::VectorXd w;
        try {
            w = weights_from_distances(sq_distances, eps);
        } catch (const std::runtime_error&) {
            continue;  // everything underflowed at this grid point
        }
        const double frac = effective_sample_size(w) / m;
        const double gap = std::abs(frac - target_ess_fraction);
        // strict < keeps the smallest workable epsilon on ties
        if (gap < best_gap) {
            best_gap = gap;
            best_eps = eps;
        }
    }
    if (!(best_eps > 0.0))
        throw std::runtime_error(
            "select_epsilon: all grid values underflow; distances are too large for the grid");
    return best_eps;
}

}  // namespace drabc
