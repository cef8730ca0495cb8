// Benchmark of the OpenMP kernels against the serial reference implementation.

#include "drabc/abc.hpp"
#include "drabc/distreg.hpp"
#include "drabc/embeddings.hpp"
#include "drabc/kernels.hpp"
#include "drabc/serial_ref.hpp"
#include "drabc/simulators.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-28s %10.2f ms %10.2f ms %7.2fx   max|diff| %.3g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
    using namespace drabc;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        const RffMap map = build_rff(2, 100, 1.5, 7);
        Eigen::MatrixXd pts = Eigen::MatrixXd::Random(20000, 2);
        Eigen::MatrixXd a, b;
        const double s = time_ms([&] { a = serial::rff_feature_matrix(map, pts); });
        const double p = time_ms([&] { b = rff_feature_matrix(map, pts); });
        report("rff_feature_matrix", s, p, (a - b).cwiseAbs().maxCoeff());
    }

    {
        Rng rng = make_rng(11);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd pa(800, 2), pb(800, 2);
        for (Eigen::Index i = 0; i < pa.rows(); ++i)
            for (Eigen::Index j = 0; j < pa.cols(); ++j) {
                pa(i, j) = normal(rng);
                pb(i, j) = normal(rng);
            }
        const SampleBag a(pa), b(pb);
        const KernelSpec spec = KernelSpec::gaussian(1.0);
        double va = 0, vb = 0;
        const double s = time_ms([&] { va = serial::mmd2_unbiased(a, b, spec); });
        const double p = time_ms([&] { vb = mmd2_unbiased(a, b, spec); });
        report("mmd2_unbiased (N=800)", s, p, std::abs(va - vb));
    }

    {
        Eigen::MatrixXd emb = Eigen::MatrixXd::Random(400, 100) * 0.1;
        Eigen::MatrixXd a, b;
        const double s = time_ms([&] { a = serial::outer_gram_full(emb, 0.5); });
        const double p = time_ms([&] { b = outer_gram_full(emb, 0.5); });
        report("outer_gram_full (L=400)", s, p, (a - b).cwiseAbs().maxCoeff());
    }

    {
        const RffMap map_z = build_rff(1, 100, 1.0, 3);
        const RffMap map_x = build_rff(1, 100, 1.0, 4);
        std::vector<OperatorFeatures> ops;
        for (int l = 0; l < 150; ++l) {
            const SplitBag bag = simulate_toy(ToyModel{}, 2.0 + 0.01 * l, 120, 100 + l);
            ops.push_back(conditional_operator(bag, map_z, map_x, 0.1));
        }
        Eigen::MatrixXd a, b;
        const double s = time_ms([&] { a = serial::outer_gram_conditional(ops); });
        const double p = time_ms([&] { b = outer_gram_conditional(ops); });
        report("outer_gram_cond (L=150)", s, p, (a - b).cwiseAbs().maxCoeff());
    }

    {
        ModelSpec model;
        model.id = ModelId::toy;
        const PriorSampler prior = [&model](Rng& rng) { return model.prior_sample(rng); };
        const BagSimulator sim = [&model](const Eigen::VectorXd& theta, std::uint64_t seed) {
            return model.simulate(theta, 200, seed);
        };
        const SplitBag observed = model.simulate(Eigen::VectorXd::Constant(1, 2.0), 200, 99);
        const RffMap map = build_rff(2, 100, median_heuristic(observed.joined().points), 5);
        Eigen::VectorXd star = mean_embedding(observed.joined(), map).values;
        const Discrepancy disc = [&map, star](const SplitBag& bag) {
            return (mean_embedding(bag.joined(), map).values - star).squaredNorm();
        };
        ParticleSet a, b;
        const double s = time_ms([&] { a = serial::simulate_particles(prior, sim, disc, 2000, 1); },
                                 1);
        const double p = time_ms([&] { b = simulate_particles(prior, sim, disc, 2000, 1); }, 1);
        report("particle sweep (M=2000)", s, p,
               (a.sq_distances - b.sq_distances).cwiseAbs().maxCoeff());
    }

    return 0;
}
