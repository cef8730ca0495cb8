#include "drabc/embeddings.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace drabc {

SampleBag::SampleBag(Eigen::MatrixXd pts) : points(std::move(pts)) {
    if (points.rows() < 1) throw std::invalid_argument("SampleBag: empty bag");
    if (points.cols() < 1) throw std::invalid_argument("SampleBag: zero-dimensional points");
}

SplitBag::SplitBag(Eigen::MatrixXd z_pts, Eigen::MatrixXd x_pts)
    : z(std::move(z_pts)), x(std::move(x_pts)) {
    if (z.rows() < 1) throw std::invalid_argument("SplitBag: empty bag");
    if (z.rows() != x.rows())
        throw std::invalid_argument("SplitBag: z and x must pair up row by row");
    if (z.cols() < 1 || x.cols() < 1)
        throw std::invalid_argument("SplitBag: zero-dimensional side");
}

SampleBag SplitBag::joined() const {
    Eigen::MatrixXd pts(z.rows(), z.cols() + x.cols());
    pts << z, x;
    return SampleBag(std::move(pts));
}

EmbeddingVector mean_embedding(const SampleBag& bag, const RffMap& map) {
    if (bag.dim() != map.input_dim)
        throw std::invalid_argument("mean_embedding: bag dimension does not match map");
    const Eigen::MatrixXd features = rff_feature_matrix(map, bag.points);
    EmbeddingVector e;
    e.values = features.colwise().mean();
    e.source_map = map.fingerprint();
    return e;
}

double mmd2_unbiased(const SampleBag& a, const SampleBag& b, const KernelSpec& spec) {
    const Eigen::Index na = a.points.rows();
    const Eigen::Index nb = b.points.rows();
    if (na < 2 || nb < 2)
        throw std::invalid_argument("mmd2_unbiased: each bag needs at least two points");
    if (a.dim() != b.dim())
        throw std::invalid_argument("mmd2_unbiased: bags have different dimensions");

    // Row partial sums into slots, then a serial reduce: the result does not
    // depend on the number of threads.
    Eigen::VectorXd row_aa = Eigen::VectorXd::Zero(na);
    Eigen::VectorXd row_bb = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd row_ab = Eigen::VectorXd::Zero(na);

#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < na; ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < na; ++j) {
            if (j == i) continue;
            s += kernel_eval(spec, a.points.row(i), a.points.row(j));
        }
        row_aa(i) = s;
        double c = 0.0;
        for (Eigen::Index j = 0; j < nb; ++j)
            c += kernel_eval(spec, a.points.row(i), b.points.row(j));
        row_ab(i) = c;
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < nb; ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < nb; ++j) {
            if (j == i) continue;
            s += kernel_eval(spec, b.points.row(i), b.points.row(j));
        }
        row_bb(i) = s;
    }

    const double term_a = row_aa.sum() / (static_cast<double>(na) * (na - 1));
    const double term_b = row_bb.sum() / (static_cast<double>(nb) * (nb - 1));
    const double term_ab = 2.0 * row_ab.sum() / (static_cast<double>(na) * nb);
    return term_a + term_b - term_ab;
}

double mmd2_rff(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.source_map != b.source_map)
        throw std::invalid_argument("mmd2_rff: embeddings come from different maps");
    return (a.values - b.values).squaredNorm();
}

OperatorFeatures conditional_operator(const SplitBag& bag, const RffMap& map_z,
                                      const RffMap& map_x, double lambda1) {
    if (!(lambda1 > 0.0))
        throw std::invalid_argument("conditional_operator: lambda1 must be positive");
    if (bag.dim_z() != map_z.input_dim || bag.dim_x() != map_x.input_dim)
        throw std::invalid_argument("conditional_operator: bag dimensions do not match maps");

    const Eigen::Index n = bag.size();
    const Eigen::Index fz = map_z.num_features;
    const Eigen::MatrixXd phi_z = rff_feature_matrix(map_z, bag.z);  // N x fz
    const Eigen::MatrixXd phi_x = rff_feature_matrix(map_x, bag.x);  // N x fx

    OperatorFeatures op;
    op.lambda1 = lambda1;
    op.map_z = map_z.fingerprint();
    op.map_x = map_x.fingerprint();

    if (n > fz) {
        // primal: Phi_x^T Phi_z (Phi_z^T Phi_z + lambda1 I_fz)^-1
        Eigen::MatrixXd gram = phi_z.transpose() * phi_z;
        gram.diagonal().array() += lambda1;
        const Eigen::MatrixXd b = phi_x.transpose() * phi_z;  // fx x fz
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("conditional_operator: Cholesky failed on primal system");
        op.matrix = llt.solve(b.transpose()).transpose();
    } else {
        // dual: Phi_x^T (Phi_z Phi_z^T + lambda1 I_N)^-1 Phi_z
        Eigen::MatrixXd gram = phi_z * phi_z.transpose();
        gram.diagonal().array() += lambda1;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("conditional_operator: Cholesky failed on dual system");
        op.matrix = phi_x.transpose() * llt.solve(phi_z);
    }
    return op;
}

double operator_kernel(const OperatorFeatures& c, const OperatorFeatures& c2) {
    if (c.matrix.rows() != c2.matrix.rows() || c.matrix.cols() != c2.matrix.cols())
        throw std::invalid_argument("operator_kernel: shape mismatch");
    if (c.map_z != c2.map_z || c.map_x != c2.map_x)
        throw std::invalid_argument("operator_kernel: operators use different maps");
    return c.matrix.cwiseProduct(c2.matrix).sum();
}

}  // namespace drabc
