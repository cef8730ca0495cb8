#include "drabc/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace drabc {

Discrepancy k2_discrepancy(const RffMap& map, const SplitBag& observed) {
    EmbeddingVector star = mean_embedding(observed.joined(), map);
    return [map, star](const SplitBag& bag) {
        return mmd2_rff(mean_embedding(bag.joined(), map), star);
    };
}

WeightedPosterior run_k2_abc(const PriorSampler& prior, const BagSimulator& simulator,
                             const SplitBag& observed, const RffMap& map, const AbcConfig& cfg) {
    if (observed.size() < 1) throw std::invalid_argument("run_k2_abc: observed data is empty");
    return run_soft_abc(prior, simulator, k2_discrepancy(map, observed), cfg);
}

Eigen::VectorXd sa_flatten(const SplitBag& bag) {
    const int n = bag.size();
    const int dz = bag.dim_z(), dx = bag.dim_x();
    Eigen::VectorXd out(static_cast<Eigen::Index>(n) * (dz + dx));
    for (int i = 0; i < n; ++i) {
        out.segment(static_cast<Eigen::Index>(i) * (dz + dx), dz) = bag.z.row(i);
        out.segment(static_cast<Eigen::Index>(i) * (dz + dx) + dz, dx) = bag.x.row(i);
    }
    return out;
}

namespace {

Eigen::VectorXd raw_features(const SaFeatureSpec& spec, const Eigen::VectorXd& flat) {
    switch (spec.kind) {
        case SaFeatureKind::identity:
        case SaFeatureKind::pca:
            return flat;
        case SaFeatureKind::powers: {
            if (spec.degree < 1)
                throw std::invalid_argument("sa_features: powers degree must be >= 1");
            Eigen::VectorXd out(flat.size() * spec.degree);
            Eigen::VectorXd acc = flat;
            out.head(flat.size()) = acc;
            for (int d = 2; d <= spec.degree; ++d) {
                acc = acc.cwiseProduct(flat);
                out.segment(flat.size() * (d - 1), flat.size()) = acc;
            }
            return out;
        }
    }
    throw std::logic_error("raw_features: bad kind");
}

}  // namespace

Eigen::VectorXd sa_features(const SaAbcModel& model, const SplitBag& bag) {
    Eigen::VectorXd raw = raw_features(model.feature, sa_flatten(bag));
    if (model.feature.kind == SaFeatureKind::pca) {
        if (raw.size() != model.column_mean.size())
            throw std::invalid_argument("sa_features: dataset size differs from the fitted one");
        return model.projection.transpose() * (raw - model.column_mean);
    }
    return raw;
}

SaAbcModel fit_sa_abc(const std::vector<LabeledSplitBag>& train, const SaFeatureSpec& feature) {
    if (train.size() < 2) throw std::invalid_argument("fit_sa_abc: need at least two datasets");
    const int l = static_cast<int>(train.size());
    const Eigen::Index dim_theta = train.front().theta.size();

    Eigen::VectorXd first = raw_features(feature, sa_flatten(train.front().bag));
    const Eigen::Index p_raw = first.size();
    Eigen::MatrixXd design(l, p_raw);
    Eigen::MatrixXd thetas(l, dim_theta);
    design.row(0) = first;
    thetas.row(0) = train.front().theta;
    for (int i = 1; i < l; ++i) {
        Eigen::VectorXd row = raw_features(feature, sa_flatten(train[i].bag));
        if (row.size() != p_raw)
            throw std::invalid_argument("fit_sa_abc: datasets flatten to different lengths");
        design.row(i) = row;
        thetas.row(i) = train[i].theta;
    }

    SaAbcModel model;
    model.feature = feature;

    const Eigen::VectorXd col_mean = design.colwise().mean();
    Eigen::MatrixXd centered = design.rowwise() - col_mean.transpose();

    if (feature.kind == SaFeatureKind::pca) {
        if (feature.components < 1 || feature.components > static_cast<int>(p_raw))
            throw std::invalid_argument("fit_sa_abc: bad number of principal components");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("fit_sa_abc: PCA eigendecomposition failed");
        // eigenvalues ascend; take the trailing columns
        model.column_mean = col_mean;
        model.projection = eig.eigenvectors().rightCols(feature.components).rowwise().reverse();
        centered = centered * model.projection;
    }

    const Eigen::Index p = centered.cols();
    Eigen::MatrixXd normal = centered.transpose() * centered;  // p x p

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("fit_sa_abc: eigendecomposition of normal equations failed");
    const double ev_max = eig.eigenvalues().maxCoeff();
    const double ev_min = eig.eigenvalues().minCoeff();
    if (!(ev_max > 0.0) || ev_min < ev_max * 1e-12)
        throw std::runtime_error(
            "fit_sa_abc: design is rank-deficient beyond the 1e-8 jitter; "
            "use the pca feature map");

    normal.diagonal().array() += 1e-8;
    const Eigen::VectorXd theta_mean = thetas.colwise().mean();
    const Eigen::MatrixXd theta_centered = thetas.rowwise() - theta_mean.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("fit_sa_abc: normal equations not positive definite");
    // beta solves (X'X + jitter) beta' = X' Theta
    model.beta = llt.solve(centered.transpose() * theta_centered).transpose();  // D x p

    if (feature.kind == SaFeatureKind::pca) {
        // projection already subtracts column means
        model.intercept = theta_mean;
    } else {
        model.intercept = theta_mean - model.beta * col_mean;
    }
    return model;
}

Eigen::VectorXd sa_predict(const SaAbcModel& model, const SplitBag& bag) {
    return model.beta * sa_features(model, bag) + model.intercept;
}

Discrepancy sa_discrepancy(const SaAbcModel& model, const SplitBag& observed) {
    const Eigen::VectorXd s_star = sa_predict(model, observed);
    return [&model, s_star](const SplitBag& bag) {
        return (sa_predict(model, bag) - s_star).squaredNorm();
    };
}

WeightedPosterior run_sa_abc(const PriorSampler& prior, const BagSimulator& simulator,
                             const SplitBag& observed, const SaAbcModel& model,
                             const AbcConfig& cfg) {
    if (observed.size() < 1) throw std::invalid_argument("run_sa_abc: observed data is empty");
    return run_soft_abc(prior, simulator, sa_discrepancy(model, observed), cfg);
}

}  // namespace drabc
