#include "drabc/distreg.hpp"

#include "drabc/json_util.hpp"
#include "drabc/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace drabc {

namespace {

constexpr std::uint64_t kFoldStream = 0x666f6c64;  // "fold"
constexpr std::uint64_t kMapStreamY = 0;
constexpr std::uint64_t kMapStreamZ = 1;
constexpr std::uint64_t kMapStreamX = 2;

Eigen::Map<const Eigen::VectorXd> flat(const Eigen::MatrixXd& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

// Pool up to `cap` rows across all bags, strided deterministically.
template <typename Bags, typename RowsOf>
Eigen::MatrixXd pooled_rows(const Bags& bags, RowsOf rows_of, int cap) {
    Eigen::Index total = 0;
    for (const auto& b : bags) total += rows_of(b).rows();
    const Eigen::Index stride = std::max<Eigen::Index>(1, total / cap);
    const Eigen::Index cols = rows_of(bags.front()).cols();
    Eigen::MatrixXd pool((total + stride - 1) / stride, cols);
    Eigen::Index seen = 0, kept = 0;
    for (const auto& b : bags) {
        const auto& m = rows_of(b);
        for (Eigen::Index r = 0; r < m.rows(); ++r, ++seen)
            if (seen % stride == 0) pool.row(kept++) = m.row(r);
    }
    return pool.topRows(kept);
}

// Mean over folds of the per-fold mean held-out squared prediction error.
double cv_score_for_gram(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& thetas,
                         const std::vector<int>& fold_of, int folds, double lambda) {
    const int n = static_cast<int>(gram.rows());
    double score = 0.0;
    for (int g = 0; g < folds; ++g) {
        std::vector<int> train_idx, test_idx;
        for (int i = 0; i < n; ++i)
            (fold_of[i] == g ? test_idx : train_idx).push_back(i);
        const int nt = static_cast<int>(train_idx.size());

        Eigen::MatrixXd sub(nt, nt);
        for (int a = 0; a < nt; ++a)
            for (int b = 0; b < nt; ++b) sub(a, b) = gram(train_idx[a], train_idx[b]);
        sub.diagonal().array() += static_cast<double>(nt) * lambda;

        Eigen::MatrixXd theta_t(thetas.rows(), nt);
        for (int a = 0; a < nt; ++a) theta_t.col(a) = thetas.col(train_idx[a]);

        Eigen::LLT<Eigen::MatrixXd> llt(sub);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("cross_validate: fold system not positive definite");
        const Eigen::MatrixXd z = llt.solve(theta_t.transpose());  // nt x D

        double fold_err = 0.0;
        Eigen::VectorXd k(nt);
        for (int idx : test_idx) {
            for (int a = 0; a < nt; ++a) k(a) = gram(train_idx[a], idx);
            fold_err += (z.transpose() * k - thetas.col(idx)).squaredNorm();
        }
        score += fold_err / static_cast<double>(test_idx.size());
    }
    return score / static_cast<double>(folds);
}

struct BestTracker {
    double score = std::numeric_limits<double>::infinity();
    std::vector<double> pref;  // tie-break values, earlier entries dominate, larger wins
    bool set = false;

    bool offer(double s, std::initializer_list<double> tie_pref) {
        if (set && !(s < score)) {
            if (s > score) return false;
            // exact tie: prefer stronger regularization
            auto it = pref.begin();
            for (double v : tie_pref) {
                if (v > *it) break;
                if (v < *it) return false;
                ++it;
            }
            if (it == pref.end()) return false;
        }
        score = s;
        pref.assign(tie_pref);
        set = true;
        return true;
    }
};

}  // namespace

CvConfig CvConfig::defaults() {
    CvConfig cv;
    cv.folds = 5;
    const int n = 10;
    for (int i = 0; i < n; ++i) {
        cv.bandwidth_factors.push_back(1e-4 + (1000.0 - 1e-4) * i / (n - 1));
        cv.ridge_grid.push_back(std::pow(10.0, -4.0 + 5.0 * i / (n - 1)));
    }
    return cv;
}

Eigen::MatrixXd outer_gram_full(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                double sigma_k) {
    if (!(sigma_k > 0.0)) throw std::invalid_argument("outer_gram_full: sigma_k must be positive");
    const Eigen::Index n = embeddings.rows();
    const double denom = 2.0 * sigma_k * sigma_k;
    Eigen::MatrixXd gram(n, n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (embeddings.row(i) - embeddings.row(j)).squaredNorm();
            const double v = std::exp(-d2 / denom);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

Eigen::MatrixXd outer_gram_conditional(const std::vector<OperatorFeatures>& ops) {
    if (ops.empty()) throw std::invalid_argument("outer_gram_conditional: no operators");
    const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
    for (const auto& op : ops)
        if (op.matrix.rows() != ops.front().matrix.rows() ||
            op.matrix.cols() != ops.front().matrix.cols())
            throw std::invalid_argument("outer_gram_conditional: operator shape mismatch");
    Eigen::MatrixXd gram(n, n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = flat(ops[i].matrix).dot(flat(ops[j].matrix));
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

Eigen::MatrixXd ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                          const Eigen::Ref<const Eigen::MatrixXd>& thetas, double lambda) {
    if (gram.rows() != gram.cols()) throw std::invalid_argument("ridge_fit: gram must be square");
    if (thetas.cols() != gram.rows())
        throw std::invalid_argument("ridge_fit: thetas must have one column per training bag");
    if (!(lambda > 0.0)) throw std::invalid_argument("ridge_fit: lambda must be positive");

    Eigen::MatrixXd a = gram;
    a.diagonal().array() += static_cast<double>(gram.rows()) * lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("ridge_fit: regularized gram is not positive definite");
    return llt.solve(thetas.transpose()).transpose();
}

Eigen::VectorXd predict(const RegressionModel& model, const SampleBag& bag) {
    if (model.variant != Variant::full)
        throw std::invalid_argument("predict: plain bag passed to a conditional model");
    const EmbeddingVector e = mean_embedding(bag, model.map_y);
    const double denom = 2.0 * model.outer.bandwidth * model.outer.bandwidth;
    const Eigen::VectorXd d2 =
        (model.features.rowwise() - e.values.transpose()).rowwise().squaredNorm();
    const Eigen::VectorXd k = (-d2.array() / denom).exp();
    return model.dual * k;
}

Eigen::VectorXd predict(const RegressionModel& model, const SplitBag& bag) {
    if (model.variant != Variant::conditional)
        throw std::invalid_argument("predict: split bag passed to a full-variant model");
    const OperatorFeatures c = conditional_operator(bag, model.map_z, model.map_x, model.lambda1);
    const Eigen::VectorXd k = model.features * flat(c.matrix);
    return model.dual * k;
}

RegressionModel fit_full(const std::vector<LabeledBag>& train, const RffMap& map,
                         double sigma_k, double lambda) {
    if (train.empty()) throw std::invalid_argument("fit_full: empty training set");
    const Eigen::Index n = static_cast<Eigen::Index>(train.size());
    const Eigen::Index d = train.front().theta.size();

    Eigen::MatrixXd embeddings(n, map.num_features);
    Eigen::MatrixXd thetas(d, n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index l = 0; l < n; ++l)
        embeddings.row(l) = mean_embedding(train[l].bag, map).values;
    for (Eigen::Index l = 0; l < n; ++l) {
        if (train[l].theta.size() != d)
            throw std::invalid_argument("fit_full: inconsistent theta dimensions");
        thetas.col(l) = train[l].theta;
    }

    RegressionModel model;
    model.variant = Variant::full;
    model.outer = KernelSpec::gaussian(sigma_k);
    model.lambda = lambda;
    model.map_y = map;
    model.features = std::move(embeddings);
    model.dual = ridge_fit(outer_gram_full(model.features, sigma_k), thetas, lambda);
    return model;
}

RegressionModel fit_conditional(const std::vector<LabeledSplitBag>& train, const RffMap& map_z,
                                const RffMap& map_x, double lambda1, double lambda2) {
    if (train.empty()) throw std::invalid_argument("fit_conditional: empty training set");
    const Eigen::Index n = static_cast<Eigen::Index>(train.size());
    const Eigen::Index d = train.front().theta.size();

    std::vector<OperatorFeatures> ops(n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index l = 0; l < n; ++l)
        ops[l] = conditional_operator(train[l].bag, map_z, map_x, lambda1);

    Eigen::MatrixXd features(n, map_x.num_features * map_z.num_features);
    Eigen::MatrixXd thetas(d, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        if (train[l].theta.size() != d)
            throw std::invalid_argument("fit_conditional: inconsistent theta dimensions");
        features.row(l) = flat(ops[l].matrix);
        thetas.col(l) = train[l].theta;
    }

    RegressionModel model;
    model.variant = Variant::conditional;
    model.outer = KernelSpec::linear();
    model.lambda = lambda2;
    model.lambda1 = lambda1;
    model.map_z = map_z;
    model.map_x = map_x;
    model.features = std::move(features);
    model.dual = ridge_fit(outer_gram_conditional(ops), thetas, lambda2);
    return model;
}

RffMap build_map_y(int dim, int num_features, double sigma, std::uint64_t map_seed) {
    return build_rff(dim, num_features, sigma, derive_seed(map_seed, kMapStreamY));
}

RffMap build_map_z(int dim, int num_features, double sigma, std::uint64_t map_seed) {
    return build_rff(dim, num_features, sigma, derive_seed(map_seed, kMapStreamZ));
}

RffMap build_map_x(int dim, int num_features, double sigma, std::uint64_t map_seed) {
    return build_rff(dim, num_features, sigma, derive_seed(map_seed, kMapStreamX));
}

std::vector<int> cv_fold_assignment(int num_bags, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("cv_fold_assignment: need at least two folds");
    if (num_bags < folds)
        throw std::invalid_argument("cv_fold_assignment: fewer bags than folds");
    std::vector<int> idx(num_bags);
    std::iota(idx.begin(), idx.end(), 0);
    // hand-rolled Fisher-Yates so the assignment is stable across standard libraries
    Rng rng = make_rng(derive_seed(seed, kFoldStream));
    for (int i = num_bags - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    std::vector<int> fold_of(num_bags);
    for (int k = 0; k < num_bags; ++k) fold_of[idx[k]] = k % folds;
    return fold_of;
}

FullHyper cross_validate(const std::vector<LabeledBag>& train, int num_features,
                         const CvConfig& cv, std::uint64_t map_seed) {
    if (cv.bandwidth_factors.empty() || cv.ridge_grid.empty())
        throw std::invalid_argument("cross_validate: empty grid");
    const int n = static_cast<int>(train.size());
    const Eigen::Index d = train.front().bag.dim();
    const Eigen::Index dim_theta = train.front().theta.size();

    Eigen::MatrixXd thetas(dim_theta, n);
    for (int l = 0; l < n; ++l) thetas.col(l) = train[l].theta;

    const Eigen::MatrixXd pool =
        pooled_rows(train, [](const LabeledBag& b) -> const Eigen::MatrixXd& { return b.bag.points; },
                    1500);
    const double sigma_base = median_heuristic(pool);
    const std::vector<int> fold_of = cv_fold_assignment(n, cv.folds, cv.seed);

    BestTracker best;
    FullHyper chosen;
    for (double sf : cv.bandwidth_factors) {
        const double sigma = sigma_base * sf;
        const RffMap map = build_map_y(static_cast<int>(d), num_features, sigma, map_seed);
        Eigen::MatrixXd embeddings(n, num_features);
#pragma omp parallel for schedule(dynamic)
        for (int l = 0; l < n; ++l)
            embeddings.row(l) = mean_embedding(train[l].bag, map).values;

        Eigen::MatrixXd dist2(n, n);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            dist2(i, i) = 0.0;
            for (int j = i + 1; j < n; ++j) {
                const double v = (embeddings.row(i) - embeddings.row(j)).squaredNorm();
                dist2(i, j) = v;
                dist2(j, i) = v;
            }
        }
        const double sigk_base = median_heuristic(embeddings);

        for (double kf : cv.bandwidth_factors) {
            const double sigma_k = sigk_base * kf;
            const Eigen::MatrixXd gram = (-dist2.array() / (2.0 * sigma_k * sigma_k)).exp();
            for (double lambda : cv.ridge_grid) {
                const double score = cv_score_for_gram(gram, thetas, fold_of, cv.folds, lambda);
                if (best.offer(score, {lambda, sigma_k, sigma}))
                    chosen = FullHyper{sigma, sigma_k, lambda, score};
            }
        }
    }
    chosen.cv_score = best.score;
    return chosen;
}

CondHyper cross_validate(const std::vector<LabeledSplitBag>& train, int num_features,
                         const CvConfig& cv, std::uint64_t map_seed) {
    if (cv.bandwidth_factors.empty() || cv.ridge_grid.empty())
        throw std::invalid_argument("cross_validate: empty grid");
    const int n = static_cast<int>(train.size());
    const Eigen::Index dz = train.front().bag.dim_z();
    const Eigen::Index dx = train.front().bag.dim_x();
    const Eigen::Index dim_theta = train.front().theta.size();

    Eigen::MatrixXd thetas(dim_theta, n);
    for (int l = 0; l < n; ++l) thetas.col(l) = train[l].theta;

    const Eigen::MatrixXd pool_z =
        pooled_rows(train, [](const LabeledSplitBag& b) -> const Eigen::MatrixXd& { return b.bag.z; },
                    1500);
    const Eigen::MatrixXd pool_x =
        pooled_rows(train, [](const LabeledSplitBag& b) -> const Eigen::MatrixXd& { return b.bag.x; },
                    1500);
    const double sigz_base = median_heuristic(pool_z);
    const double sigx_base = median_heuristic(pool_x);
    const std::vector<int> fold_of = cv_fold_assignment(n, cv.folds, cv.seed);

    BestTracker best;
    CondHyper chosen;
    const Eigen::Index fz = num_features, fx = num_features;
    std::vector<Eigen::MatrixXd> cross(n), eigvec(n);
    std::vector<Eigen::VectorXd> eigval(n);

    for (double zf : cv.bandwidth_factors) {
        const RffMap map_z = build_map_z(static_cast<int>(dz), num_features, sigz_base * zf, map_seed);
        for (double xf : cv.bandwidth_factors) {
            const RffMap map_x =
                build_map_x(static_cast<int>(dx), num_features, sigx_base * xf, map_seed);

            // Per bag: eigendecompose Phi_z^T Phi_z once, reuse for every lambda1.
#pragma omp parallel for schedule(dynamic)
            for (int l = 0; l < n; ++l) {
                const Eigen::MatrixXd phi_z = rff_feature_matrix(map_z, train[l].bag.z);
                const Eigen::MatrixXd phi_x = rff_feature_matrix(map_x, train[l].bag.x);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(phi_z.transpose() * phi_z);
                eigvec[l] = eig.eigenvectors();
                eigval[l] = eig.eigenvalues();
                cross[l] = phi_x.transpose() * phi_z;
            }

            Eigen::MatrixXd features(n, fx * fz);
            for (double lambda1 : cv.ridge_grid) {
#pragma omp parallel for schedule(dynamic)
                for (int l = 0; l < n; ++l) {
                    const Eigen::ArrayXd inv = 1.0 / (eigval[l].array() + lambda1);
                    const Eigen::MatrixXd op = cross[l] * (eigvec[l] * inv.matrix().asDiagonal() *
                                                           eigvec[l].transpose());
                    features.row(l) = flat(op);
                }
                const Eigen::MatrixXd gram = features * features.transpose();
                for (double lambda2 : cv.ridge_grid) {
                    const double score =
                        cv_score_for_gram(gram, thetas, fold_of, cv.folds, lambda2);
                    if (best.offer(score, {lambda2, lambda1, sigx_base * xf, sigz_base * zf}))
                        chosen = CondHyper{sigz_base * zf, sigx_base * xf, lambda1, lambda2, score};
                }
            }
        }
    }
    chosen.cv_score = best.score;
    return chosen;
}

FullFit fit_full_cv(const std::vector<LabeledBag>& train, int num_features, const CvConfig& cv,
                    std::uint64_t map_seed) {
    if (train.empty()) throw std::invalid_argument("fit_full_cv: empty training set");
    const FullHyper hyper = cross_validate(train, num_features, cv, map_seed);
    const RffMap map =
        build_map_y(train.front().bag.dim(), num_features, hyper.sigma, map_seed);
    return FullFit{fit_full(train, map, hyper.sigma_k, hyper.lambda), hyper};
}

CondFit fit_conditional_cv(const std::vector<LabeledSplitBag>& train, int num_features,
                           const CvConfig& cv, std::uint64_t map_seed) {
    if (train.empty()) throw std::invalid_argument("fit_conditional_cv: empty training set");
    const CondHyper hyper = cross_validate(train, num_features, cv, map_seed);
    const RffMap map_z =
        build_map_z(train.front().bag.dim_z(), num_features, hyper.sigma_z, map_seed);
    const RffMap map_x =
        build_map_x(train.front().bag.dim_x(), num_features, hyper.sigma_x, map_seed);
    return CondFit{fit_conditional(train, map_z, map_x, hyper.lambda1, hyper.lambda2), hyper};
}

namespace {

nlohmann::json map_to_json(const RffMap& map) {
    return {{"input_dim", map.input_dim},
            {"num_features", map.num_features},
            {"bandwidth", map.source_bandwidth},
            {"seed", map.seed}};
}

RffMap map_from_json(const nlohmann::json& j) {
    return build_rff(j.at("input_dim").get<int>(), j.at("num_features").get<int>(),
                     j.at("bandwidth").get<double>(), j.at("seed").get<std::uint64_t>());
}

}  // namespace

void save_model(const RegressionModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "drabc-model";
    j["version"] = 1;
    j["variant"] = model.variant == Variant::full ? "full" : "conditional";
    j["lambda"] = model.lambda;
    if (model.variant == Variant::full) {
        j["outer"] = {{"family", "gaussian"}, {"bandwidth", model.outer.bandwidth}};
        j["maps"] = {{"y", map_to_json(model.map_y)}};
    } else {
        j["outer"] = {{"family", "linear"}};
        j["lambda1"] = model.lambda1;
        j["maps"] = {{"z", map_to_json(model.map_z)}, {"x", map_to_json(model.map_x)}};
    }
    j["dual"] = matrix_to_json(model.dual);
    j["features"] = matrix_to_json(model.features);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path);
    out << j.dump(1) << '\n';
    if (!out.good()) throw std::runtime_error("save_model: write failed for " + path);
}

RegressionModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "drabc-model")
        throw std::runtime_error("load_model: not a model file: " + path);
    if (j.value("version", 0) != 1)
        throw std::runtime_error("load_model: unsupported model version");

    RegressionModel model;
    const std::string variant = j.at("variant").get<std::string>();
    model.lambda = j.at("lambda").get<double>();
    if (variant == "full") {
        model.variant = Variant::full;
        model.outer = KernelSpec::gaussian(j.at("outer").at("bandwidth").get<double>());
        model.map_y = map_from_json(j.at("maps").at("y"));
    } else if (variant == "conditional") {
        model.variant = Variant::conditional;
        model.outer = KernelSpec::linear();
        model.lambda1 = j.at("lambda1").get<double>();
        model.map_z = map_from_json(j.at("maps").at("z"));
        model.map_x = map_from_json(j.at("maps").at("x"));
    } else {
        throw std::runtime_error("load_model: unknown variant " + variant);
    }
    model.dual = matrix_from_json(j.at("dual"), "load_model dual");
    model.features = matrix_from_json(j.at("features"), "load_model features");
    if (model.dual.cols() != model.features.rows())
        throw std::runtime_error("load_model: dual and feature shapes disagree");
    return model;
}

}  // namespace drabc
