#include "drabc/harness.hpp"

#include "drabc/io.hpp"
#include "drabc/json_util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

namespace drabc {

namespace {

constexpr std::uint64_t kRunStream = 0x72756e;        // "run"
constexpr std::uint64_t kObsStream = 0x6f6273;        // "obs"
constexpr std::uint64_t kTrainPriorStream = 0x747072; // "tpr"
constexpr std::uint64_t kTrainSimStream = 0x74736d;   // "tsm"
constexpr std::uint64_t kCvStream = 0x6376;           // "cv"
constexpr std::uint64_t kMapStream = 0x6d6170;        // "map"
constexpr std::uint64_t kParticleStream = 0x706172;   // "par"

// Tracks which keys were read so unknown keys can be reported by name.
class StrictObject {
  public:
    StrictObject(const nlohmann::json& j, std::string context)
        : json_(j), context_(std::move(context)) {
        if (!json_.is_object())
            throw std::runtime_error(context_ + ": expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return json_.contains(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!json_.contains(key)) return fallback;
        try {
            return json_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw std::runtime_error(context_ + ": bad value for key '" + key + "'");
        }
    }

    const nlohmann::json& raw(const std::string& key) {
        seen_.insert(key);
        return json_.at(key);
    }

    void finish() const {
        for (const auto& item : json_.items())
            if (!seen_.count(item.key()))
                throw std::runtime_error(context_ + ": unknown key '" + item.key() + "'");
    }

  private:
    const nlohmann::json& json_;
    std::string context_;
    std::set<std::string> seen_;
};

LogNormalSpec lognormal_from_json(const nlohmann::json& j, const std::string& ctx) {
    StrictObject o(j, ctx);
    LogNormalSpec spec;
    spec.log_mean = o.get<double>("log_mean", spec.log_mean);
    spec.log_sd = o.get<double>("log_sd", spec.log_sd);
    o.finish();
    if (!(spec.log_sd > 0.0)) throw std::runtime_error(ctx + ": log_sd must be positive");
    return spec;
}

nlohmann::json lognormal_to_json(const LogNormalSpec& spec) {
    return {{"log_mean", spec.log_mean}, {"log_sd", spec.log_sd}};
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out.empty() ? "-" : out;
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "full_dr") return Method::full_dr;
    if (name == "cond_dr") return Method::cond_dr;
    if (name == "k2") return Method::k2;
    if (name == "sa") return Method::sa;
    throw std::runtime_error("unknown method: " + name);
}

std::string method_name(Method method) {
    switch (method) {
        case Method::full_dr: return "full_dr";
        case Method::cond_dr: return "cond_dr";
        case Method::k2: return "k2";
        case Method::sa: return "sa";
    }
    throw std::logic_error("method_name: bad method");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    StrictObject o(j, "config");
    ExperimentConfig cfg;

    cfg.model.id = parse_model_id(o.get<std::string>("model", "toy"));
    cfg.method = parse_method(o.get<std::string>("method", "cond_dr"));
    cfg.L = o.get<int>("L", cfg.L);
    cfg.M = o.get<int>("M", cfg.M);
    cfg.N = o.get<int>("N", cfg.N);
    cfg.f = o.get<int>("f", cfg.f);
    cfg.runs = o.get<int>("runs", cfg.runs);
    cfg.seed = o.get<std::uint64_t>("seed", cfg.seed);
    cfg.output = o.get<std::string>("output", cfg.output);
    cfg.ess_target = o.get<double>("ess_target", cfg.ess_target);

    if (o.has("epsilon")) {
        const auto& eps = o.raw("epsilon");
        if (eps.is_string()) {
            if (eps.get<std::string>() != "auto")
                throw std::runtime_error("config: epsilon must be a positive number or \"auto\"");
            cfg.epsilon = 0.0;
        } else {
            cfg.epsilon = eps.get<double>();
            if (!(cfg.epsilon > 0.0))
                throw std::runtime_error("config: epsilon must be a positive number or \"auto\"");
        }
    }

    if (o.has("theta_star")) {
        cfg.theta_star = vector_from_json(o.raw("theta_star"), "config theta_star");
    }

    cfg.cv = CvConfig::defaults();
    if (o.has("cv")) {
        StrictObject c(o.raw("cv"), "config.cv");
        cfg.cv.folds = c.get<int>("folds", cfg.cv.folds);
        if (c.has("bandwidth_factors"))
            cfg.cv.bandwidth_factors =
                c.raw("bandwidth_factors").get<std::vector<double>>();
        if (c.has("ridge_exponents")) {
            cfg.cv.ridge_grid.clear();
            for (double e : c.raw("ridge_exponents").get<std::vector<double>>())
                cfg.cv.ridge_grid.push_back(std::pow(10.0, e));
        }
        c.finish();
        if (cfg.cv.folds < 2) throw std::runtime_error("config.cv: folds must be at least 2");
        if (cfg.cv.bandwidth_factors.empty() || cfg.cv.ridge_grid.empty())
            throw std::runtime_error("config.cv: grids must be non-empty");
    }

    if (o.has("sa_features")) {
        StrictObject s(o.raw("sa_features"), "config.sa_features");
        const std::string kind = s.get<std::string>("kind", "identity");
        if (kind == "identity") cfg.sa_features.kind = SaFeatureKind::identity;
        else if (kind == "powers") cfg.sa_features.kind = SaFeatureKind::powers;
        else if (kind == "pca") cfg.sa_features.kind = SaFeatureKind::pca;
        else throw std::runtime_error("config.sa_features: unknown kind '" + kind + "'");
        cfg.sa_features.degree = s.get<int>("degree", cfg.sa_features.degree);
        cfg.sa_features.components = s.get<int>("components", cfg.sa_features.components);
        s.finish();
    }

    if (o.has("model_params")) {
        StrictObject p(o.raw("model_params"), "config.model_params");
        switch (cfg.model.id) {
            case ModelId::toy: {
                auto& t = cfg.model.toy;
                t.prior_mean = p.get<double>("prior_mean", t.prior_mean);
                t.prior_var = p.get<double>("prior_var", t.prior_var);
                t.z_var = p.get<double>("z_var", t.z_var);
                t.noise_var = p.get<double>("noise_var", t.noise_var);
                break;
            }
            case ModelId::blowfly: {
                auto& b = cfg.model.blowfly;
                b.burn_in = p.get<int>("burn_in", b.burn_in);
                if (p.has("prior")) {
                    StrictObject q(p.raw("prior"), "config.model_params.prior");
                    auto& pr = cfg.model.blowfly_prior;
                    if (q.has("p")) pr.p = lognormal_from_json(q.raw("p"), "prior.p");
                    if (q.has("n0")) pr.n0 = lognormal_from_json(q.raw("n0"), "prior.n0");
                    if (q.has("sigma_d"))
                        pr.sigma_d = lognormal_from_json(q.raw("sigma_d"), "prior.sigma_d");
                    if (q.has("sigma_p"))
                        pr.sigma_p = lognormal_from_json(q.raw("sigma_p"), "prior.sigma_p");
                    if (q.has("delta")) pr.delta = lognormal_from_json(q.raw("delta"), "prior.delta");
                    pr.tau_min = q.get<int>("tau_min", pr.tau_min);
                    pr.tau_max = q.get<int>("tau_max", pr.tau_max);
                    q.finish();
                    if (pr.tau_min < 1 || pr.tau_max < pr.tau_min)
                        throw std::runtime_error("config: bad tau prior range");
                }
                break;
            }
            case ModelId::lotka_volterra: {
                auto& v = cfg.model.lv;
                v.x0 = p.get<double>("x0", v.x0);
                v.y0 = p.get<double>("y0", v.y0);
                v.step = p.get<double>("step", v.step);
                v.stride = p.get<int>("stride", v.stride);
                v.obs_noise = p.get<bool>("obs_noise", v.obs_noise);
                v.noise_sd = p.get<double>("noise_sd", v.noise_sd);
                if (p.has("prior")) {
                    StrictObject q(p.raw("prior"), "config.model_params.prior");
                    auto& pr = cfg.model.lv_prior;
                    if (q.has("alpha")) pr.alpha = lognormal_from_json(q.raw("alpha"), "prior.alpha");
                    if (q.has("beta")) pr.beta = lognormal_from_json(q.raw("beta"), "prior.beta");
                    if (q.has("gamma")) pr.gamma = lognormal_from_json(q.raw("gamma"), "prior.gamma");
                    if (q.has("delta")) pr.delta = lognormal_from_json(q.raw("delta"), "prior.delta");
                    q.finish();
                }
                break;
            }
        }
        p.finish();
    }
    o.finish();

    if (cfg.theta_star.size() == 0) {
        // model defaults as the synthetic truth
        switch (cfg.model.id) {
            case ModelId::toy:
                cfg.theta_star = Eigen::VectorXd::Constant(1, 2.0);
                break;
            case ModelId::blowfly: {
                const auto& b = cfg.model.blowfly;
                cfg.theta_star.resize(6);
                cfg.theta_star << b.p, b.n0, b.sigma_d, b.sigma_p, b.tau, b.delta;
                break;
            }
            case ModelId::lotka_volterra: {
                const auto& v = cfg.model.lv;
                cfg.theta_star.resize(4);
                cfg.theta_star << v.alpha, v.beta, v.gamma, v.delta;
                break;
            }
        }
    }

    if (cfg.L < 1 || cfg.M < 1 || cfg.N < 1 || cfg.runs < 1)
        throw std::runtime_error("config: L, M, N and runs must all be at least 1");
    if (cfg.f < 2 || cfg.f % 2 != 0)
        throw std::runtime_error("config: f must be a positive even number");
    if (cfg.theta_star.size() != cfg.model.theta_dim())
        throw std::runtime_error("config: theta_star has the wrong dimension for the model");
    if (!(cfg.ess_target > 0.0 && cfg.ess_target <= 1.0))
        throw std::runtime_error("config: ess_target must lie in (0, 1]");

    cfg.digest = hex64(fnv1a(config_to_json(cfg).dump()));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["model"] = model_id_name(cfg.model.id);
    j["method"] = method_name(cfg.method);
    j["L"] = cfg.L;
    j["M"] = cfg.M;
    j["N"] = cfg.N;
    j["f"] = cfg.f;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["output"] = cfg.output;
    j["ess_target"] = cfg.ess_target;
    if (cfg.epsilon > 0.0)
        j["epsilon"] = cfg.epsilon;
    else
        j["epsilon"] = "auto";
    j["theta_star"] = vector_to_json(cfg.theta_star);

    nlohmann::json cv;
    cv["folds"] = cfg.cv.folds;
    cv["bandwidth_factors"] = cfg.cv.bandwidth_factors;
    nlohmann::json exps = nlohmann::json::array();
    for (double v : cfg.cv.ridge_grid) exps.push_back(std::log10(v));
    cv["ridge_exponents"] = exps;
    j["cv"] = cv;

    nlohmann::json sa;
    switch (cfg.sa_features.kind) {
        case SaFeatureKind::identity: sa["kind"] = "identity"; break;
        case SaFeatureKind::powers: sa["kind"] = "powers"; break;
        case SaFeatureKind::pca: sa["kind"] = "pca"; break;
    }
    sa["degree"] = cfg.sa_features.degree;
    sa["components"] = cfg.sa_features.components;
    j["sa_features"] = sa;

    nlohmann::json mp;
    switch (cfg.model.id) {
        case ModelId::toy: {
            const auto& t = cfg.model.toy;
            mp = {{"prior_mean", t.prior_mean},
                  {"prior_var", t.prior_var},
                  {"z_var", t.z_var},
                  {"noise_var", t.noise_var}};
            break;
        }
        case ModelId::blowfly: {
            const auto& pr = cfg.model.blowfly_prior;
            mp["burn_in"] = cfg.model.blowfly.burn_in;
            mp["prior"] = {{"p", lognormal_to_json(pr.p)},
                           {"n0", lognormal_to_json(pr.n0)},
                           {"sigma_d", lognormal_to_json(pr.sigma_d)},
                           {"sigma_p", lognormal_to_json(pr.sigma_p)},
                           {"delta", lognormal_to_json(pr.delta)},
                           {"tau_min", pr.tau_min},
                           {"tau_max", pr.tau_max}};
            break;
        }
        case ModelId::lotka_volterra: {
            const auto& v = cfg.model.lv;
            const auto& pr = cfg.model.lv_prior;
            mp = {{"x0", v.x0},       {"y0", v.y0},
                  {"step", v.step},   {"stride", v.stride},
                  {"obs_noise", v.obs_noise}, {"noise_sd", v.noise_sd}};
            mp["prior"] = {{"alpha", lognormal_to_json(pr.alpha)},
                           {"beta", lognormal_to_json(pr.beta)},
                           {"gamma", lognormal_to_json(pr.gamma)},
                           {"delta", lognormal_to_json(pr.delta)}};
            break;
        }
    }
    j["model_params"] = mp;
    return j;
}

FittedMethod fit_method(const ExperimentConfig& cfg, const SplitBag& observed,
                        std::uint64_t run_seed) {
    const std::uint64_t map_seed = derive_seed(run_seed, kMapStream);
    FittedMethod out;

    const auto train_theta = [&](int l) {
        Rng rng = make_rng(derive_seed(run_seed, kTrainPriorStream, l));
        return cfg.model.prior_sample(rng);
    };
    const auto train_bag = [&](const Eigen::VectorXd& theta, int l) {
        return cfg.model.simulate(theta, cfg.N, derive_seed(run_seed, kTrainSimStream, l));
    };

    switch (cfg.method) {
        case Method::full_dr: {
            std::vector<LabeledBag> train(cfg.L);
#pragma omp parallel for schedule(dynamic)
            for (int l = 0; l < cfg.L; ++l) {
                const Eigen::VectorXd theta = train_theta(l);
                train[l] = LabeledBag{theta, train_bag(theta, l).joined()};
            }
            CvConfig cv = cfg.cv;
            cv.seed = derive_seed(run_seed, kCvStream);
            auto fit = std::make_shared<FullFit>(fit_full_cv(train, cfg.f, cv, map_seed));
            out.discrepancy = model_discrepancy(fit->model, observed);
            out.info = {{"stage", "full_dr"},
                        {"sigma", fit->hyper.sigma},
                        {"sigma_k", fit->hyper.sigma_k},
                        {"lambda", fit->hyper.lambda},
                        {"cv_score", fit->hyper.cv_score}};
            out.state = fit;
            return out;
        }
        case Method::cond_dr: {
            std::vector<LabeledSplitBag> train(cfg.L);
#pragma omp parallel for schedule(dynamic)
            for (int l = 0; l < cfg.L; ++l) {
                const Eigen::VectorXd theta = train_theta(l);
                train[l] = LabeledSplitBag{theta, train_bag(theta, l)};
            }
            CvConfig cv = cfg.cv;
            cv.seed = derive_seed(run_seed, kCvStream);
            auto fit = std::make_shared<CondFit>(fit_conditional_cv(train, cfg.f, cv, map_seed));
            out.discrepancy = model_discrepancy(fit->model, observed);
            out.info = {{"stage", "cond_dr"},
                        {"sigma_z", fit->hyper.sigma_z},
                        {"sigma_x", fit->hyper.sigma_x},
                        {"lambda1", fit->hyper.lambda1},
                        {"lambda2", fit->hyper.lambda2},
                        {"cv_score", fit->hyper.cv_score}};
            out.state = fit;
            return out;
        }
        case Method::k2: {
            const SampleBag joined = observed.joined();
            const double sigma = median_heuristic(joined.points);
            auto map = std::make_shared<RffMap>(
                build_map_y(joined.dim(), cfg.f, sigma, map_seed));
            out.discrepancy = k2_discrepancy(*map, observed);
            out.info = {{"stage", "k2"}, {"sigma", sigma}};
            out.state = map;
            return out;
        }
        case Method::sa: {
            // SA-ABC trains its regression on as many simulations as the ABC
            // phase uses particles.
            std::vector<LabeledSplitBag> train(cfg.M);
#pragma omp parallel for schedule(dynamic)
            for (int l = 0; l < cfg.M; ++l) {
                const Eigen::VectorXd theta = train_theta(l);
                train[l] = LabeledSplitBag{theta, train_bag(theta, l)};
            }
            auto model = std::make_shared<SaAbcModel>(fit_sa_abc(train, cfg.sa_features));
            out.discrepancy = sa_discrepancy(*model, observed);
            out.info = {{"stage", "sa"},
                        {"features", static_cast<int>(model->beta.cols())}};
            out.state = model;
            return out;
        }
    }
    throw std::logic_error("fit_method: bad method");
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, std::ostream* records_out,
                                         std::ostream* log_out) {
    std::vector<ResultRecord> records;
    records.reserve(cfg.runs);

    for (int r = 0; r < cfg.runs; ++r) {
        const std::uint64_t run_seed = derive_seed(cfg.seed, kRunStream, r);
        ResultRecord rec;
        rec.digest = cfg.digest;
        rec.method = method_name(cfg.method);
        rec.L = cfg.L;
        rec.M = cfg.M;
        rec.N = cfg.N;
        rec.run = r;
        rec.run_seed = run_seed;

        const auto t0 = std::chrono::steady_clock::now();
        nlohmann::json log_line = {{"event", "run"}, {"run", r}, {"method", rec.method}};
        try {
            const SplitBag observed =
                cfg.model.simulate(cfg.theta_star, cfg.N, derive_seed(run_seed, kObsStream));

            FittedMethod fitted = fit_method(cfg, observed, run_seed);
            log_line["fit"] = fitted.info;

            const PriorSampler prior = [&cfg](Rng& rng) { return cfg.model.prior_sample(rng); };
            const BagSimulator simulator = [&cfg](const Eigen::VectorXd& theta,
                                                  std::uint64_t seed) {
                return cfg.model.simulate(theta, cfg.N, seed);
            };
            const ParticleSet particles =
                simulate_particles(prior, simulator, fitted.discrepancy, cfg.M,
                                   derive_seed(run_seed, kParticleStream));

            const double epsilon =
                cfg.epsilon > 0.0
                    ? cfg.epsilon
                    : select_epsilon(particles.sq_distances, cfg.cv.ridge_grid, cfg.ess_target);

            WeightedPosterior posterior;
            posterior.thetas = particles.thetas;
            posterior.weights = weights_from_distances(particles.sq_distances, epsilon);

            rec.theta_hat = posterior_mean(posterior);
            rec.sq_error = (rec.theta_hat - cfg.theta_star).squaredNorm();
            rec.ok = true;

            log_line["epsilon"] = epsilon;
            log_line["ess"] = effective_sample_size(posterior.weights);
            log_line["failed_particles"] = particles.num_failed;
            log_line["sq_error"] = rec.sq_error;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
            rec.theta_hat = Eigen::VectorXd::Zero(cfg.theta_star.size());
            rec.sq_error = std::numeric_limits<double>::quiet_NaN();
            log_line["error"] = rec.error;
        }
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log_line["seconds"] = rec.wall_seconds;

        if (records_out) {
            write_record(*records_out, rec);
            records_out->flush();
        }
        if (log_out) {
            (*log_out) << log_line.dump() << '\n';
            log_out->flush();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_record_header(std::ostream& out) {
    out << "#digest\tmethod\tL\tM\tN\trun\tok\ttheta_hat\tsq_error\twall_seconds\trun_seed\terror\n";
}

void write_record(std::ostream& out, const ResultRecord& rec) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << rec.digest << '\t' << rec.method << '\t' << rec.L << '\t' << rec.M << '\t' << rec.N
        << '\t' << rec.run << '\t' << (rec.ok ? 1 : 0) << '\t';
    for (Eigen::Index i = 0; i < rec.theta_hat.size(); ++i) {
        if (i) out << ',';
        out << rec.theta_hat(i);
    }
    out << '\t' << rec.sq_error << '\t' << rec.wall_seconds << '\t' << rec.run_seed << '\t'
        << sanitize(rec.error) << '\n';
}

std::vector<ResultRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file " + path);
    std::vector<ResultRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        ResultRecord rec;
        std::string theta, ok;
        if (!(ss >> rec.digest >> rec.method >> rec.L >> rec.M >> rec.N >> rec.run >> ok >>
              theta >> rec.sq_error >> rec.wall_seconds >> rec.run_seed))
            throw std::runtime_error(path + ": malformed record row");
        std::getline(ss, rec.error);
        rec.ok = ok == "1";
        std::vector<double> coords;
        std::istringstream ts(theta);
        std::string tok;
        while (std::getline(ts, tok, ',')) coords.push_back(std::stod(tok));
        rec.theta_hat = Eigen::Map<Eigen::VectorXd>(coords.data(), coords.size());
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    std::map<std::tuple<std::string, int, int>, std::pair<std::vector<double>, int>> groups;
    for (const auto& rec : records) {
        auto& slot = groups[{rec.method, rec.L, rec.M}];
        if (rec.ok)
            slot.first.push_back(rec.sq_error);
        else
            slot.second += 1;
    }
    std::vector<AggregateRow> rows;
    int total_ok = 0;
    for (const auto& [key, slot] : groups) {
        AggregateRow row;
        row.method = std::get<0>(key);
        row.L = std::get<1>(key);
        row.M = std::get<2>(key);
        row.num_ok = static_cast<int>(slot.first.size());
        row.num_failed = slot.second;
        total_ok += row.num_ok;
        if (row.num_ok > 0) {
            double sum = 0.0;
            for (double v : slot.first) sum += v;
            row.mean_mse = sum / row.num_ok;
            if (row.num_ok > 1) {
                double ss = 0.0;
                for (double v : slot.first) ss += (v - row.mean_mse) * (v - row.mean_mse);
                row.stderr_mse = std::sqrt(ss / (row.num_ok - 1)) / std::sqrt(double(row.num_ok));
            }
        }
        rows.push_back(row);
    }
    if (total_ok == 0) throw std::runtime_error("aggregate: no successful records");
    return rows;
}

void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "#method\tL\tM\truns_ok\truns_failed\tmean_mse\tstderr_mse\n";
    out << std::setprecision(10);
    for (const auto& row : rows)
        out << row.method << '\t' << row.L << '\t' << row.M << '\t' << row.num_ok << '\t'
            << row.num_failed << '\t' << row.mean_mse << '\t' << row.stderr_mse << '\n';
}

void write_plot_data(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "#series\tM\tmean_mse\tstderr_mse\n";
    out << std::setprecision(10);
    for (const auto& row : rows)
        out << row.method << "_L" << row.L << '\t' << row.M << '\t' << row.mean_mse << '\t'
            << row.stderr_mse << '\n';
}

}  // namespace drabc
