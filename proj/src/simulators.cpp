#include "drabc/simulators.hpp"

#include <cmath>
#include <stdexcept>

namespace drabc {

SplitBag simulate_toy(const ToyModel& model, double theta, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate_toy: need at least one point");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> z_draw(0.0, std::sqrt(model.z_var));
    std::normal_distribution<double> noise(0.0, std::sqrt(model.noise_var));
    Eigen::MatrixXd z(n, 1), x(n, 1);
    for (int i = 0; i < n; ++i) {
        const double zi = z_draw(rng);
        z(i, 0) = zi;
        x(i, 0) = theta * zi * zi + noise(rng);
    }
    return SplitBag(std::move(z), std::move(x));
}

namespace {

// Gamma(1/sigma^2, sigma^2) draws have mean one; sigma == 0 is the
// deterministic limit.
class UnitMeanGamma {
  public:
    explicit UnitMeanGamma(double sigma)
        : deterministic_(sigma == 0.0),
          dist_(deterministic_ ? 1.0 : 1.0 / (sigma * sigma),
                deterministic_ ? 1.0 : sigma * sigma) {}

    double operator()(Rng& rng) { return deterministic_ ? 1.0 : dist_(rng); }

  private:
    bool deterministic_;
    std::gamma_distribution<double> dist_;
};

void validate_blowfly(const BlowflyParams& p) {
    if (p.p < 0.0 || p.n0 <= 0.0 || p.delta <= 0.0)
        throw std::invalid_argument("simulate_blowfly: P, N0, delta must be positive");
    if (p.sigma_d < 0.0 || p.sigma_p < 0.0)
        throw std::invalid_argument("simulate_blowfly: noise scales must be non-negative");
    if (p.tau < 1) throw std::invalid_argument("simulate_blowfly: tau must be a positive integer");
    if (p.num_points < 1 || p.burn_in < 0)
        throw std::invalid_argument("simulate_blowfly: bad horizon or burn-in");
    if (p.init < 0.0) throw std::invalid_argument("simulate_blowfly: negative initial history");
}

}  // namespace

SplitBag simulate_blowfly(const BlowflyParams& params, std::uint64_t seed) {
    validate_blowfly(params);
    Rng rng = make_rng(seed);
    UnitMeanGamma survival_noise(params.sigma_d);
    UnitMeanGamma birth_noise(params.sigma_p);

    const int total = params.tau + 1 + params.burn_in + params.num_points;
    std::vector<double> traj(static_cast<std::size_t>(total));
    for (int t = 0; t <= params.tau; ++t) traj[t] = params.init;

    for (int t = params.tau; t + 1 < total; ++t) {
        const double lagged = traj[t - params.tau];
        const double births =
            params.p * lagged * std::exp(-lagged / params.n0) * birth_noise(rng);
        const double survivors = traj[t] * std::exp(-params.delta * survival_noise(rng));
        const double next = births + survivors;
        if (!std::isfinite(next) || next > 1e12)
            throw std::runtime_error("simulate_blowfly: population diverged; parameters unstable");
        traj[t + 1] = next;
    }

    Eigen::MatrixXd z(params.num_points, 1), x(params.num_points, 1);
    const int offset = total - params.num_points;
    const double denom = params.num_points > 1 ? params.num_points - 1.0 : 1.0;
    for (int i = 0; i < params.num_points; ++i) {
        z(i, 0) = i / denom;
        x(i, 0) = traj[offset + i];
    }
    return SplitBag(std::move(z), std::move(x));
}

namespace {

inline void lv_deriv(const LvParams& p, double x, double y, double& dx, double& dy) {
    dx = p.alpha * x - p.beta * x * y;
    dy = p.gamma * x * y - p.delta * y;
}

void rk4_step(const LvParams& p, double h, double& x, double& y) {
    double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    lv_deriv(p, x, y, k1x, k1y);
    lv_deriv(p, x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
    lv_deriv(p, x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
    lv_deriv(p, x + h * k3x, y + h * k3y, k4x, k4y);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
}

}  // namespace

SplitBag simulate_lv(const LvParams& params, std::uint64_t seed) {
    if (params.alpha <= 0.0 || params.beta < 0.0 || params.gamma < 0.0 || params.delta <= 0.0)
        throw std::invalid_argument("simulate_lv: rates must be positive");
    if (params.x0 <= 0.0 || params.y0 <= 0.0)
        throw std::invalid_argument("simulate_lv: initial populations must be positive");
    if (!(params.step > 0.0) || params.stride < 1 || params.num_points < 1)
        throw std::invalid_argument("simulate_lv: bad integration settings");

    Rng rng = make_rng(seed);
    std::normal_distribution<double> log_noise(0.0, 1.0);

    double x = params.x0, y = params.y0;
    Eigen::MatrixXd z(params.num_points, 1), obs(params.num_points, 2);
    for (int k = 0; k < params.num_points; ++k) {
        for (int s = 0; s < params.stride; ++s) {
            rk4_step(params, params.step, x, y);
            if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0)
                throw std::runtime_error(
                    "simulate_lv: trajectory left the admissible region; refine the step size");
        }
        z(k, 0) = (k + 1.0) * params.stride * params.step;
        double ox = x, oy = y;
        if (params.obs_noise) {
            ox *= std::exp(params.noise_sd * log_noise(rng));
            oy *= std::exp(params.noise_sd * log_noise(rng));
        }
        obs(k, 0) = ox;
        obs(k, 1) = oy;
    }
    return SplitBag(std::move(z), std::move(obs));
}

ModelId parse_model_id(const std::string& name) {
    if (name == "toy") return ModelId::toy;
    if (name == "blowfly") return ModelId::blowfly;
    if (name == "lotka_volterra") return ModelId::lotka_volterra;
    throw std::invalid_argument("unknown model id: " + name);
}

std::string model_id_name(ModelId id) {
    switch (id) {
        case ModelId::toy: return "toy";
        case ModelId::blowfly: return "blowfly";
        case ModelId::lotka_volterra: return "lotka_volterra";
    }
    throw std::logic_error("model_id_name: bad id");
}

int ModelSpec::theta_dim() const {
    switch (id) {
        case ModelId::toy: return 1;
        case ModelId::blowfly: return 6;
        case ModelId::lotka_volterra: return 4;
    }
    throw std::logic_error("theta_dim: bad id");
}

int ModelSpec::dim_z() const { return 1; }

int ModelSpec::dim_x() const { return id == ModelId::lotka_volterra ? 2 : 1; }

namespace {

double draw_lognormal(const LogNormalSpec& spec, Rng& rng) {
    std::normal_distribution<double> normal(spec.log_mean, spec.log_sd);
    return std::exp(normal(rng));
}

}  // namespace

Eigen::VectorXd ModelSpec::prior_sample(Rng& rng) const {
    switch (id) {
        case ModelId::toy: {
            std::normal_distribution<double> normal(toy.prior_mean, std::sqrt(toy.prior_var));
            Eigen::VectorXd theta(1);
            theta << normal(rng);
            return theta;
        }
        case ModelId::blowfly: {
            Eigen::VectorXd theta(6);
            theta(0) = draw_lognormal(blowfly_prior.p, rng);
            theta(1) = draw_lognormal(blowfly_prior.n0, rng);
            theta(2) = draw_lognormal(blowfly_prior.sigma_d, rng);
            theta(3) = draw_lognormal(blowfly_prior.sigma_p, rng);
            const std::uint64_t span =
                static_cast<std::uint64_t>(blowfly_prior.tau_max - blowfly_prior.tau_min + 1);
            theta(4) = static_cast<double>(blowfly_prior.tau_min + rng() % span);
            theta(5) = draw_lognormal(blowfly_prior.delta, rng);
            return theta;
        }
        case ModelId::lotka_volterra: {
            Eigen::VectorXd theta(4);
            theta(0) = draw_lognormal(lv_prior.alpha, rng);
            theta(1) = draw_lognormal(lv_prior.beta, rng);
            theta(2) = draw_lognormal(lv_prior.gamma, rng);
            theta(3) = draw_lognormal(lv_prior.delta, rng);
            return theta;
        }
    }
    throw std::logic_error("prior_sample: bad id");
}

SplitBag ModelSpec::simulate(const Eigen::VectorXd& theta, int n, std::uint64_t seed) const {
    if (theta.size() != theta_dim())
        throw std::invalid_argument("ModelSpec::simulate: theta dimension mismatch");
    switch (id) {
        case ModelId::toy:
            return simulate_toy(toy, theta(0), n, seed);
        case ModelId::blowfly: {
            BlowflyParams p = blowfly;
            p.p = theta(0);
            p.n0 = theta(1);
            p.sigma_d = theta(2);
            p.sigma_p = theta(3);
            p.tau = std::max(1, static_cast<int>(std::lround(theta(4))));
            p.delta = theta(5);
            p.num_points = n;
            p.init = p.n0;  // constant history at N0
            return simulate_blowfly(p, seed);
        }
        case ModelId::lotka_volterra: {
            LvParams p = lv;
            p.alpha = theta(0);
            p.beta = theta(1);
            p.gamma = theta(2);
            p.delta = theta(3);
            p.num_points = n;
            return simulate_lv(p, seed);
        }
    }
    throw std::logic_error("simulate: bad id");
}

Eigen::VectorXd prior_sample(const ModelSpec& model, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return model.prior_sample(rng);
}

}  // namespace drabc
