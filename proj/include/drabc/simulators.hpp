#pragma once

#include "drabc/embeddings.hpp"
#include "drabc/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace drabc {

// theta ~ N(2,1), z ~ N(0,2), x | z,theta ~ N(theta z^2, 1); second Normal
// argument read as a variance throughout.
struct ToyModel {
    double prior_mean = 2.0;
    double prior_var = 1.0;
    double z_var = 2.0;
    double noise_var = 1.0;
};

SplitBag simulate_toy(const ToyModel& model, double theta, int n, std::uint64_t seed);

// Discretised blowfly dynamics
//   N_{t+1} = P N_{t-tau} exp(-N_{t-tau}/N0) e_t + N_t exp(-delta eps_t)
// with e_t ~ Gamma(1/sigma_p^2, sigma_p^2) and eps_t ~ Gamma(1/sigma_d^2,
// sigma_d^2) (shape, scale). sigma_p or sigma_d equal to zero selects the
// deterministic limit e_t = eps_t = 1.
struct BlowflyParams {
    double p = 6.5;
    double n0 = 300.0;
    double sigma_d = 0.4;
    double sigma_p = 0.4;
    int tau = 7;
    double delta = 0.3;
    int num_points = 180;   // recorded observations after burn-in
    int burn_in = 50;
    double init = 300.0;    // constant initial history value
};

// z = normalized time index in [0, 1], x = population size.
SplitBag simulate_blowfly(const BlowflyParams& params, std::uint64_t seed);

// Lotka-Volterra predator-prey ODE
//   dx/dt = alpha x - beta x y,  dy/dt = gamma x y - delta y
// integrated with classical fourth-order Runge-Kutta.
struct LvParams {
    double alpha = 1.0;
    double beta = 0.2;
    double gamma = 0.05;
    double delta = 0.5;
    double x0 = 10.0;
    double y0 = 5.0;
    double step = 0.01;
    int stride = 20;        // record every `stride` integration steps
    int num_points = 100;
    bool obs_noise = false; // multiplicative log-normal observation noise
    double noise_sd = 0.1;
};

// z = observation time, x = (prey, predator).
SplitBag simulate_lv(const LvParams& params, std::uint64_t seed);

struct LogNormalSpec {
    double log_mean = 0.0;
    double log_sd = 1.0;
};

struct BlowflyPrior {
    LogNormalSpec p{std::log(6.5), 0.3};
    LogNormalSpec n0{std::log(300.0), 0.3};
    LogNormalSpec sigma_d{std::log(0.4), 0.3};
    LogNormalSpec sigma_p{std::log(0.4), 0.3};
    int tau_min = 1;
    int tau_max = 20;
    LogNormalSpec delta{std::log(0.3), 0.3};
};

struct LvPrior {
    LogNormalSpec alpha{std::log(1.0), 0.2};
    LogNormalSpec beta{std::log(0.2), 0.2};
    LogNormalSpec gamma{std::log(0.05), 0.2};
    LogNormalSpec delta{std::log(0.5), 0.2};
};

enum class ModelId { toy, blowfly, lotka_volterra };

ModelId parse_model_id(const std::string& name);
std::string model_id_name(ModelId id);

// One generative model with its prior: everything the ABC loop needs.
struct ModelSpec {
    ModelId id = ModelId::toy;
    ToyModel toy;
    BlowflyParams blowfly;
    BlowflyPrior blowfly_prior;
    LvParams lv;
    LvPrior lv_prior;

    int theta_dim() const;
    int dim_z() const;
    int dim_x() const;
    Eigen::VectorXd prior_sample(Rng& rng) const;
    // n is the number of points per dataset; it overrides the per-model
    // num_points/record count so all methods share one budget knob.
    SplitBag simulate(const Eigen::VectorXd& theta, int n, std::uint64_t seed) const;
};

// Draw from the configured prior of the named model; deterministic per seed.
Eigen::VectorXd prior_sample(const ModelSpec& model, std::uint64_t seed);

}  // namespace drabc
