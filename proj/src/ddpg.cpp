#include "liquidsim/ddpg.hpp"

#include <algorithm>
#include <cmath>

#include "liquidsim/errors.hpp"

namespace liquidsim {

namespace {

std::vector<int> chain_dims(int input, const std::vector<int>& hidden, int output) {
    std::vector<int> dims;
    dims.reserve(hidden.size() + 2);
    dims.push_back(input);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(output);
    return dims;
}

}  // namespace

DdpgAgent::DdpgAgent(int observation_dim, const DdpgConfig& config, std::uint64_t seed)
    : observation_dim_(observation_dim),
      config_(config),
      rng_(child_seed(seed, 0x0ddb)),
      actor_(Mlp::create(chain_dims(observation_dim, config.actor_hidden, 1),
                         Activation::Sigmoid, rng_)),
      critic_(Mlp::create(chain_dims(observation_dim + 1, config.critic_hidden, 1),
                          Activation::Identity, rng_)),
      target_actor_(actor_),    // targets start equal to their sources
      target_critic_(critic_),
      actor_opt_(OptimizerState::create(actor_, config.actor_lr)),
      critic_opt_(OptimizerState::create(critic_, config.critic_lr)),
      buffer_(config.buffer_capacity),
      noise_(config.noise) {
    if (observation_dim < 1) throw InvalidParameter("observation_dim must be >= 1");
    actor_grads_ = Gradients::zeros_like(actor_);
    critic_grads_ = Gradients::zeros_like(critic_);
    sample_scratch_ = Gradients::zeros_like(critic_);
}

double DdpgAgent::act(const std::vector<double>& obs_vec, bool explore) {
    double a = forward(actor_, obs_vec, actor_ws_)[0];
    if (explore) a += noise_.sample(rng_);
    return std::clamp(a, 0.0, 1.0);
}

double DdpgAgent::act(const Observation& obs, bool explore) {
    return act(obs.to_vector(), explore);
}

DdpgAgent::LearnResult DdpgAgent::learn() {
    LearnResult result;
    if (buffer_.size() < config_.minibatch_size) return result;  // skip, not an error

    const std::size_t batch = config_.minibatch_size;
    const auto samples = buffer_.sample(rng_, batch);

    // ---- critic: minimize (1/N) sum (y_i - Q(o_i, a_i))^2 ----
    auto zero = [](Gradients& g) {
        for (auto& l : g.layers) {
            std::fill(l.weights.begin(), l.weights.end(), 0.0);
            std::fill(l.biases.begin(), l.biases.end(), 0.0);
        }
        std::fill(g.input.begin(), g.input.end(), 0.0);
    };
    zero(critic_grads_);

    std::vector<double> critic_input(static_cast<std::size_t>(observation_dim_) + 1);
    double loss = 0.0;
    for (const Transition* t : samples) {
        double y = t->reward;
        if (!t->terminal) {
            // bootstrap through the slow targets
            const double next_a = forward(target_actor_, t->next_observation, actor_ws_)[0];
            std::copy(t->next_observation.begin(), t->next_observation.end(),
                      critic_input.begin());
            critic_input.back() = next_a;
            y += config_.discount_factor * forward(target_critic_, critic_input, critic_ws_)[0];
        }
        std::copy(t->observation.begin(), t->observation.end(), critic_input.begin());
        critic_input.back() = t->action;
        const double q = forward(critic_, critic_input, critic_ws_)[0];
        const double err = q - y;
        loss += err * err;
        backward(critic_, critic_input, {2.0 * err / static_cast<double>(batch)}, critic_ws_,
                 critic_grads_);
    }
    result.critic_loss = loss / static_cast<double>(batch);
    optimize_step(critic_opt_, critic_, critic_grads_);

    // ---- actor: ascend (1/N) sum Q(o_i, mu(o_i)) ----
    zero(actor_grads_);
    double objective = 0.0;
    for (const Transition* t : samples) {
        const double a = forward(actor_, t->observation, actor_ws_)[0];
        std::copy(t->observation.begin(), t->observation.end(), critic_input.begin());
        critic_input.back() = a;
        const double q = forward(critic_, critic_input, critic_ws_)[0];
        objective += q;
        // dQ/da via the critic's input gradient, then chain through the actor
        backward(critic_, critic_input, {1.0}, critic_ws_, sample_scratch_,
                 /*accumulate_params=*/false);
        const double dq_da = sample_scratch_.input.back();
        backward(actor_, t->observation, {-dq_da / static_cast<double>(batch)}, actor_ws_,
                 actor_grads_);
    }
    result.actor_objective = objective / static_cast<double>(batch);
    optimize_step(actor_opt_, actor_, actor_grads_);

    soft_update(target_critic_, critic_, config_.soft_update_rate);
    soft_update(target_actor_, actor_, config_.soft_update_rate);

    result.learned = true;
    return result;
}

}  // namespace liquidsim
