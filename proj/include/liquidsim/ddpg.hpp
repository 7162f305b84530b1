#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "liquidsim/environment.hpp"
#include "liquidsim/neural.hpp"
#include "liquidsim/replay.hpp"
#include "liquidsim/rng.hpp"

namespace liquidsim {

// Mean-reverting exploration noise, scaled down multiplicatively per episode.
struct OuNoise {
    double theta = 0.15;
    double sigma = 0.2;
    double decay = 0.998;   // per-episode multiplier on the scale
    double floor = 0.05;    // scale never drops below this
    double scale = 1.0;
    double value = 0.0;

    void reset() { value = 0.0; }
    void end_episode() { scale = std::max(floor, scale * decay); }
    double sample(Rng& rng) {
        value += theta * (0.0 - value) + sigma * scale * gaussian(rng);
        return value;
    }
};

struct DdpgConfig {
    std::vector<int> actor_hidden = {24, 24};
    std::vector<int> critic_hidden = {64, 64};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double discount_factor = 0.99;      // distinct from the market's tau/gamma
    double soft_update_rate = 1e-2;
    std::size_t buffer_capacity = 100000;
    std::size_t minibatch_size = 64;
    OuNoise noise;
};

// Per-agent DDPG learner: actor/critic, slow-moving targets, replay buffer
// and exploration noise. Observation-action pairs only; no view of other
// agents.
class DdpgAgent {
  public:
    DdpgAgent(int observation_dim, const DdpgConfig& config, std::uint64_t seed);

    // Policy output in [0,1]; with explore, additive noise then clipping.
    double act(const Observation& obs, bool explore);
    double act(const std::vector<double >& obs_vec, bool explore);

    void store(Transition t) { buffer_.push(std::move(t)); }

    struct LearnResult {
        bool learned = false;
        double critic_loss = 0.0;
        double actor_objective = 0.0;  // mean Q(o, mu(o)) over the minibatch
    };

    // One minibatch update of critic and actor plus soft target updates.
    // No-op (learned = false) while the buffer is smaller than a minibatch.
    LearnResult learn();

    void begin_episode() { noise_.reset(); }
    void end_episode() { noise_.end_episode(); }

    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    const Mlp& target_actor() const { return target_actor_; }
    const Mlp& target_critic() const { return target_critic_; }
    Mlp& mutable_actor() { return actor_; }
    Mlp& mutable_critic() { return critic_; }
    Mlp& mutable_target_actor() { return target_actor_; }
    Mlp& mutable_target_critic() { return target_critic_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    const DdpgConfig& config() const { return config_; }
    int observation_dim() const { return observation_dim_; }

  private:
    int observation_dim_;
    DdpgConfig config_;
    Rng rng_;
    Mlp actor_;
    Mlp critic_;
    Mlp target_actor_;
    Mlp target_critic_;
    OptimizerState actor_opt_;
    OptimizerState critic_opt_;
    ReplayBuffer buffer_;
    OuNoise noise_;

    // scratch
    MlpWorkspace actor_ws_;
    MlpWorkspace critic_ws_;
    Gradients actor_grads_;
    Gradients critic_grads_;
    Gradients sample_scratch_;
};

}  // namespace liquidsim
