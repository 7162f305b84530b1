#pragma once

#include <cstdint>
#include <vector>

#include "liquidsim/rng.hpp"

namespace liquidsim {

enum class Activation { Relu, Sigmoid, Identity };

// Dense feed-forward network. Hidden layers are rectified; the output layer
// carries its own tag (Sigmoid squashes actor outputs into (0,1), Identity
// is used for critic values).
struct Mlp {
    struct Layer {
        int in = 0;
        int out = 0;
        std::vector<double> weights;  // row-major, out x in
        std::vector<double> biases;   // out
        Activation activation = Activation::Identity;
    };

    std::vector<Layer> layers;

    static Mlp create(const std::vector<int>& layer_dims, Activation output_activation,
                      Rng& rng);

    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
    std::size_t parameter_count() const;
    bool same_architecture(const Mlp& other) const;
};

// Per-layer parameter gradients plus the gradient with respect to the input
// (the DDPG actor update chains dQ/da through the critic's input).
struct Gradients {
    struct LayerGrads {
        std::vector<double> weights;
        std::vector<double> biases;
    };
    std::vector<LayerGrads> layers;
    std::vector<double> input;

    static Gradients zeros_like(const Mlp& net);
    void accumulate(const Gradients& other);
    void scale(double s);
};

// Reusable forward/backward scratch space; avoids per-call allocation in
// training loops.
struct MlpWorkspace {
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // post-activation per layer
    std::vector<double> delta;
    std::vector<double> scratch;
};

std::vector<double> forward(const Mlp& net, const std::vector<double>& input);
std::vector<double> forward(const Mlp& net, const std::vector<double>& input,
                            MlpWorkspace& ws);

// Exact reverse-mode gradient of output . output_grad with respect to every
// parameter and the input.
Gradients gradient(const Mlp& net, const std::vector<double>& input,
                   const std::vector<double>& output_grad);

// Backward pass reusing a workspace filled by the matching forward() call;
// accumulates into `grads` and returns nothing (input gradient lands in
// grads.input, overwritten per call).
void backward(const Mlp& net, const std::vector<double>& input,
              const std::vector<double>& output_grad, MlpWorkspace& ws, Gradients& grads,
              bool accumulate_params = true);

// Adaptive-moment optimizer state (first/second moment per parameter).
struct OptimizerState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::int64_t step_count = 0;
    std::vector<Gradients::LayerGrads> first_moment;
    std::vector<Gradients::LayerGrads> second_moment;

    static OptimizerState create(const Mlp& net, double learning_rate);
};

// One adaptive-moment descent step; throws TrainingDivergence on non-finite
// gradients.
void optimize_step(OptimizerState& state, Mlp& net, const Gradients& grads);

// target <- rate * source + (1 - rate) * target
void soft_update(Mlp& target, const Mlp& source, double rate);

}  // namespace liquidsim
