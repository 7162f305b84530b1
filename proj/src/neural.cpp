#include "liquidsim/neural.hpp"

#include <cmath>
#include <cstddef>

#include "liquidsim/errors.hpp"

namespace liquidsim {

namespace {

double apply_activation(Activation act, double z) {
    switch (act) {
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Identity: return z;
    }
    return z;
}

double activation_derivative(Activation act, double z, double y) {
    switch (act) {
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: return y * (1.0 - y);
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

}  // namespace

Mlp Mlp::create(const std::vector<int>& layer_dims, Activation output_activation, Rng& rng) {
    if (layer_dims.size() < 2) throw InvalidParameter("need at least input and output dims");
    Mlp net;
    net.layers.reserve(layer_dims.size() - 1);
    for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
        if (layer_dims[i] < 1 || layer_dims[i + 1] < 1)
            throw InvalidParameter("layer dims must be >= 1");
        Layer layer;
        layer.in = layer_dims[i];
        layer.out = layer_dims[i + 1];
        layer.activation =
            (i + 2 == layer_dims.size()) ? output_activation : Activation::Relu;
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.biases.resize(static_cast<std::size_t>(layer.out));
        for (auto& w : layer.weights) w = uniform(rng, -bound, bound);
        for (auto& b : layer.biases) b = uniform(rng, -bound, bound);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

bool Mlp::same_architecture(const Mlp& other) const {
    if (layers.size() != other.layers.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].in != other.layers[i].in || layers[i].out != other.layers[i].out ||
            layers[i].activation != other.layers[i].activation)
            return false;
    }
    return true;
}

Gradients Gradients::zeros_like(const Mlp& net) {
    Gradients g;
    g.layers.resize(net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        g.layers[i].weights.assign(net.layers[i].weights.size(), 0.0);
        g.layers[i].biases.assign(net.layers[i].biases.size(), 0.0);
    }
    g.input.assign(static_cast<std::size_t>(net.input_dim()), 0.0);
    return g;
}

void Gradients::accumulate(const Gradients& other) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        for (std::size_t k = 0; k < layers[i].weights.size(); ++k)
            layers[i].weights[k] += other.layers[i].weights[k];
        for (std::size_t k = 0; k < layers[i].biases.size(); ++k)
            layers[i].biases[k] += other.layers[i].biases[k];
    }
    for (std::size_t k = 0; k < input.size(); ++k) input[k] += other.input[k];
}

void Gradients::scale(double s) {
    for (auto& l : layers) {
        for (auto& w : l.weights) w *= s;
        for (auto& b : l.biases) b *= s;
    }
    for (auto& g : input) g *= s;
}

std::vector<double> forward(const Mlp& net, const std::vector<double>& input,
                            MlpWorkspace& ws) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw InvalidParameter("input dimension mismatch");
    ws.pre.resize(net.layers.size());
    ws.post.resize(net.layers.size());
    const std::vector<double>* x = &input;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& layer = net.layers[i];
        auto& z = ws.pre[i];
        auto& y = ws.post[i];
        z.assign(static_cast<std::size_t>(layer.out), 0.0);
        y.resize(static_cast<std::size_t>(layer.out));
        for (int o = 0; o < layer.out; ++o) {
            const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
            double acc = layer.biases[static_cast<std::size_t>(o)];
            for (int in = 0; in < layer.in; ++in) acc += w[in] * (*x)[static_cast<std::size_t>(in)];
            z[static_cast<std::size_t>(o)] = acc;
            y[static_cast<std::size_t>(o)] = apply_activation(layer.activation, acc);
        }
        x = &y;
    }
    return ws.post.back();
}

std::vector<double> forward(const Mlp& net, const std::vector<double>& input) {
    MlpWorkspace ws;
    return forward(net, input, ws);
}

void backward(const Mlp& net, const std::vector<double>& input,
              const std::vector<double>& output_grad, MlpWorkspace& ws, Gradients& grads,
              bool accumulate_params) {
    if (static_cast<int>(output_grad.size()) != net.output_dim())
        throw InvalidParameter("output_grad dimension mismatch");

    auto& delta = ws.delta;
    auto& propagated = ws.scratch;
    delta.assign(output_grad.begin(), output_grad.end());
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const auto& layer = net.layers[li];
        const auto& z = ws.pre[li];
        const auto& y = ws.post[li];
        // delta holds dL/dy for this layer; fold in the activation
        for (int o = 0; o < layer.out; ++o)
            delta[static_cast<std::size_t>(o)] *= activation_derivative(
                layer.activation, z[static_cast<std::size_t>(o)], y[static_cast<std::size_t>(o)]);

        const std::vector<double>& below = li == 0 ? input : ws.post[li - 1];
        if (accumulate_params) {
            auto& lg = grads.layers[li];
            for (int o = 0; o < layer.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                double* gw = lg.weights.data() + static_cast<std::size_t>(o) * layer.in;
                for (int in = 0; in < layer.in; ++in)
                    gw[in] += d * below[static_cast<std::size_t>(in)];
                lg.biases[static_cast<std::size_t>(o)] += d;
            }
        }

        propagated.assign(static_cast<std::size_t>(layer.in), 0.0);
        for (int o = 0; o < layer.out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
            for (int in = 0; in < layer.in; ++in)
                propagated[static_cast<std::size_t>(in)] += d * w[in];
        }
        if (li == 0)
            grads.input.assign(propagated.begin(), propagated.end());
        else
            std::swap(delta, propagated);
    }
}

Gradients gradient(const Mlp& net, const std::vector<double>& input,
                   const std::vector<double>& output_grad) {
    MlpWorkspace ws;
    forward(net, input, ws);
    Gradients grads = Gradients::zeros_like(net);
    backward(net, input, output_grad, ws, grads);
    return grads;
}

OptimizerState OptimizerState::create(const Mlp& net, double learning_rate) {
    OptimizerState s;
    s.learning_rate = learning_rate;
    const Gradients z = Gradients::zeros_like(net);
    s.first_moment = z.layers;
    s.second_moment = z.layers;
    return s;
}

namespace {

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, double lr, double b1,
                 double b2, double eps, double bc1, double bc2) {
    for (std::size_t k = 0; k < param.size(); ++k) {
        const double g = grad[k];
        if (!std::isfinite(g)) throw TrainingDivergence("non-finite gradient");
        m[k] = b1 * m[k] + (1.0 - b1) * g;
        v[k] = b2 * v[k] + (1.0 - b2) * g * g;
        const double mhat = m[k] / bc1;
        const double vhat = v[k] / bc2;
        param[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

void optimize_step(OptimizerState& state, Mlp& net, const Gradients& grads) {
    if (grads.layers.size() != net.layers.size())
        throw InvalidParameter("gradient/network shape mismatch");
    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (grads.layers[i].weights.size() != net.layers[i].weights.size() ||
            grads.layers[i].biases.size() != net.layers[i].biases.size())
            throw InvalidParameter("gradient/network shape mismatch");
        adam_update(net.layers[i].weights, grads.layers[i].weights, state.first_moment[i].weights,
                    state.second_moment[i].weights, state.learning_rate, state.beta1, state.beta2,
                    state.eps, bc1, bc2);
        adam_update(net.layers[i].biases, grads.layers[i].biases, state.first_moment[i].biases,
                    state.second_moment[i].biases, state.learning_rate, state.beta1, state.beta2,
                    state.eps, bc1, bc2);
    }
}

void soft_update(Mlp& target, const Mlp& source, double rate) {
    if (!target.same_architecture(source))
        throw InvalidParameter("soft_update architecture mismatch");
    if (rate < 0.0 || rate > 1.0) throw InvalidParameter("rate must be in [0, 1]");
    for (std::size_t i = 0; i < target.layers.size(); ++i) {
        auto& t = target.layers[i];
        const auto& s = source.layers[i];
        for (std::size_t k = 0; k < t.weights.size(); ++k)
            t.weights[k] = rate * s.weights[k] + (1.0 - rate) * t.weights[k];
        for (std::size_t k = 0; k < t.biases.size(); ++k)
            t.biases[k] = rate * s.biases[k] + (1.0 - rate) * t.biases[k];
    }
}

}  // namespace liquidsim
