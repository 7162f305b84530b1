#pragma once

#include <cstddef>
#include <vector>

#include "liquidsim/rng.hpp"

namespace liquidsim {

struct Transition {
    std::vector<double> observation;
    double action = 0.0;
    double reward = 0.0;
    std::vector<double> next_observation;
    bool terminal = false;
};

// Bounded FIFO store with uniform minibatch sampling (without replacement
// within a minibatch).
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }

    // Oldest-first access for inspection: index 0 is the oldest element.
    const Transition& at(std::size_t i) const;

    // Indices into insertion-ordered storage, uniform without replacement.
    std::vector<std::size_t> sample_indices(Rng& rng, std::size_t batch) const;
    std::vector<const Transition*> sample(Rng& rng, std::size_t batch) const;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next write slot
    std::size_t size_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace liquidsim
