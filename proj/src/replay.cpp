#include "liquidsim/replay.hpp"

#include "liquidsim/errors.hpp"

namespace liquidsim {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidParameter("replay capacity must be > 0");
    storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (size_ < capacity_) {
        storage_.push_back(std::move(t));
        size_ += 1;
    } else {
        storage_[head_] = std::move(t);  // overwrite the oldest
    }
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= size_) throw InvalidParameter("replay index out of range");
    if (size_ < capacity_) return storage_[i];
    return storage_[(head_ + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(Rng& rng, std::size_t batch) const {
    if (batch > size_) throw InvalidParameter("batch larger than buffer");
    std::vector<std::size_t> picked;
    picked.reserve(batch);
    if (batch * 2 >= size_) {
        // dense draw: partial Fisher-Yates
        std::vector<std::size_t> perm(size_);
        for (std::size_t i = 0; i < size_; ++i) perm[i] = i;
        for (std::size_t i = 0; i < batch; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(bounded_uint(rng, size_ - i));
            std::swap(perm[i], perm[j]);
            picked.push_back(perm[i]);
        }
        return picked;
    }
    while (picked.size() < batch) {
        const std::size_t idx = static_cast<std::size_t>(bounded_uint(rng, size_));
        bool dup = false;
        for (std::size_t p : picked)
            if (p == idx) {
                dup = true;
                break;
            }
        if (!dup) picked.push_back(idx);
    }
    return picked;
}

std::vector<const Transition*> ReplayBuffer::sample(Rng& rng, std::size_t batch) const {
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i : sample_indices(rng, batch)) out.push_back(&at(i));
    return out;
}

}  // namespace liquidsim
