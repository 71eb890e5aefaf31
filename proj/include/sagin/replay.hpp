#pragma once

#include <cstddef>
#include <vector>

#include "sagin/mdp.hpp"
#include "sagin/rng.hpp"

namespace sagin {

/// One stored interaction. States are kept in encoded form together with the
/// next state's mask so training targets can skip unavailable actions.
struct Transition {
    std::vector<double> state;
    int action = 0;  // index into the ActionSpace enumeration
    double cost = 0.0;
    double risk = 0.0;
    std::vector<double> next_state;
    ActionMask next_mask;
};

/// Bounded ring buffer; once full, new transitions overwrite the oldest.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
        buf_.reserve(capacity);
    }

    void push(Transition t) {
        if (buf_.size() < capacity_) {
            buf_.push_back(std::move(t));
        } else {
            buf_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    std::size_t size() const { return buf_.size(); }
    std::size_t capacity() const { return capacity_; }

    const Transition& at(std::size_t i) const { return buf_[i]; }

    std::size_t sample_index(Rng& rng) const {
        return static_cast<std::size_t>(rng.uniform_int(buf_.size()));
    }

    const Transition& sample(Rng& rng) const { return buf_[sample_index(rng)]; }

private:
    std::vector<Transition> buf_;
    std::size_t capacity_;
    std::size_t next_ = 0;
};

}  // namespace sagin
