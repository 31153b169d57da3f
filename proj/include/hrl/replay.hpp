#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "hrl/errors.hpp"

namespace hrl {

// Sub-controller transition. Observation encodings are the one-hot
// vectors, stored as bytes (they are exactly 0/1).
struct SubTransition {
    std::vector<std::uint8_t> obs;
    int subgoal = 0;
    int action = 0;
    double r_in = 0.0;
    std::vector<std::uint8_t> next_obs;
    int next_subgoal = 0;
    bool option_terminal = false;
    bool episode_terminal = false;
};

// The inputs the sub-controller consumed during one option. The sub hidden
// state is zeroed at option starts, so unrolling the sub net over this
// sequence reproduces its hidden state at the option's end.
struct OptionTrace {
    std::vector<std::vector<std::uint8_t>> obs;  // observation before each step
    int subgoal = 0;
};

// Meta-controller transition for one option. For framework v1 the inputs
// are observation encodings; for v2 they are sub-controller h-vectors.
// Stored h-vectors go stale as the sub-controller learns, so v2 training
// recomputes them from the option traces with the current sub network.
struct MetaTransition {
    std::vector<double> input;
    int subgoal = 0;
    double r_ex_total = 0.0;
    int duration = 1;  // k, the gamma exponent of the bootstrap
    std::vector<double> next_input;
    bool episode_terminal = false;
    OptionTrace prev_trace;  // option before this decision; empty at episode start
    OptionTrace trace;       // option taken by this decision
};

// A contiguous window sampled from one episode; the last ceil(len/2)
// positions carry the update mask, earlier ones are hidden-state burn-in.
template <class T>
struct SampledWindow {
    const std::vector<T>* episode = nullptr;
    std::size_t start = 0;
    std::size_t len = 0;
    std::size_t mask_start = 0;  // window-relative index of the first masked slot

    const T& at(std::size_t i) const { return (*episode)[start + i]; }
    bool masked(std::size_t i) const { return i >= mask_start; }
    std::size_t mask_count() const { return len - mask_start; }
};

// Ring of whole episodes with a transition-count capacity. Eviction
// drops oldest episodes whole.
template <class T>
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {}

    void append(std::vector<T> episode) {
        if (episode.empty()) throw precondition_error("append: empty episode");
        if (episode.size() > capacity_)
            throw precondition_error("append: episode longer than memory capacity");
        total_ += episode.size();
        episodes_.push_back(std::move(episode));
        while (total_ > capacity_) {
            total_ -= episodes_.front().size();
            episodes_.pop_front();
        }
    }

    std::size_t size() const { return total_; }
    std::size_t num_episodes() const { return episodes_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::vector<T>& episode(std::size_t i) const { return episodes_[i]; }

    // Bootstrapped Random Updates: uniform episode, uniform start index,
    // window of up to n transitions truncated at the episode end.
    std::vector<SampledWindow<T>> sample_sequences(std::size_t batch, std::size_t n,
                                                   std::mt19937_64& rng) const {
        if (episodes_.empty()) throw not_ready_error("replay memory empty, not ready to train");
        if (n < 1) throw precondition_error("sample_sequences: n must be >= 1");
        std::vector<SampledWindow<T>> out;
        out.reserve(batch);
        for (std::size_t b = 0; b < batch; ++b) {
            const auto& ep = episodes_[rng() % episodes_.size()];
            std::size_t start = static_cast<std::size_t>(rng() % ep.size());
            SampledWindow<T> w;
            w.episode = &ep;
            w.start = start;
            w.len = std::min(n, ep.size() - start);
            w.mask_start = w.len - (w.len + 1) / 2;  // last ceil(len/2) masked
            out.push_back(w);
        }
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t total_ = 0;
    std::deque<std::vector<T>> episodes_;
};

}  // namespace hrl
