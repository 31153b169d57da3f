#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "hrl/autodiff.hpp"
#include "hrl/tensor.hpp"

namespace hrl {

struct LinearLayer {
    Tensor w;  // [out, in]
    Tensor b;  // [out]
};

struct HiddenState {
    Tensor h;
    Tensor c;

    static HiddenState zeros(std::size_t n) { return {Tensor({n}), Tensor({n})}; }
};

// One Q-network: MLP feature extractor, optional LSTM cell, dueling head.
// Non-recurrent variants replace the LSTM with a plain dense layer.
struct ControllerNet {
    std::vector<LinearLayer> extractor;  // ReLU after each layer
    bool recurrent = true;
    Tensor lstm_wx;  // [4H, F]
    Tensor lstm_wh;  // [4H, H]
    Tensor lstm_b;   // [4H]
    LinearLayer trunk;  // feature -> hidden when not recurrent
    LinearLayer value_head;  // [1, H]
    LinearLayer adv_head;    // [arity, H]
    std::size_t input_dim = 0, hidden_size = 0, out_arity = 0;

    static ControllerNet make(std::size_t input_dim,
                              const std::vector<std::size_t>& extractor_sizes,
                              std::size_t hidden_size, std::size_t out_arity,
                              bool recurrent, std::mt19937_64& rng);

    std::size_t feature_dim() const {
        return extractor.empty() ? input_dim : extractor.back().w.shape[0];
    }

    std::vector<Tensor*> params();
    std::vector<const Tensor*> params() const;
    std::vector<std::string> param_names() const;

    std::map<std::string, Tensor> to_param_map(const std::string& prefix) const;
    void load_param_map(const std::map<std::string, Tensor>& m, const std::string& prefix);

    void validate() const;  // parameter shape consistency
};

// target <- tau * main + (1 - tau) * target, elementwise
void soft_update(const ControllerNet& main, ControllerNet& target, double tau);

// A network's parameters bound into one graph as leaves.
struct BoundNet {
    const ControllerNet* net = nullptr;
    std::vector<int> pids;  // same order as params()
};

BoundNet bind(Graph& g, const ControllerNet& net, bool track_grads);

// Feature extraction (the f_extract stage).
int extract(Graph& g, const BoundNet& bn, int input);

struct StepOut {
    int h = -1, c = -1, q = -1;
};

// One recurrent step plus the dueling head: (feature, state) -> (state', q).
StepOut recurrent_step(Graph& g, const BoundNet& bn, int feature, int h, int c);

// Plain (no-grad) evaluation helpers.
struct EvalOut {
    HiddenState state;
    Tensor q;
};
EvalOut eval_step(const ControllerNet& net, const Tensor& input, const HiddenState& state);

}  // namespace hrl
