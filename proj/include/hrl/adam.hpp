#pragma once

#include <cstdint>
#include <vector>

#include "hrl/tensor.hpp"

namespace hrl {

// Adam with bias correction over a fixed list of parameter tensors.
struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr = 0.001;

    static AdamState for_params(const std::vector<Tensor*>& params, double lr = 0.001);
};

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state);

}  // namespace hrl
