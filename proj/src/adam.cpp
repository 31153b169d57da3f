#include "hrl/adam.hpp"

#include <cmath>
#include <string>

#include "hrl/errors.hpp"

namespace hrl {

AdamState AdamState::for_params(const std::vector<Tensor*>& params, double lr) {
    AdamState s;
    s.lr = lr;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor* p : params) {
        s.m.emplace_back(p->shape);
        s.v.emplace_back(p->shape);
    }
    return s;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw shape_error("adam_step: got " + std::to_string(params.size()) +
                          " params, " + std::to_string(grads.size()) + " grads, state of " +
                          std::to_string(state.m.size()));
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!params[i]->same_shape(grads[i]) || !params[i]->same_shape(state.m[i]))
            throw shape_error("adam_step: shape mismatch at parameter " + std::to_string(i) +
                              ": param (" + params[i]->shape_str() + "), grad (" +
                              grads[i].shape_str() + ")");

    state.t += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = grads[i];
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        for (std::size_t j = 0; j < p.numel(); ++j) {
            m.data[j] = state.beta1 * m.data[j] + (1.0 - state.beta1) * g.data[j];
            v.data[j] = state.beta2 * v.data[j] + (1.0 - state.beta2) * g.data[j] * g.data[j];
            double mhat = m.data[j] / bc1;
            double vhat = v.data[j] / bc2;
            p.data[j] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
        check_finite(p, "parameter " + std::to_string(i) + " after adam_step");
    }
}

}  // namespace hrl
