#pragma once

#include <cmath>
#include <vector>

#include "hrl/network.hpp"

namespace hrl::testutil {

// Scalar unroll loss used by the gradient checks: run the network over a
// fixed input sequence from a zero hidden state and sum mean(q_t^2).
inline int unroll_loss(Graph& g, const BoundNet& bn, const std::vector<Tensor>& inputs,
                       std::size_t hidden) {
    int h = g.constant(Tensor({hidden}));
    int c = g.constant(Tensor({hidden}));
    int loss = -1;
    for (const auto& in : inputs) {
        int x = g.constant(in);
        StepOut out = recurrent_step(g, bn, extract(g, bn, x), h, c);
        h = out.h;
        c = out.c;
        int term = g.mean(g.square(out.q));
        loss = loss < 0 ? term : g.add(loss, term);
    }
    return loss;
}

inline double forward_loss(const ControllerNet& net, const std::vector<Tensor>& inputs) {
    Graph g;
    BoundNet bn = bind(g, net, false);
    return g.value(unroll_loss(g, bn, inputs, net.hidden_size)).data[0];
}

inline std::vector<Tensor> bptt_grads(const ControllerNet& net,
                                      const std::vector<Tensor>& inputs) {
    Graph g;
    BoundNet bn = bind(g, net, true);
    g.backward(unroll_loss(g, bn, inputs, net.hidden_size));
    std::vector<Tensor> grads;
    for (int pid : bn.pids) grads.push_back(g.grad(pid));
    return grads;
}

// Central finite differences over every parameter element.
inline std::vector<Tensor> fd_grads(ControllerNet& net, const std::vector<Tensor>& inputs,
                                    double step = 1e-5) {
    std::vector<Tensor*> ps = net.params();
    std::vector<Tensor> grads;
    for (Tensor* p : ps) {
        Tensor grad(p->shape);
        for (std::size_t i = 0; i < p->numel(); ++i) {
            double saved = p->data[i];
            p->data[i] = saved + step;
            double up = forward_loss(net, inputs);
            p->data[i] = saved - step;
            double down = forward_loss(net, inputs);
            p->data[i] = saved;
            grad.data[i] = (up - down) / (2.0 * step);
        }
        grads.push_back(std::move(grad));
    }
    return grads;
}

// Relative error between two stacked gradient lists:
// ||a - b|| / max(||a|| + ||b||, floor).
inline double grad_rel_error(const std::vector<Tensor>& a, const std::vector<Tensor>& b,
                             double floor = 1e-12) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i < a[k].numel(); ++i) {
            double d = a[k].data[i] - b[k].data[i];
            diff += d * d;
            na += a[k].data[i] * a[k].data[i];
            nb += b[k].data[i] * b[k].data[i];
        }
    return std::sqrt(diff) / std::max(std::sqrt(na) + std::sqrt(nb), floor);
}

// One small network + input sequence per seed; cycles through recurrent and
// feed-forward shapes so every configuration gets covered.
inline double gradcheck_case(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    bool recurrent = seed % 2 == 0;
    std::vector<std::size_t> extractor;
    switch (seed % 3) {
        case 0: extractor = {6, 5}; break;
        case 1: extractor = {7}; break;
        default: break;  // no extractor: LSTM/trunk directly on the input
    }
    std::size_t in_dim = 4 + seed % 3, hidden = 3 + seed % 2, arity = 2 + seed % 3;
    ControllerNet net = ControllerNet::make(in_dim, extractor, hidden, arity, recurrent, rng);

    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Tensor> inputs;
    for (int t = 0; t < 4; ++t) {
        Tensor x({in_dim});
        for (auto& v : x.data) v = dist(rng);
        inputs.push_back(std::move(x));
    }
    return grad_rel_error(bptt_grads(net, inputs), fd_grads(net, inputs));
}

}  // namespace hrl::testutil
