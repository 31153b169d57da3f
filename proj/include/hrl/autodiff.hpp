#pragma once

#include <cstddef>
#include <vector>

#include "hrl/tensor.hpp"

namespace hrl {

// One reverse-mode tape. Nodes are appended in topological order by
// construction, so backward() is a single reverse sweep.
class Graph {
public:
    enum class Op {
        Leaf,
        MatMul,
        Add,
        Mul,
        Relu,
        Tanh,
        Sigmoid,
        Square,
        Concat,
        Slice,
        Mean,
    };

    // Leaf with gradient tracking (parameters).
    int param(const Tensor& value);
    // Leaf without gradient tracking (inputs, targets, masks).
    int constant(const Tensor& value);
    int constant(Tensor&& value);

    int matmul(int a, int b);
    int add(int a, int b);
    int mul(int a, int b);
    int relu(int a);
    int tanh(int a);
    int sigmoid(int a);
    int square(int a);
    int concat(int a, int b);          // along the last axis
    int slice(int a, std::size_t start, std::size_t len);  // along the last axis
    int mean(int a);                   // over all elements, result shape {1}

    // Convenience compositions of the primitive set.
    int sub(int a, int b);             // add(a, mul(b, -1))
    int scale(int a, double k);        // mul by a scalar constant

    const Tensor& value(int id) const {
        check_id(id);
        return nodes_[id].value;
    }
    const Tensor& grad(int id) const {
        check_id(id);
        return nodes_[id].grad;
    }
    bool tracks_grad(int id) const {
        check_id(id);
        return nodes_[id].needs_grad;
    }
    std::size_t size() const { return nodes_.size(); }

    // Backpropagate from a scalar root. Requires forward values (always
    // present: ops evaluate eagerly on construction).
    void backward(int root);

    void clear() { nodes_.clear(); ran_backward_ = false; }

private:
    struct Node {
        Op op;
        int a = -1, b = -1;
        std::size_t attr0 = 0, attr1 = 0;  // slice start/len
        bool needs_grad = false;
        Tensor value;
        Tensor grad;  // allocated lazily in backward
    };

    int push(Node n);
    void check_id(int id) const;

    std::vector<Node> nodes_;
    bool ran_backward_ = false;
};

}  // namespace hrl
