#include "hrl/autodiff.hpp"

#include <cmath>
#include <string>

#include "hrl/errors.hpp"

namespace hrl {

namespace {

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
    throw shape_error(std::string(op) + ": incompatible shapes (" + a.shape_str() +
                      ") and (" + b.shape_str() + ")");
}

}  // namespace

int Graph::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

void Graph::check_id(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size()))
        throw precondition_error("invalid node id " + std::to_string(id));
}

int Graph::param(const Tensor& value) {
    Node n;
    n.op = Op::Leaf;
    n.needs_grad = true;
    n.value = value;
    return push(std::move(n));
}

int Graph::constant(const Tensor& value) {
    Node n;
    n.op = Op::Leaf;
    n.value = value;
    return push(std::move(n));
}

int Graph::constant(Tensor&& value) {
    Node n;
    n.op = Op::Leaf;
    n.value = std::move(value);
    return push(std::move(n));
}

int Graph::matmul(int a, int b) {
    check_id(a);
    check_id(b);
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    if (A.ndim() != 2) shape_fail("matmul", A, B);
    std::size_t m = A.shape[0], k = A.shape[1];
    Node n;
    n.op = Op::MatMul;
    n.a = a;
    n.b = b;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    if (B.ndim() == 1) {
        if (B.shape[0] != k) shape_fail("matmul", A, B);
        Tensor out({m});
        // skip zero inputs; one-hot observation vectors are mostly zeros
        for (std::size_t j = 0; j < k; ++j) {
            double x = B.data[j];
            if (x == 0.0) continue;
            const double* col = A.data.data() + j;
            for (std::size_t i = 0; i < m; ++i) out.data[i] += col[i * k] * x;
        }
        n.value = std::move(out);
    } else if (B.ndim() == 2) {
        if (B.shape[0] != k) shape_fail("matmul", A, B);
        std::size_t p = B.shape[1];
        Tensor out({m, p});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                double av = A.at(i, j);
                if (av == 0.0) continue;
                for (std::size_t c = 0; c < p; ++c) out.at(i, c) += av * B.at(j, c);
            }
        n.value = std::move(out);
    } else {
        shape_fail("matmul", A, B);
    }
    return push(std::move(n));
}

int Graph::add(int a, int b) {
    check_id(a);
    check_id(b);
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    Node n;
    n.op = Op::Add;
    n.a = a;
    n.b = b;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    if (A.same_shape(B)) {
        Tensor out = A;
        for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] += B.data[i];
        n.value = std::move(out);
    } else if (B.numel() == 1) {
        Tensor out = A;
        for (auto& v : out.data) v += B.data[0];
        n.value = std::move(out);
    } else if (A.numel() == 1) {
        Tensor out = B;
        for (auto& v : out.data) v += A.data[0];
        n.value = std::move(out);
    } else if (A.ndim() == 2 && B.ndim() == 1 && A.shape[1] == B.shape[0]) {
        // broadcast over the leading batch dim
        Tensor out = A;
        for (std::size_t i = 0; i < A.shape[0]; ++i)
            for (std::size_t j = 0; j < A.shape[1]; ++j) out.at(i, j) += B.data[j];
        n.value = std::move(out);
    } else {
        shape_fail("add", A, B);
    }
    return push(std::move(n));
}

int Graph::mul(int a, int b) {
    check_id(a);
    check_id(b);
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    Node n;
    n.op = Op::Mul;
    n.a = a;
    n.b = b;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    if (A.same_shape(B)) {
        Tensor out = A;
        for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] *= B.data[i];
        n.value = std::move(out);
    } else if (B.numel() == 1) {
        Tensor out = A;
        for (auto& v : out.data) v *= B.data[0];
        n.value = std::move(out);
    } else if (A.numel() == 1) {
        Tensor out = B;
        for (auto& v : out.data) v *= A.data[0];
        n.value = std::move(out);
    } else {
        shape_fail("mul", A, B);
    }
    return push(std::move(n));
}

int Graph::relu(int a) {
    check_id(a);
    Node n;
    n.op = Op::Relu;
    n.a = a;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = nodes_[a].value;
    for (auto& v : n.value.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(n));
}

int Graph::tanh(int a) {
    check_id(a);
    Node n;
    n.op = Op::Tanh;
    n.a = a;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = nodes_[a].value;
    for (auto& v : n.value.data) v = std::tanh(v);
    return push(std::move(n));
}

int Graph::sigmoid(int a) {
    check_id(a);
    Node n;
    n.op = Op::Sigmoid;
    n.a = a;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = nodes_[a].value;
    for (auto& v : n.value.data) v = 1.0 / (1.0 + std::exp(-v));
    return push(std::move(n));
}

int Graph::square(int a) {
    check_id(a);
    Node n;
    n.op = Op::Square;
    n.a = a;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = nodes_[a].value;
    for (auto& v : n.value.data) v = v * v;
    return push(std::move(n));
}

int Graph::concat(int a, int b) {
    check_id(a);
    check_id(b);
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    if (A.ndim() != B.ndim() || A.ndim() == 0) shape_fail("concat", A, B);
    for (std::size_t i = 0; i + 1 < A.ndim(); ++i)
        if (A.shape[i] != B.shape[i]) shape_fail("concat", A, B);
    std::size_t la = A.shape.back(), lb = B.shape.back();
    std::size_t lead = A.numel() / (la ? la : 1);
    auto shape = A.shape;
    shape.back() = la + lb;
    Tensor out(shape);
    for (std::size_t r = 0; r < lead; ++r) {
        for (std::size_t i = 0; i < la; ++i) out.data[r * (la + lb) + i] = A.data[r * la + i];
        for (std::size_t i = 0; i < lb; ++i)
            out.data[r * (la + lb) + la + i] = B.data[r * lb + i];
    }
    Node n;
    n.op = Op::Concat;
    n.a = a;
    n.b = b;
    n.attr0 = la;
    n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
    n.value = std::move(out);
    return push(std::move(n));
}

int Graph::slice(int a, std::size_t start, std::size_t len) {
    check_id(a);
    const Tensor& A = nodes_[a].value;
    if (A.ndim() == 0) throw shape_error("slice: scalar input");
    std::size_t last = A.shape.back();
    if (start + len > last)
        throw shape_error("slice: range [" + std::to_string(start) + "," +
                          std::to_string(start + len) + ") exceeds axis length " +
                          std::to_string(last));
    std::size_t lead = A.numel() / last;
    auto shape = A.shape;
    shape.back() = len;
    Tensor out(shape);
    for (std::size_t r = 0; r < lead; ++r)
        for (std::size_t i = 0; i < len; ++i)
            out.data[r * len + i] = A.data[r * last + start + i];
    Node n;
    n.op = Op::Slice;
    n.a = a;
    n.attr0 = start;
    n.attr1 = len;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = std::move(out);
    return push(std::move(n));
}

int Graph::mean(int a) {
    check_id(a);
    const Tensor& A = nodes_[a].value;
    if (A.numel() == 0) throw shape_error("mean: empty tensor");
    double s = 0.0;
    for (double v : A.data) s += v;
    Node n;
    n.op = Op::Mean;
    n.a = a;
    n.needs_grad = nodes_[a].needs_grad;
    n.value = Tensor::scalar(s / static_cast<double>(A.numel()));
    return push(std::move(n));
}

int Graph::sub(int a, int b) { return add(a, scale(b, -1.0)); }

int Graph::scale(int a, double k) { return mul(a, constant(Tensor::scalar(k))); }

void Graph::backward(int root) {
    check_id(root);
    if (nodes_[root].value.numel() != 1)
        throw precondition_error("backward: root must be scalar, got shape (" +
                                 nodes_[root].value.shape_str() + ")");
    if (!nodes_[root].needs_grad)
        throw precondition_error("backward: root does not depend on any parameter");
    for (auto& n : nodes_)
        if (n.needs_grad) n.grad = Tensor(n.value.shape);
    nodes_[root].grad.data[0] = 1.0;
    ran_backward_ = true;

    for (int id = root; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.needs_grad) continue;
        const Tensor& g = n.grad;
        switch (n.op) {
            case Op::Leaf:
                break;
            case Op::MatMul: {
                Node& na = nodes_[n.a];
                Node& nb = nodes_[n.b];
                const Tensor& A = na.value;
                const Tensor& B = nb.value;
                std::size_t m = A.shape[0], k = A.shape[1];
                if (B.ndim() == 1) {
                    if (na.needs_grad)
                        for (std::size_t j = 0; j < k; ++j) {
                            double x = B.data[j];
                            if (x == 0.0) continue;
                            for (std::size_t i = 0; i < m; ++i)
                                na.grad.data[i * k + j] += g.data[i] * x;
                        }
                    if (nb.needs_grad)
                        for (std::size_t i = 0; i < m; ++i) {
                            double gi = g.data[i];
                            if (gi == 0.0) continue;
                            const double* row = A.data.data() + i * k;
                            for (std::size_t j = 0; j < k; ++j)
                                nb.grad.data[j] += row[j] * gi;
                        }
                } else {
                    std::size_t p = B.shape[1];
                    if (na.needs_grad)
                        for (std::size_t i = 0; i < m; ++i)
                            for (std::size_t j = 0; j < k; ++j) {
                                double s = 0.0;
                                for (std::size_t c = 0; c < p; ++c)
                                    s += g.data[i * p + c] * B.at(j, c);
                                na.grad.at(i, j) += s;
                            }
                    if (nb.needs_grad)
                        for (std::size_t j = 0; j < k; ++j)
                            for (std::size_t c = 0; c < p; ++c) {
                                double s = 0.0;
                                for (std::size_t i = 0; i < m; ++i)
                                    s += A.at(i, j) * g.data[i * p + c];
                                nb.grad.at(j, c) += s;
                            }
                }
                break;
            }
            case Op::Add: {
                Node& na = nodes_[n.a];
                Node& nb = nodes_[n.b];
                auto spread = [&](Node& in) {
                    if (!in.needs_grad) return;
                    if (in.value.same_shape(n.value)) {
                        for (std::size_t i = 0; i < g.numel(); ++i)
                            in.grad.data[i] += g.data[i];
                    } else if (in.value.numel() == 1) {
                        double s = 0.0;
                        for (double v : g.data) s += v;
                        in.grad.data[0] += s;
                    } else {
                        // [n] broadcast over rows of [m,n]
                        std::size_t cols = in.value.numel();
                        std::size_t rows = g.numel() / cols;
                        for (std::size_t r = 0; r < rows; ++r)
                            for (std::size_t c = 0; c < cols; ++c)
                                in.grad.data[c] += g.data[r * cols + c];
                    }
                };
                spread(na);
                spread(nb);
                break;
            }
            case Op::Mul: {
                Node& na = nodes_[n.a];
                Node& nb = nodes_[n.b];
                auto spread = [&](Node& self, const Node& other) {
                    if (!self.needs_grad) return;
                    if (self.value.same_shape(n.value)) {
                        if (other.value.numel() == 1 &&
                            n.value.numel() != 1) {
                            double ov = other.value.data[0];
                            for (std::size_t i = 0; i < g.numel(); ++i)
                                self.grad.data[i] += g.data[i] * ov;
                        } else {
                            for (std::size_t i = 0; i < g.numel(); ++i)
                                self.grad.data[i] += g.data[i] * other.value.data[i];
                        }
                    } else {  // self is the scalar side
                        double s = 0.0;
                        for (std::size_t i = 0; i < g.numel(); ++i)
                            s += g.data[i] * other.value.data[i];
                        self.grad.data[0] += s;
                    }
                };
                spread(na, nb);
                spread(nb, na);
                break;
            }
            case Op::Relu: {
                Node& na = nodes_[n.a];
                if (na.needs_grad)
                    for (std::size_t i = 0; i < g.numel(); ++i)
                        if (na.value.data[i] > 0.0) na.grad.data[i] += g.data[i];
                break;
            }
            case Op::Tanh: {
                Node& na = nodes_[n.a];
                if (na.needs_grad)
                    for (std::size_t i = 0; i < g.numel(); ++i) {
                        double y = n.value.data[i];
                        na.grad.data[i] += g.data[i] * (1.0 - y * y);
                    }
                break;
            }
            case Op::Sigmoid: {
                Node& na = nodes_[n.a];
                if (na.needs_grad)
                    for (std::size_t i = 0; i < g.numel(); ++i) {
                        double y = n.value.data[i];
                        na.grad.data[i] += g.data[i] * y * (1.0 - y);
                    }
                break;
            }
            case Op::Square: {
                Node& na = nodes_[n.a];
                if (na.needs_grad)
                    for (std::size_t i = 0; i < g.numel(); ++i)
                        na.grad.data[i] += g.data[i] * 2.0 * na.value.data[i];
                break;
            }
            case Op::Concat: {
                Node& na = nodes_[n.a];
                Node& nb = nodes_[n.b];
                std::size_t la = n.attr0;
                std::size_t ltot = n.value.shape.back();
                std::size_t lb = ltot - la;
                std::size_t lead = n.value.numel() / ltot;
                for (std::size_t r = 0; r < lead; ++r) {
                    if (na.needs_grad)
                        for (std::size_t i = 0; i < la; ++i)
                            na.grad.data[r * la + i] += g.data[r * ltot + i];
                    if (nb.needs_grad)
                        for (std::size_t i = 0; i < lb; ++i)
                            nb.grad.data[r * lb + i] += g.data[r * ltot + la + i];
                }
                break;
            }
            case Op::Slice: {
                Node& na = nodes_[n.a];
                if (na.needs_grad) {
                    std::size_t last = na.value.shape.back();
                    std::size_t len = n.attr1, start = n.attr0;
                    std::size_t lead = na.value.numel() / last;
                    for (std::size_t r = 0; r < lead; ++r)
                        for (std::size_t i = 0; i < len; ++i)
                            na.grad.data[r * last + start + i] += g.data[r * len + i];
                }
                break;
            }
            case Op::Mean: {
                Node& na = nodes_[n.a];
                if (na.needs_grad) {
                    double gi = g.data[0] / static_cast<double>(na.value.numel());
                    for (auto& v : na.grad.data) v += gi;
                }
                break;
            }
        }
    }
}

}  // namespace hrl
