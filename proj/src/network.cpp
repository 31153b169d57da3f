#include "hrl/network.hpp"

#include <string>

#include "hrl/errors.hpp"

namespace hrl {

static LinearLayer make_linear(std::size_t out, std::size_t in, std::mt19937_64& rng) {
    return {uniform_init({out, in}, in, rng), uniform_init({out}, in, rng)};
}

ControllerNet ControllerNet::make(std::size_t input_dim,
                                  const std::vector<std::size_t>& extractor_sizes,
                                  std::size_t hidden_size, std::size_t out_arity,
                                  bool recurrent, std::mt19937_64& rng) {
    if (out_arity < 1 || hidden_size < 1 || input_dim < 1)
        throw config_error("ControllerNet: input_dim, hidden_size and out_arity must be >= 1");
    ControllerNet net;
    net.input_dim = input_dim;
    net.hidden_size = hidden_size;
    net.out_arity = out_arity;
    net.recurrent = recurrent;
    std::size_t in = input_dim;
    for (std::size_t sz : extractor_sizes) {
        net.extractor.push_back(make_linear(sz, in, rng));
        in = sz;
    }
    if (recurrent) {
        net.lstm_wx = uniform_init({4 * hidden_size, in}, in, rng);
        net.lstm_wh = uniform_init({4 * hidden_size, hidden_size}, hidden_size, rng);
        net.lstm_b = uniform_init({4 * hidden_size}, in, rng);
        // start with an open forget gate so early training can retain state
        for (std::size_t i = hidden_size; i < 2 * hidden_size; ++i)
            net.lstm_b.data[i] = 1.0;
    } else {
        net.trunk = make_linear(hidden_size, in, rng);
    }
    net.value_head = make_linear(1, hidden_size, rng);
    net.adv_head = make_linear(out_arity, hidden_size, rng);
    net.validate();
    return net;
}

void ControllerNet::validate() const {
    std::size_t in = input_dim;
    for (std::size_t i = 0; i < extractor.size(); ++i) {
        const auto& l = extractor[i];
        if (l.w.ndim() != 2 || l.w.shape[1] != in || l.b.shape[0] != l.w.shape[0])
            throw shape_error("extractor layer " + std::to_string(i) +
                              ": weight (" + l.w.shape_str() + ") inconsistent with input " +
                              std::to_string(in));
        in = l.w.shape[0];
    }
    if (recurrent) {
        if (lstm_wx.shape != std::vector<std::size_t>{4 * hidden_size, in} ||
            lstm_wh.shape != std::vector<std::size_t>{4 * hidden_size, hidden_size} ||
            lstm_b.shape != std::vector<std::size_t>{4 * hidden_size})
            throw shape_error("lstm parameters inconsistent with feature dim " +
                              std::to_string(in) + " and hidden size " +
                              std::to_string(hidden_size));
    } else {
        if (trunk.w.shape != std::vector<std::size_t>{hidden_size, in})
            throw shape_error("trunk weight (" + trunk.w.shape_str() + ") inconsistent");
    }
    if (value_head.w.shape != std::vector<std::size_t>{1, hidden_size} ||
        adv_head.w.shape != std::vector<std::size_t>{out_arity, hidden_size})
        throw shape_error("dueling head shapes inconsistent with hidden size " +
                          std::to_string(hidden_size));
}

std::vector<Tensor*> ControllerNet::params() {
    std::vector<Tensor*> p;
    for (auto& l : extractor) {
        p.push_back(&l.w);
        p.push_back(&l.b);
    }
    if (recurrent) {
        p.push_back(&lstm_wx);
        p.push_back(&lstm_wh);
        p.push_back(&lstm_b);
    } else {
        p.push_back(&trunk.w);
        p.push_back(&trunk.b);
    }
    p.push_back(&value_head.w);
    p.push_back(&value_head.b);
    p.push_back(&adv_head.w);
    p.push_back(&adv_head.b);
    return p;
}

std::vector<const Tensor*> ControllerNet::params() const {
    auto p = const_cast<ControllerNet*>(this)->params();
    return {p.begin(), p.end()};
}

std::vector<std::string> ControllerNet::param_names() const {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < extractor.size(); ++i) {
        names.push_back("extractor" + std::to_string(i) + ".w");
        names.push_back("extractor" + std::to_string(i) + ".b");
    }
    if (recurrent) {
        names.push_back("lstm.wx");
        names.push_back("lstm.wh");
        names.push_back("lstm.b");
    } else {
        names.push_back("trunk.w");
        names.push_back("trunk.b");
    }
    names.push_back("value.w");
    names.push_back("value.b");
    names.push_back("adv.w");
    names.push_back("adv.b");
    return names;
}

std::map<std::string, Tensor> ControllerNet::to_param_map(const std::string& prefix) const {
    std::map<std::string, Tensor> m;
    auto p = params();
    auto n = param_names();
    for (std::size_t i = 0; i < p.size(); ++i) m.emplace(prefix + n[i], *p[i]);
    return m;
}

void ControllerNet::load_param_map(const std::map<std::string, Tensor>& m,
                                   const std::string& prefix) {
    auto p = params();
    auto n = param_names();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto it = m.find(prefix + n[i]);
        if (it == m.end()) throw std::runtime_error("missing parameter " + prefix + n[i]);
        if (it->second.shape != p[i]->shape)
            throw shape_error("parameter " + prefix + n[i] + ": stored shape (" +
                              it->second.shape_str() + ") != net shape (" +
                              p[i]->shape_str() + ")");
        *p[i] = it->second;
    }
}

void soft_update(const ControllerNet& main, ControllerNet& target, double tau) {
    if (tau < 0.0 || tau > 1.0)
        throw precondition_error("soft_update: tau must be in [0,1]");
    auto mp = main.params();
    auto tp = target.params();
    if (mp.size() != tp.size()) throw shape_error("soft_update: parameter count mismatch");
    for (std::size_t i = 0; i < mp.size(); ++i) {
        if (!mp[i]->same_shape(*tp[i]))
            throw shape_error("soft_update: shape mismatch at parameter " + std::to_string(i));
        for (std::size_t j = 0; j < mp[i]->numel(); ++j)
            tp[i]->data[j] = tau * mp[i]->data[j] + (1.0 - tau) * tp[i]->data[j];
    }
}

BoundNet bind(Graph& g, const ControllerNet& net, bool track_grads) {
    BoundNet bn;
    bn.net = &net;
    for (const Tensor* p : net.params())
        bn.pids.push_back(track_grads ? g.param(*p) : g.constant(*p));
    return bn;
}

// pids layout mirrors params(): extractor pairs, then lstm/trunk, then heads.
int extract(Graph& g, const BoundNet& bn, int input) {
    const ControllerNet& net = *bn.net;
    if (g.value(input).numel() != net.input_dim)
        throw shape_error("extract: input length " +
                          std::to_string(g.value(input).numel()) + " != extractor input dim " +
                          std::to_string(net.input_dim));
    int x = input;
    for (std::size_t i = 0; i < net.extractor.size(); ++i) {
        int w = bn.pids[2 * i], b = bn.pids[2 * i + 1];
        x = g.relu(g.add(g.matmul(w, x), b));
    }
    return x;
}

StepOut recurrent_step(Graph& g, const BoundNet& bn, int feature, int h, int c) {
    const ControllerNet& net = *bn.net;
    std::size_t base = 2 * net.extractor.size();
    std::size_t H = net.hidden_size;
    StepOut out;
    if (net.recurrent) {
        if (g.value(h).numel() != H || g.value(c).numel() != H)
            throw shape_error("recurrent_step: hidden state dims do not match hidden size " +
                              std::to_string(H));
        int wx = bn.pids[base], wh = bn.pids[base + 1], b = bn.pids[base + 2];
        int gates = g.add(g.add(g.matmul(wx, feature), g.matmul(wh, h)), b);
        int gi = g.sigmoid(g.slice(gates, 0, H));
        int gf = g.sigmoid(g.slice(gates, H, H));
        int go = g.sigmoid(g.slice(gates, 2 * H, H));
        int gc = g.tanh(g.slice(gates, 3 * H, H));
        out.c = g.add(g.mul(gf, c), g.mul(gi, gc));
        out.h = g.mul(go, g.tanh(out.c));
    } else {
        int w = bn.pids[base], b = bn.pids[base + 1];
        out.h = g.relu(g.add(g.matmul(w, feature), b));
        out.c = c;  // pass-through, unused
    }
    std::size_t hb = base + (net.recurrent ? 3 : 2);
    int vw = bn.pids[hb], vb = bn.pids[hb + 1];
    int aw = bn.pids[hb + 2], ab = bn.pids[hb + 3];
    int v = g.add(g.matmul(vw, out.h), vb);           // [1]
    int adv = g.add(g.matmul(aw, out.h), ab);         // [arity]
    out.q = g.add(g.sub(adv, g.mean(adv)), v);        // V + (A - mean A)
    return out;
}

EvalOut eval_step(const ControllerNet& net, const Tensor& input, const HiddenState& state) {
    Graph g;
    BoundNet bn = bind(g, net, false);
    int x = g.constant(input);
    int h = g.constant(state.h), c = g.constant(state.c);
    int feat = extract(g, bn, x);
    StepOut s = recurrent_step(g, bn, feat, h, c);
    return {{g.value(s.h), g.value(s.c)}, g.value(s.q)};
}

}  // namespace hrl
