#include "sagin/net.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace sagin {

DenseNet init_dense(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("init_dense: need at least input and output sizes");
    for (int s : layer_sizes)
        if (s <= 0) throw std::invalid_argument("init_dense: layer sizes must be > 0");

    DenseNet net;
    net.layer_sizes = layer_sizes;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double stddev = std::sqrt(2.0 / fan_in);
        std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& v : w) v = stddev * rng.normal();
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return net;
}

namespace {

// Four-accumulator dot product: fixed summation order, wide enough for the
// compiler to vectorize without licensing FP reassociation globally.
inline double dot(const double* a, const double* b, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) s0 += a[k] * b[k];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

const std::vector<double>& forward_scratch(const DenseNet& net,
                                           const std::vector<double>& features,
                                           NetScratch& scratch) {
    if (static_cast<int>(features.size()) != net.input_dim())
        throw std::invalid_argument("forward: feature length does not match input size");
    scratch.acts.resize(net.num_layers() + 1);
    scratch.acts[0] = features;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const int in = net.layer_sizes[l];
        const int out = net.layer_sizes[l + 1];
        const bool hidden = l + 1 < net.num_layers();
        const std::vector<double>& x = scratch.acts[l];
        std::vector<double>& z = scratch.acts[l + 1];
        z.resize(static_cast<std::size_t>(out));
        for (int j = 0; j < out; ++j) {
            const double* row = net.weights[l].data() + static_cast<std::size_t>(j) * in;
            const double v = net.biases[l][static_cast<std::size_t>(j)] + dot(row, x.data(), in);
            z[static_cast<std::size_t>(j)] = hidden ? std::max(v, 0.0) : v;
        }
    }
    return scratch.acts.back();
}

std::vector<double> forward(const DenseNet& net, const std::vector<double>& features) {
    NetScratch scratch;
    return forward_scratch(net, features, scratch);
}

NetGradients zero_gradients(const DenseNet& net) {
    NetGradients g;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        g.weights.emplace_back(net.weights[l].size(), 0.0);
        g.biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
}

namespace {

double l2_penalty(const DenseNet& net, double l2) {
    if (l2 == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& w : net.weights)
        for (double v : w) sum += v * v;
    return l2 * sum;
}

}  // namespace

double td_loss(const DenseNet& net, const TdBatch& batch, double l2) {
    if (batch.size() == 0) throw std::invalid_argument("td_loss: empty batch");
    NetScratch scratch;
    double mse = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const std::vector<double>& q = forward_scratch(net, batch.features[i], scratch);
        const double err = q[static_cast<std::size_t>(batch.actions[i])] - batch.targets[i];
        mse += err * err;
    }
    return mse / static_cast<double>(batch.size()) + l2_penalty(net, l2);
}

double td_loss_and_gradient(const DenseNet& net, const TdBatch& batch, double l2,
                            NetGradients& grads, NetScratch& scratch) {
    if (batch.size() == 0) throw std::invalid_argument("td_loss: empty batch");
    for (auto& g : grads.weights) std::fill(g.begin(), g.end(), 0.0);
    for (auto& g : grads.biases) std::fill(g.begin(), g.end(), 0.0);

    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    double mse = 0.0;
    const std::size_t layers = net.num_layers();
    std::vector<double>& delta = scratch.delta;
    std::vector<double>& prev = scratch.prev_delta;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const std::vector<double>& out = forward_scratch(net, batch.features[i], scratch);
        const int a = batch.actions[i];
        const double err = out[static_cast<std::size_t>(a)] - batch.targets[i];
        mse += err * err;

        // Output delta: only the chosen action's unit carries error.
        delta.assign(out.size(), 0.0);
        delta[static_cast<std::size_t>(a)] = 2.0 * err * inv_batch;

        for (std::size_t l = layers; l-- > 0;) {
            const int in = net.layer_sizes[l];
            const int outn = net.layer_sizes[l + 1];
            const std::vector<double>& x = scratch.acts[l];
            for (int j = 0; j < outn; ++j) {
                const double d = delta[static_cast<std::size_t>(j)];
                if (d == 0.0) continue;
                grads.biases[l][static_cast<std::size_t>(j)] += d;
                double* grow = grads.weights[l].data() + static_cast<std::size_t>(j) * in;
                for (int k = 0; k < in; ++k) grow[k] += d * x[static_cast<std::size_t>(k)];
            }
            if (l == 0) break;
            prev.assign(static_cast<std::size_t>(in), 0.0);
            for (int j = 0; j < outn; ++j) {
                const double d = delta[static_cast<std::size_t>(j)];
                if (d == 0.0) continue;
                const double* row = net.weights[l].data() + static_cast<std::size_t>(j) * in;
                for (int k = 0; k < in; ++k) prev[static_cast<std::size_t>(k)] += d * row[k];
            }
            // Rectifier gate of layer l's output (= acts[l]).
            for (int k = 0; k < in; ++k)
                if (x[static_cast<std::size_t>(k)] <= 0.0) prev[static_cast<std::size_t>(k)] = 0.0;
            delta.swap(prev);
        }
    }

    if (l2 != 0.0) {
        for (std::size_t l = 0; l < layers; ++l)
            for (std::size_t k = 0; k < net.weights[l].size(); ++k)
                grads.weights[l][k] += 2.0 * l2 * net.weights[l][k];
    }
    return mse * inv_batch + l2_penalty(net, l2);
}

double td_loss_and_gradient(const DenseNet& net, const TdBatch& batch, double l2,
                            NetGradients& grads) {
    NetScratch scratch;
    return td_loss_and_gradient(net, batch, l2, grads, scratch);
}

AdamState make_adam_state(const DenseNet& net) {
    AdamState s;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        s.m_w.emplace_back(net.weights[l].size(), 0.0);
        s.v_w.emplace_back(net.weights[l].size(), 0.0);
        s.m_b.emplace_back(net.biases[l].size(), 0.0);
        s.v_b.emplace_back(net.biases[l].size(), 0.0);
    }
    return s;
}

void adam_step(DenseNet& net, const NetGradients& grads, AdamState& state,
               const AdamParams& p) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(state.step));
    auto update = [&](std::vector<double>& params, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            m[k] = p.beta1 * m[k] + (1.0 - p.beta1) * g[k];
            v[k] = p.beta2 * v[k] + (1.0 - p.beta2) * g[k] * g[k];
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            params[k] -= p.learning_rate * mhat / (std::sqrt(vhat) + p.epsilon);
        }
    };
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        update(net.weights[l], grads.weights[l], state.m_w[l], state.v_w[l]);
        update(net.biases[l], grads.biases[l], state.m_b[l], state.v_b[l]);
    }
}

void apply_filter(std::vector<double>& q_values, const ActionMask& mask, double big) {
    if (q_values.size() != mask.allowed.size())
        throw std::invalid_argument("apply_filter: mask and Q-vector lengths differ");
    for (std::size_t i = 0; i < q_values.size(); ++i)
        if (mask.allowed[i] == 0) q_values[i] += big;
}

TargetPair make_target_pair(const std::vector<int>& layer_sizes, Rng& rng,
                            const AdamParams& params, long replace_period) {
    TargetPair pair;
    pair.prediction = init_dense(layer_sizes, rng);
    pair.target = pair.prediction;
    pair.opt = make_adam_state(pair.prediction);
    pair.opt_params = params;
    pair.replace_period = replace_period;
    return pair;
}

double td_train_step(TargetPair& pair, const TdBatch& batch, NetGradients& grads,
                     NetScratch& scratch) {
    const double loss =
        td_loss_and_gradient(pair.prediction, batch, pair.opt_params.l2, grads, scratch);
    if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "TD loss diverged: " << loss << " at optimizer step "
            << pair.opt.step + 1 << " (batch size " << batch.size() << ")";
        throw TrainingDiverged(msg.str());
    }
    adam_step(pair.prediction, grads, pair.opt, pair.opt_params);
    return loss;
}

double td_train_step(TargetPair& pair, const TdBatch& batch) {
    NetGradients grads = zero_gradients(pair.prediction);
    NetScratch scratch;
    return td_train_step(pair, batch, grads, scratch);
}

namespace {

void write_values(std::ostream& os, const std::vector<double>& v) {
    os << v.size();
    for (double x : v) os << ' ' << x;
    os << '\n';
}

std::vector<double> read_values(std::istream& is) {
    std::size_t n = 0;
    if (!(is >> n)) throw std::runtime_error("checkpoint: truncated value block");
    std::vector<double> v(n);
    for (double& x : v)
        if (!(is >> x)) throw std::runtime_error("checkpoint: truncated value block");
    return v;
}

}  // namespace

void save_net(std::ostream& os, const DenseNet& net, const AdamState& opt) {
    os << std::setprecision(17);
    os << "densenet 1\n";
    os << net.layer_sizes.size();
    for (int s : net.layer_sizes) os << ' ' << s;
    os << '\n';
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        write_values(os, net.weights[l]);
        write_values(os, net.biases[l]);
    }
    os << "adam " << opt.step << '\n';
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        write_values(os, opt.m_w[l]);
        write_values(os, opt.v_w[l]);
        write_values(os, opt.m_b[l]);
        write_values(os, opt.v_b[l]);
    }
}

void load_net(std::istream& is, DenseNet& net, AdamState& opt) {
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "densenet" || version != 1)
        throw std::runtime_error("checkpoint: bad net header");
    std::size_t n_sizes = 0;
    is >> n_sizes;
    net.layer_sizes.assign(n_sizes, 0);
    for (auto& s : net.layer_sizes)
        if (!(is >> s)) throw std::runtime_error("checkpoint: truncated layer sizes");
    net.weights.clear();
    net.biases.clear();
    for (std::size_t l = 0; l + 1 < n_sizes; ++l) {
        net.weights.push_back(read_values(is));
        net.biases.push_back(read_values(is));
    }
    if (!(is >> tag >> opt.step) || tag != "adam")
        throw std::runtime_error("checkpoint: bad optimizer header");
    opt.m_w.clear();
    opt.v_w.clear();
    opt.m_b.clear();
    opt.v_b.clear();
    for (std::size_t l = 0; l + 1 < n_sizes; ++l) {
        opt.m_w.push_back(read_values(is));
        opt.v_w.push_back(read_values(is));
        opt.m_b.push_back(read_values(is));
        opt.v_b.push_back(read_values(is));
    }
}

}  // namespace sagin
