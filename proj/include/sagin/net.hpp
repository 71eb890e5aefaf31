#pragma once

#include <iosfwd>
#include <vector>

#include "sagin/mdp.hpp"
#include "sagin/rng.hpp"

namespace sagin {

/// Raised when a training loss stops being finite.
struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Added to the Q-values of masked actions so an argmin can never land on
/// one. Must dominate any plausible |Q| spread.
constexpr double kFilterBig = 1e6;

/// Fully-connected net: affine layers with rectifier activations on hidden
/// layers and an identity output. Weights are row-major [out][in].
struct DenseNet {
    std::vector<int> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return layer_sizes.front(); }
    int output_dim() const { return layer_sizes.back(); }
    std::size_t num_layers() const { return weights.size(); }
};

/// Scaled-variance init: weights ~ N(0, 2/fan_in), biases zero.
DenseNet init_dense(const std::vector<int>& layer_sizes, Rng& rng);

std::vector<double> forward(const DenseNet& net, const std::vector<double>& features);

struct NetGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

NetGradients zero_gradients(const DenseNet& net);

/// Reusable forward/backward buffers; hot loops pass one in to avoid
/// per-sample allocation.
struct NetScratch {
    std::vector<std::vector<double>> acts;  // input + every layer output
    std::vector<double> delta;
    std::vector<double> prev_delta;
};

/// Forward pass through `scratch`; the returned reference points into it and
/// stays valid until the next call.
const std::vector<double>& forward_scratch(const DenseNet& net,
                                           const std::vector<double>& features,
                                           NetScratch& scratch);

/// Regression batch for the TD loss: per sample, only the chosen action's
/// output is pulled toward the precomputed target.
struct TdBatch {
    std::vector<std::vector<double>> features;
    std::vector<int> actions;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
};

/// Mean squared TD error plus l2 * sum of squared weights (biases exempt).
double td_loss(const DenseNet& net, const TdBatch& batch, double l2);

/// Same loss, also accumulating its gradient into `grads` (overwritten).
double td_loss_and_gradient(const DenseNet& net, const TdBatch& batch, double l2,
                            NetGradients& grads);
double td_loss_and_gradient(const DenseNet& net, const TdBatch& batch, double l2,
                            NetGradients& grads, NetScratch& scratch);

struct AdamParams {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double l2 = 1e-4;
};

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    long step = 0;
};

AdamState make_adam_state(const DenseNet& net);

void adam_step(DenseNet& net, const NetGradients& grads, AdamState& state,
               const AdamParams& params);

/// Filter layer: masked entries get kFilterBig added, allowed entries pass
/// through unchanged.
void apply_filter(std::vector<double>& q_values, const ActionMask& mask,
                  double big = kFilterBig);

/// Prediction net plus its frozen copy, replaced every replace_period
/// gradient steps.
struct TargetPair {
    DenseNet prediction;
    DenseNet target;
    AdamState opt;
    AdamParams opt_params;
    long replace_period = 200;

    void copy_into_target() { target = prediction; }
};

TargetPair make_target_pair(const std::vector<int>& layer_sizes, Rng& rng,
                            const AdamParams& params, long replace_period);

/// One gradient-descent step of the TD loss on the prediction net. Returns
/// the batch loss; throws TrainingDiverged if it is not finite.
double td_train_step(TargetPair& pair, const TdBatch& batch);
double td_train_step(TargetPair& pair, const TdBatch& batch, NetGradients& grads,
                     NetScratch& scratch);

/// Text checkpoint (17-significant-digit decimals, exact double round-trip).
void save_net(std::ostream& os, const DenseNet& net, const AdamState& opt);
void load_net(std::istream& is, DenseNet& net, AdamState& opt);

}  // namespace sagin
