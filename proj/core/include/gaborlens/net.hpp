// Copyright 2026 The gaborlens authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GABORLENS_NET_HPP_
#define GABORLENS_NET_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaborlens/features.hpp"
#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

// Compact sequence classifiers over time-frequency feature images:
// a single-axis convolution (rows or columns as independent sequences),
// optionally a full 2D convolution, then an LSTM over the translation axis
// and a softmax head. All math is plain double-precision loops with
// hand-written reverse-mode gradients.

enum class Architecture : int { kConv1dLstm = 0, kConv1d2dLstm = 1 };

const char* to_string(Architecture a);

enum class Optimizer : int { kSgdMomentum = 0, kAdam = 1 };

const char* to_string(Optimizer o);

struct ConvGeom {
  int in_channels = 1;
  int in_h = 0, in_w = 0;
  int filter_h = 1, filter_w = 1;
  int stride_h = 1, stride_w = 1;
  int n_filters = 0;
  int out_h = 0, out_w = 0;  // valid convolution: (in - filter)/stride + 1
};

struct NetworkSpec {
  Architecture architecture = Architecture::kConv1dLstm;
  int j = 0, n_exponent = 0;
  int input_h = 0, input_w = 0;
  ConvGeom conv1;
  ConvGeom conv2;  // meaningful only for kConv1d2dLstm
  int seq_len = 0, feature_dim = 0;
  int lstm_units = 64;
  int n_classes = kNumClasses;
};

// Derives a spec for the 2^(j+1) x 2^(N-j+1) input at level j. Derived
// dimensions must come out >= 1 and filters must fit inside their inputs,
// otherwise a spec error names the offending layer. For j <= 5 the layers
// slide along the (N-dependent) translation axis, so those filter/stride
// width exponents scale with N; for j > 5 they slide along the frequency
// axis of size 2^(j+1), independent of N. Stride dimensions are clamped to
// a minimum of 1 (the derived height stride at j = 1 would otherwise be 0).
NetworkSpec make_spec(Architecture architecture, int j, int n_exponent);

// Validates and completes a hand-constructed spec (tests, custom models):
// fills out_h/out_w, seq_len and feature_dim from the given geometry.
NetworkSpec finalize_spec(NetworkSpec spec);

// Dense row-major (channels, height, width) value holder.
struct Tensor {
  int c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_),
        v(static_cast<std::size_t>(c_) * h_ * w_, 0.0) {}

  double& at(int ci, int hi, int wi) {
    return v[(static_cast<std::size_t>(ci) * h + hi) * w + wi];
  }
  double at(int ci, int hi, int wi) const {
    return v[(static_cast<std::size_t>(ci) * h + hi) * w + wi];
  }
  std::size_t size() const { return v.size(); }
};

Tensor tensor_from_features(const FeatureMatrix& m);  // 1 x rows x cols

struct ConvLayer {
  ConvGeom geom;
  std::vector<double> kernels;  // [filter][in_channel][kh][kw]
  std::vector<double> bias;     // [filter]
};

struct LstmLayer {
  int input_dim = 0, units = 0;
  // Gate blocks stacked in (input, forget, cell, output) order.
  std::vector<double> w_in;   // [4*units][input_dim]
  std::vector<double> w_rec;  // [4*units][units]
  std::vector<double> bias;   // [4*units]
};

struct DenseLayer {
  int in = 0, out = 0;
  std::vector<double> weight;  // [out][in]
  std::vector<double> bias;    // [out]
};

struct ModelWeights {
  NetworkSpec spec;
  ConvLayer conv1, conv2;
  LstmLayer lstm;
  DenseLayer dense;
};

// Parameter tensors in declaration order (the checkpoint layout order).
struct ParamBlock {
  std::string name;
  std::vector<double>* data = nullptr;
};
std::vector<ParamBlock> param_blocks(ModelWeights& w);

// Convolution biases start at zero; conv/dense kernels are He-uniform
// (limit sqrt(6/fan_in)); LSTM weights are uniform +-1/sqrt(fan_in) with
// the forget-gate bias block at +1.
ModelWeights init_weights(const NetworkSpec& spec, std::uint64_t seed);

// --- layer primitives (exposed for tests) -------------------------------

// Valid cross-correlation + bias + ReLU. pre, when given, receives the
// pre-activation values (needed for the backward pass).
Tensor conv_forward(const Tensor& in, const ConvLayer& layer,
                    Tensor* pre = nullptr);

// Gradient through conv_forward. grad_out is d(loss)/d(output); returns
// d(loss)/d(input) and accumulates kernel/bias gradients into grads.
Tensor conv_backward(const Tensor& in, const ConvLayer& layer,
                     const Tensor& pre, const Tensor& grad_out,
                     ConvLayer* grads);

// (channels, H, W) -> sequence of W steps with channels*H features each,
// channel-major, row-minor: feature index = channel*H + row.
Tensor to_sequence(const Tensor& t);  // returns (1, W, channels*H)
Tensor from_sequence_grad(const Tensor& dseq, int c, int h, int w);

struct LstmCache {
  int steps = 0;
  std::vector<std::vector<double>> gate_i, gate_f, gate_g, gate_o;
  std::vector<std::vector<double>> cell, tanh_cell, hidden;
};

// Processes seq (1, T, F); h_0 = c_0 = 0; returns the last hidden state.
std::vector<double> lstm_forward(const Tensor& seq, const LstmLayer& layer,
                                 LstmCache* cache = nullptr);

// Backpropagation through time from d(loss)/d(h_T). Accumulates weight
// gradients into grads and, when dseq is given, writes d(loss)/d(seq).
void lstm_backward(const Tensor& seq, const LstmLayer& layer,
                   const LstmCache& cache, const std::vector<double>& dh_last,
                   LstmLayer* grads, Tensor* dseq);

// Linear head + stable softmax + cross-entropy for one example. Returns
// the loss; fills probs. When grads/dh are given, accumulates the weight
// gradient (softmax - onehot convention) and input gradient.
double dense_softmax_xent(const std::vector<double>& h,
                          const DenseLayer& layer, int label,
                          std::vector<double>* probs, DenseLayer* grads,
                          std::vector<double>* dh);

// --- whole-model operations ----------------------------------------------

struct TrainExample {
  FeatureMatrix input;
  ClassLabel label = ClassLabel::kN;
};
using Dataset = std::vector<TrainExample>;

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.0;  // 0 = optimizer default (0.1 sgdm, 1e-3 adam)
  double momentum = 0.5;       // sgdm
  double adam_beta1 = 0.9, adam_beta2 = 0.999, adam_epsilon = 1e-8;
  int batch_size = 150;
  int max_epochs = 100;
  std::uint64_t seed = 0;
  int threads = 1;  // batch gradient accumulation chunks
};

double default_learning_rate(Optimizer o);

struct OptState {
  long step = 0;
  // Matches param_blocks order. slot1 = velocity (sgdm) / first moment
  // (adam); slot2 = second moment (adam, unused by sgdm).
  std::vector<std::vector<double>> slot1, slot2;
};

struct EpochStats {
  int epoch = 0;          // 1-based
  double loss = 0.0;      // mean per-example cross-entropy
  double train_accuracy = 0.0;  // percent
  double wall_ms = 0.0;
};

struct TrainOutput {
  ModelWeights weights;
  OptState opt;
  std::vector<EpochStats> history;
};

// Deterministic for a fixed (seed, dataset order, threads): per-epoch
// shuffles are seeded, gradients are averaged over the actual batch size,
// and thread-chunk partial gradients merge in chunk order. init/opt resume
// a previous training run when given.
TrainOutput train(const Dataset& data, const NetworkSpec& spec,
                  const TrainConfig& cfg, const ModelWeights* init = nullptr,
                  const OptState* opt_init = nullptr);

ClassLabel predict(const ModelWeights& w, const FeatureMatrix& input,
                   std::array<double, kNumClasses>* probs = nullptr);

// Central-difference verification (step 1e-5) of every parameter gradient
// on a seeded random input. corrupt_amount, when nonzero, is added to one
// analytic partial so tests can confirm the detector actually fires.
struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_block;
  std::size_t worst_index = 0;
  bool pass = false;  // max_rel_error <= 1e-4
};
GradCheckReport grad_check(const NetworkSpec& spec, std::uint64_t seed,
                           double corrupt_amount = 0.0);

}  // namespace gaborlens

#endif  // GABORLENS_NET_HPP_
