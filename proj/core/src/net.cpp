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

#include "gaborlens/net.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gaborlens/error.hpp"
#include "gaborlens/parallel.hpp"
#include "gaborlens/rng.hpp"

namespace gaborlens {
namespace {

int ceil_log2_int(int v) {
  int k = 0;
  while ((1 << k) < v) ++k;
  return k;
}

int pow2_dim(int exponent, const char* what, int j, int n_exponent) {
  if (exponent < 0) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "%s collapses below one sample at j=%d, N=%d "
                  "(2^%d); this level/length pair has no valid geometry",
                  what, j, n_exponent, exponent);
    throw SpecError(msg);
  }
  return 1 << exponent;
}

int positive_dim(int value, const char* what, int j, int n_exponent) {
  if (value < 1) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "%s collapses below one sample at j=%d, N=%d (%d); "
                  "this level/length pair has no valid geometry",
                  what, j, n_exponent, value);
    throw SpecError(msg);
  }
  return value;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

const char* to_string(Architecture a) {
  switch (a) {
    case Architecture::kConv1dLstm: return "conv1d_lstm";
    case Architecture::kConv1d2dLstm: return "conv1d2d_lstm";
  }
  return "unknown";
}

const char* to_string(Optimizer o) {
  switch (o) {
    case Optimizer::kSgdMomentum: return "sgd_momentum";
    case Optimizer::kAdam: return "adam";
  }
  return "unknown";
}

double default_learning_rate(Optimizer o) {
  return o == Optimizer::kSgdMomentum ? 0.1 : 1e-3;
}

NetworkSpec make_spec(Architecture architecture, int j, int n_exponent) {
  const int n = n_exponent;
  if (n < 3 || n > 20) throw PreconditionError("n_exponent must be in [3, 20]");
  if (j < 1 || j > n - 1) throw PreconditionError("scale level j must be in [1, N-1]");

  NetworkSpec s;
  s.architecture = architecture;
  s.j = j;
  s.n_exponent = n;
  s.input_h = 1 << (j + 1);
  s.input_w = 1 << (n - j + 1);
  s.conv1.n_filters = 64;
  s.conv2.n_filters = 32;

  const int lg = ceil_log2_int(j);
  if (j <= 5) {
    // Wide inputs: layers slide along the translation axis, whose size
    // depends on N, so the filter/stride widths scale with N as well.
    s.conv1.filter_h = 1;
    s.conv1.filter_w = pow2_dim(n - 4 - j, "conv1d filter width", j, n);
    s.conv1.stride_h = 1;
    s.conv1.stride_w = pow2_dim(n - 5 - j, "conv1d stride width", j, n);
    s.conv2.filter_h = lg + 1;
    s.conv2.filter_w = pow2_dim(n - 5 - j, "conv2d filter width", j, n);
    s.conv2.stride_h = std::max(1, lg);
    s.conv2.stride_w = pow2_dim(n - 6 - j, "conv2d stride width", j, n);
  } else {
    // Tall inputs: layers slide along the frequency axis of size 2^(j+1),
    // which is independent of N.
    s.conv1.filter_h = pow2_dim(j - 4, "conv1d filter height", j, n);
    s.conv1.filter_w = 1;
    s.conv1.stride_h = pow2_dim(j - 5, "conv1d stride height", j, n);
    s.conv1.stride_w = 1;
    s.conv2.filter_h = pow2_dim(j - 5, "conv2d filter height", j, n);
    s.conv2.filter_w = positive_dim(7 - lg, "conv2d filter width", j, n);
    s.conv2.stride_h = pow2_dim(j - 6, "conv2d stride height", j, n);
    s.conv2.stride_w = positive_dim(6 - lg, "conv2d stride width", j, n);
  }
  return finalize_spec(s);
}

NetworkSpec finalize_spec(NetworkSpec s) {
  if (s.input_h < 1 || s.input_w < 1)
    throw SpecError("network input must have positive dimensions");
  if (s.lstm_units < 1) throw SpecError("lstm_units must be positive");
  if (s.n_classes < 2) throw SpecError("need at least two classes");

  auto complete = [&](ConvGeom g, int ic, int ih, int iw,
                      const char* name) -> ConvGeom {
    g.in_channels = ic;
    g.in_h = ih;
    g.in_w = iw;
    char msg[160];
    if (g.n_filters < 1 || g.filter_h < 1 || g.filter_w < 1 ||
        g.stride_h < 1 || g.stride_w < 1) {
      std::snprintf(msg, sizeof(msg),
                    "%s layer has a non-positive dimension at j=%d, N=%d",
                    name, s.j, s.n_exponent);
      throw SpecError(msg);
    }
    if (g.filter_h > ih || g.filter_w > iw) {
      std::snprintf(msg, sizeof(msg),
                    "%s filter %dx%d exceeds its %dx%d input at j=%d, N=%d",
                    name, g.filter_h, g.filter_w, ih, iw, s.j, s.n_exponent);
      throw SpecError(msg);
    }
    g.out_h = (ih - g.filter_h) / g.stride_h + 1;
    g.out_w = (iw - g.filter_w) / g.stride_w + 1;
    return g;
  };

  s.conv1 = complete(s.conv1, 1, s.input_h, s.input_w, "conv1d");
  int tip_c = s.conv1.n_filters, tip_h = s.conv1.out_h, tip_w = s.conv1.out_w;
  if (s.architecture == Architecture::kConv1d2dLstm) {
    s.conv2 = complete(s.conv2, tip_c, tip_h, tip_w, "conv2d");
    tip_c = s.conv2.n_filters;
    tip_h = s.conv2.out_h;
    tip_w = s.conv2.out_w;
  } else {
    s.conv2 = ConvGeom{};
  }
  s.seq_len = tip_w;
  s.feature_dim = tip_c * tip_h;
  return s;
}

Tensor tensor_from_features(const FeatureMatrix& m) {
  Tensor t(1, static_cast<int>(m.values.rows()),
           static_cast<int>(m.values.cols()));
  for (int r = 0; r < t.h; ++r)
    for (int q = 0; q < t.w; ++q) t.at(0, r, q) = m.values(r, q);
  return t;
}

std::vector<ParamBlock> param_blocks(ModelWeights& w) {
  std::vector<ParamBlock> blocks;
  blocks.push_back({"conv1_kernels", &w.conv1.kernels});
  blocks.push_back({"conv1_bias", &w.conv1.bias});
  if (w.spec.architecture == Architecture::kConv1d2dLstm) {
    blocks.push_back({"conv2_kernels", &w.conv2.kernels});
    blocks.push_back({"conv2_bias", &w.conv2.bias});
  }
  blocks.push_back({"lstm_w_in", &w.lstm.w_in});
  blocks.push_back({"lstm_w_rec", &w.lstm.w_rec});
  blocks.push_back({"lstm_bias", &w.lstm.bias});
  blocks.push_back({"dense_weight", &w.dense.weight});
  blocks.push_back({"dense_bias", &w.dense.bias});
  return blocks;
}

namespace {

void alloc_conv(ConvLayer& layer, const ConvGeom& g) {
  layer.geom = g;
  layer.kernels.assign(static_cast<std::size_t>(g.n_filters) * g.in_channels *
                           g.filter_h * g.filter_w,
                       0.0);
  layer.bias.assign(static_cast<std::size_t>(g.n_filters), 0.0);
}

ModelWeights alloc_weights(const NetworkSpec& spec) {
  ModelWeights w;
  w.spec = spec;
  alloc_conv(w.conv1, spec.conv1);
  if (spec.architecture == Architecture::kConv1d2dLstm)
    alloc_conv(w.conv2, spec.conv2);
  w.lstm.input_dim = spec.feature_dim;
  w.lstm.units = spec.lstm_units;
  const std::size_t u = static_cast<std::size_t>(spec.lstm_units);
  w.lstm.w_in.assign(4 * u * spec.feature_dim, 0.0);
  w.lstm.w_rec.assign(4 * u * u, 0.0);
  w.lstm.bias.assign(4 * u, 0.0);
  w.dense.in = spec.lstm_units;
  w.dense.out = spec.n_classes;
  w.dense.weight.assign(static_cast<std::size_t>(spec.n_classes) * u, 0.0);
  w.dense.bias.assign(static_cast<std::size_t>(spec.n_classes), 0.0);
  return w;
}

void fill_uniform(std::vector<double>& v, double limit, Rng& rng) {
  for (double& x : v) x = rng.uniform(-limit, limit);
}

}  // namespace

ModelWeights init_weights(const NetworkSpec& spec_in, std::uint64_t seed) {
  const NetworkSpec spec = finalize_spec(spec_in);
  ModelWeights w = alloc_weights(spec);
  Rng rng(derive_seed(seed, 0x1717));

  auto he_limit = [](int fan_in) { return std::sqrt(6.0 / fan_in); };
  fill_uniform(w.conv1.kernels,
               he_limit(spec.conv1.in_channels * spec.conv1.filter_h *
                        spec.conv1.filter_w),
               rng);
  if (spec.architecture == Architecture::kConv1d2dLstm) {
    fill_uniform(w.conv2.kernels,
                 he_limit(spec.conv2.in_channels * spec.conv2.filter_h *
                          spec.conv2.filter_w),
                 rng);
  }
  fill_uniform(w.lstm.w_in, 1.0 / std::sqrt(double(spec.feature_dim)), rng);
  fill_uniform(w.lstm.w_rec, 1.0 / std::sqrt(double(spec.lstm_units)), rng);
  // Forget gate opens at one so early cells keep their state.
  std::fill(w.lstm.bias.begin() + spec.lstm_units,
            w.lstm.bias.begin() + 2 * spec.lstm_units, 1.0);
  fill_uniform(w.dense.weight, he_limit(spec.lstm_units), rng);
  return w;
}

Tensor conv_forward(const Tensor& in, const ConvLayer& layer, Tensor* pre) {
  const ConvGeom& g = layer.geom;
  if (in.c != g.in_channels || in.h != g.in_h || in.w != g.in_w)
    throw PreconditionError("conv input does not match the layer geometry");
  const std::size_t ksz = static_cast<std::size_t>(g.n_filters) *
                          g.in_channels * g.filter_h * g.filter_w;
  if (layer.kernels.size() != ksz ||
      layer.bias.size() != static_cast<std::size_t>(g.n_filters))
    throw PreconditionError("conv layer weights are not allocated");

  Tensor out(g.n_filters, g.out_h, g.out_w);
  Tensor prebuf(g.n_filters, g.out_h, g.out_w);
  const int per_filter = g.in_channels * g.filter_h * g.filter_w;
  for (int f = 0; f < g.n_filters; ++f) {
    const double* kf = layer.kernels.data() +
                       static_cast<std::size_t>(f) * per_filter;
    for (int oh = 0; oh < g.out_h; ++oh) {
      for (int ow = 0; ow < g.out_w; ++ow) {
        double acc = layer.bias[f];
        const int h0 = oh * g.stride_h, w0 = ow * g.stride_w;
        const double* k = kf;
        for (int ci = 0; ci < g.in_channels; ++ci) {
          for (int kh = 0; kh < g.filter_h; ++kh) {
            const double* row = &in.v[(static_cast<std::size_t>(ci) * in.h +
                                       (h0 + kh)) * in.w + w0];
            for (int kw = 0; kw < g.filter_w; ++kw) acc += k[kw] * row[kw];
            k += g.filter_w;
          }
        }
        prebuf.at(f, oh, ow) = acc;
        out.at(f, oh, ow) = acc > 0.0 ? acc : 0.0;
      }
    }
  }
  if (pre) *pre = std::move(prebuf);
  return out;
}

Tensor conv_backward(const Tensor& in, const ConvLayer& layer,
                     const Tensor& pre, const Tensor& grad_out,
                     ConvLayer* grads) {
  const ConvGeom& g = layer.geom;
  if (grad_out.c != g.n_filters || grad_out.h != g.out_h ||
      grad_out.w != g.out_w || pre.c != g.n_filters)
    throw PreconditionError("conv gradient does not match the layer geometry");
  if (grads && grads->kernels.size() != layer.kernels.size())
    alloc_conv(*grads, g);

  Tensor din(g.in_channels, g.in_h, g.in_w);
  const int per_filter = g.in_channels * g.filter_h * g.filter_w;
  for (int f = 0; f < g.n_filters; ++f) {
    const double* kf = layer.kernels.data() +
                       static_cast<std::size_t>(f) * per_filter;
    double* gkf = grads ? grads->kernels.data() +
                              static_cast<std::size_t>(f) * per_filter
                        : nullptr;
    for (int oh = 0; oh < g.out_h; ++oh) {
      for (int ow = 0; ow < g.out_w; ++ow) {
        // ReLU passes gradient only where the pre-activation is positive;
        // the kink at zero takes the zero-side derivative.
        if (!(pre.at(f, oh, ow) > 0.0)) continue;
        const double gp = grad_out.at(f, oh, ow);
        if (gp == 0.0) continue;
        if (grads) grads->bias[f] += gp;
        const int h0 = oh * g.stride_h, w0 = ow * g.stride_w;
        const double* k = kf;
        double* gk = gkf;
        for (int ci = 0; ci < g.in_channels; ++ci) {
          for (int kh = 0; kh < g.filter_h; ++kh) {
            const std::size_t base =
                (static_cast<std::size_t>(ci) * in.h + (h0 + kh)) * in.w + w0;
            const double* row = &in.v[base];
            double* drow = &din.v[base];
            for (int kw = 0; kw < g.filter_w; ++kw) {
              if (gk) gk[kw] += gp * row[kw];
              drow[kw] += gp * k[kw];
            }
            k += g.filter_w;
            if (gk) gk += g.filter_w;
          }
        }
      }
    }
  }
  return din;
}

Tensor to_sequence(const Tensor& t) {
  Tensor seq(1, t.w, t.c * t.h);
  for (int ci = 0; ci < t.c; ++ci)
    for (int r = 0; r < t.h; ++r)
      for (int q = 0; q < t.w; ++q)
        seq.at(0, q, ci * t.h + r) = t.at(ci, r, q);
  return seq;
}

Tensor from_sequence_grad(const Tensor& dseq, int c, int h, int w) {
  if (dseq.c != 1 || dseq.h != w || dseq.w != c * h)
    throw PreconditionError("sequence gradient does not match the map shape");
  Tensor out(c, h, w);
  for (int ci = 0; ci < c; ++ci)
    for (int r = 0; r < h; ++r)
      for (int q = 0; q < w; ++q)
        out.at(ci, r, q) = dseq.at(0, q, ci * h + r);
  return out;
}

std::vector<double> lstm_forward(const Tensor& seq, const LstmLayer& layer,
                                 LstmCache* cache) {
  const int steps = seq.h, feat = layer.input_dim, units = layer.units;
  if (seq.c != 1 || seq.w != feat)
    throw PreconditionError("sequence does not match the recurrent layer");
  if (steps < 1) throw PreconditionError("empty sequence");

  std::vector<double> h(units, 0.0), c(units, 0.0), pre(4 * units);
  if (cache) {
    cache->steps = steps;
    auto sized = [&](std::vector<std::vector<double>>& v) {
      v.assign(steps, std::vector<double>(units, 0.0));
    };
    sized(cache->gate_i);
    sized(cache->gate_f);
    sized(cache->gate_g);
    sized(cache->gate_o);
    sized(cache->cell);
    sized(cache->tanh_cell);
    sized(cache->hidden);
  }

  for (int t = 0; t < steps; ++t) {
    const double* x = &seq.v[static_cast<std::size_t>(t) * feat];
    for (int r = 0; r < 4 * units; ++r) {
      double acc = layer.bias[r];
      const double* wi = &layer.w_in[static_cast<std::size_t>(r) * feat];
      for (int q = 0; q < feat; ++q) acc += wi[q] * x[q];
      const double* wr = &layer.w_rec[static_cast<std::size_t>(r) * units];
      for (int q = 0; q < units; ++q) acc += wr[q] * h[q];
      pre[r] = acc;
    }
    for (int u = 0; u < units; ++u) {
      const double gi = sigmoid(pre[u]);
      const double gf = sigmoid(pre[units + u]);
      const double gg = std::tanh(pre[2 * units + u]);
      const double go = sigmoid(pre[3 * units + u]);
      c[u] = gf * c[u] + gi * gg;
      const double tc = std::tanh(c[u]);
      h[u] = go * tc;
      if (cache) {
        cache->gate_i[t][u] = gi;
        cache->gate_f[t][u] = gf;
        cache->gate_g[t][u] = gg;
        cache->gate_o[t][u] = go;
        cache->cell[t][u] = c[u];
        cache->tanh_cell[t][u] = tc;
        cache->hidden[t][u] = h[u];
      }
    }
  }
  return h;
}

void lstm_backward(const Tensor& seq, const LstmLayer& layer,
                   const LstmCache& cache, const std::vector<double>& dh_last,
                   LstmLayer* grads, Tensor* dseq) {
  const int steps = cache.steps, feat = layer.input_dim, units = layer.units;
  if (static_cast<int>(dh_last.size()) != units)
    throw PreconditionError("hidden-state gradient has the wrong size");
  if (seq.h != steps || seq.w != feat)
    throw PreconditionError("sequence does not match the recurrent cache");
  if (grads) {
    grads->input_dim = feat;
    grads->units = units;
    if (grads->w_in.size() != layer.w_in.size()) {
      grads->w_in.assign(layer.w_in.size(), 0.0);
      grads->w_rec.assign(layer.w_rec.size(), 0.0);
      grads->bias.assign(layer.bias.size(), 0.0);
    }
  }
  if (dseq) *dseq = Tensor(1, steps, feat);

  std::vector<double> dh = dh_last, dc(units, 0.0), dpre(4 * units),
      dh_next(units);
  for (int t = steps - 1; t >= 0; --t) {
    for (int u = 0; u < units; ++u) {
      const double tc = cache.tanh_cell[t][u];
      const double go = cache.gate_o[t][u];
      const double gi = cache.gate_i[t][u];
      const double gf = cache.gate_f[t][u];
      const double gg = cache.gate_g[t][u];
      const double cprev = t > 0 ? cache.cell[t - 1][u] : 0.0;
      const double dct = dc[u] + dh[u] * go * (1.0 - tc * tc);
      dpre[u] = dct * gg * gi * (1.0 - gi);
      dpre[units + u] = dct * cprev * gf * (1.0 - gf);
      dpre[2 * units + u] = dct * gi * (1.0 - gg * gg);
      dpre[3 * units + u] = dh[u] * tc * go * (1.0 - go);
      dc[u] = dct * gf;
    }
    const double* x = &seq.v[static_cast<std::size_t>(t) * feat];
    const double* hprev = t > 0 ? cache.hidden[t - 1].data() : nullptr;
    double* dx = dseq ? &dseq->v[static_cast<std::size_t>(t) * feat] : nullptr;
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int r = 0; r < 4 * units; ++r) {
      const double gp = dpre[r];
      const double* wi = &layer.w_in[static_cast<std::size_t>(r) * feat];
      const double* wr = &layer.w_rec[static_cast<std::size_t>(r) * units];
      if (grads) {
        grads->bias[r] += gp;
        double* gwi = &grads->w_in[static_cast<std::size_t>(r) * feat];
        for (int q = 0; q < feat; ++q) gwi[q] += gp * x[q];
        if (hprev) {
          double* gwr = &grads->w_rec[static_cast<std::size_t>(r) * units];
          for (int q = 0; q < units; ++q) gwr[q] += gp * hprev[q];
        }
      }
      if (dx)
        for (int q = 0; q < feat; ++q) dx[q] += wi[q] * gp;
      for (int q = 0; q < units; ++q) dh_next[q] += wr[q] * gp;
    }
    dh = dh_next;
  }
}

double dense_softmax_xent(const std::vector<double>& h,
                          const DenseLayer& layer, int label,
                          std::vector<double>* probs, DenseLayer* grads,
                          std::vector<double>* dh) {
  const int in = layer.in, out = layer.out;
  if (static_cast<int>(h.size()) != in)
    throw PreconditionError("dense input has the wrong size");
  if (label < 0 || label >= out)
    throw PreconditionError("label outside the class range");

  std::vector<double> logits(out);
  for (int o = 0; o < out; ++o) {
    double acc = layer.bias[o];
    const double* w = &layer.weight[static_cast<std::size_t>(o) * in];
    for (int q = 0; q < in; ++q) acc += w[q] * h[q];
    logits[o] = acc;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> p(out);
  for (int o = 0; o < out; ++o) {
    p[o] = std::exp(logits[o] - top);
    sum += p[o];
  }
  for (int o = 0; o < out; ++o) p[o] /= sum;
  // Log-domain loss avoids underflow when one logit dominates.
  const double loss = -(logits[label] - top - std::log(sum));

  if (grads || dh) {
    if (grads) {
      grads->in = in;
      grads->out = out;
      if (grads->weight.size() != layer.weight.size()) {
        grads->weight.assign(layer.weight.size(), 0.0);
        grads->bias.assign(layer.bias.size(), 0.0);
      }
    }
    if (dh) dh->assign(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = p[o] - (o == label ? 1.0 : 0.0);
      const double* w = &layer.weight[static_cast<std::size_t>(o) * in];
      if (grads) {
        grads->bias[o] += d;
        double* gw = &grads->weight[static_cast<std::size_t>(o) * in];
        for (int q = 0; q < in; ++q) gw[q] += d * h[q];
      }
      if (dh)
        for (int q = 0; q < in; ++q) (*dh)[q] += d * w[q];
    }
  }
  if (probs) *probs = std::move(p);
  return loss;
}

namespace {

struct ForwardCache {
  Tensor pre1, out1, pre2, out2, seq;
  LstmCache lstm;
  std::vector<double> h_last;
};

double model_forward(const ModelWeights& w, const Tensor& x, int label,
                     ForwardCache* cache, std::vector<double>* probs) {
  ForwardCache local;
  ForwardCache& k = cache ? *cache : local;
  const bool two_d = w.spec.architecture == Architecture::kConv1d2dLstm;
  k.out1 = conv_forward(x, w.conv1, &k.pre1);
  const Tensor* tip = &k.out1;
  if (two_d) {
    k.out2 = conv_forward(k.out1, w.conv2, &k.pre2);
    tip = &k.out2;
  }
  k.seq = to_sequence(*tip);
  k.h_last = lstm_forward(k.seq, w.lstm, cache ? &k.lstm : nullptr);
  return dense_softmax_xent(k.h_last, w.dense, label, probs, nullptr, nullptr);
}

void model_backward(const ModelWeights& w, const Tensor& x, int label,
                    ForwardCache& k, ModelWeights& grads) {
  const bool two_d = w.spec.architecture == Architecture::kConv1d2dLstm;
  std::vector<double> dh;
  dense_softmax_xent(k.h_last, w.dense, label, nullptr, &grads.dense, &dh);
  Tensor dseq;
  lstm_backward(k.seq, w.lstm, k.lstm, dh, &grads.lstm, &dseq);
  const Tensor* tip = two_d ? &k.out2 : &k.out1;
  Tensor dtip = from_sequence_grad(dseq, tip->c, tip->h, tip->w);
  if (two_d) {
    Tensor dout1 = conv_backward(k.out1, w.conv2, k.pre2, dtip, &grads.conv2);
    conv_backward(x, w.conv1, k.pre1, dout1, &grads.conv1);
  } else {
    conv_backward(x, w.conv1, k.pre1, dtip, &grads.conv1);
  }
}

ModelWeights zeros_like(const ModelWeights& w) {
  return alloc_weights(w.spec);
}

void check_same_shape(ModelWeights& a, ModelWeights& b, const char* what) {
  auto ba = param_blocks(a), bb = param_blocks(b);
  bool ok = ba.size() == bb.size();
  for (std::size_t i = 0; ok && i < ba.size(); ++i)
    ok = ba[i].data->size() == bb[i].data->size();
  if (!ok) {
    char msg[96];
    std::snprintf(msg, sizeof(msg), "%s do not match the network shape", what);
    throw PreconditionError(msg);
  }
}

void optimizer_step(ModelWeights& w, ModelWeights& grads, OptState& st,
                    const TrainConfig& cfg, double lr) {
  auto wb = param_blocks(w);
  auto gb = param_blocks(grads);
  st.step += 1;
  if (cfg.optimizer == Optimizer::kSgdMomentum) {
    for (std::size_t b = 0; b < wb.size(); ++b) {
      std::vector<double>& v = st.slot1[b];
      std::vector<double>& g = *gb[b].data;
      std::vector<double>& p = *wb[b].data;
      for (std::size_t i = 0; i < p.size(); ++i) {
        v[i] = cfg.momentum * v[i] - lr * g[i];
        p[i] += v[i];
      }
    }
    return;
  }
  const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  const double bc1 = 1.0 - std::pow(b1, double(st.step));
  const double bc2 = 1.0 - std::pow(b2, double(st.step));
  for (std::size_t b = 0; b < wb.size(); ++b) {
    std::vector<double>& m = st.slot1[b];
    std::vector<double>& v = st.slot2[b];
    std::vector<double>& g = *gb[b].data;
    std::vector<double>& p = *wb[b].data;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      // Epsilon sits outside the square root.
      p[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
    }
  }
}

int argmax_index(const std::vector<double>& p) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(p.size()); ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace

TrainOutput train(const Dataset& data, const NetworkSpec& spec_in,
                  const TrainConfig& cfg, const ModelWeights* init,
                  const OptState* opt_init) {
  const NetworkSpec spec = finalize_spec(spec_in);
  if (data.empty()) throw PreconditionError("empty training set");
  if (cfg.batch_size < 1) throw PreconditionError("batch_size must be positive");
  if (cfg.max_epochs < 0) throw PreconditionError("max_epochs must be >= 0");
  const double lr = cfg.learning_rate > 0.0 ? cfg.learning_rate
                                            : default_learning_rate(cfg.optimizer);

  const std::size_t n = data.size();
  std::vector<Tensor> xs;
  xs.reserve(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FeatureMatrix& m = data[i].input;
    if (m.values.rows() != spec.input_h || m.values.cols() != spec.input_w)
      throw PreconditionError("training example does not match the input shape");
    const int lab = static_cast<int>(data[i].label);
    if (lab < 0 || lab >= spec.n_classes)
      throw PreconditionError("training label outside the class range");
    xs.push_back(tensor_from_features(m));
    labels[i] = lab;
  }

  TrainOutput out;
  out.weights = init ? *init : init_weights(spec, cfg.seed);
  out.weights.spec = spec;
  {
    ModelWeights shape = alloc_weights(spec);
    check_same_shape(out.weights, shape, "initial weights");
  }
  auto blocks = param_blocks(out.weights);
  out.opt.step = 0;
  out.opt.slot1.resize(blocks.size());
  out.opt.slot2.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    out.opt.slot1[b].assign(blocks[b].data->size(), 0.0);
    out.opt.slot2[b].assign(blocks[b].data->size(), 0.0);
  }
  if (opt_init) {
    bool ok = opt_init->slot1.size() == blocks.size() &&
              opt_init->slot2.size() == blocks.size();
    for (std::size_t b = 0; ok && b < blocks.size(); ++b)
      ok = opt_init->slot1[b].size() == blocks[b].data->size() &&
           opt_init->slot2[b].size() == blocks[b].data->size();
    if (!ok)
      throw PreconditionError("optimizer state does not match the network shape");
    out.opt = *opt_init;
  }

  const int threads = std::max(1, cfg.threads);
  std::vector<std::size_t> order(n);
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(cfg.seed, 0x501f, epoch));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t bn =
          std::min(static_cast<std::size_t>(cfg.batch_size), n - start);
      ModelWeights grads = zeros_like(out.weights);
      const int chunks =
          static_cast<int>(std::min<std::size_t>(threads, bn));
      std::vector<ModelWeights> part(chunks);
      std::vector<double> part_loss(chunks, 0.0);
      std::vector<std::size_t> part_correct(chunks, 0);
      parallel_for(chunks, threads, [&](int ci) {
        part[ci] = zeros_like(out.weights);
        const std::size_t lo = start + bn * ci / chunks;
        const std::size_t hi = start + bn * (ci + 1) / chunks;
        ForwardCache cache;
        std::vector<double> probs;
        for (std::size_t s = lo; s < hi; ++s) {
          const std::size_t idx = order[s];
          part_loss[ci] += model_forward(out.weights, xs[idx], labels[idx],
                                         &cache, &probs);
          if (argmax_index(probs) == labels[idx]) ++part_correct[ci];
          model_backward(out.weights, xs[idx], labels[idx], cache, part[ci]);
        }
      });
      // Merge in chunk order so results do not depend on scheduling.
      auto gblocks = param_blocks(grads);
      for (int ci = 0; ci < chunks; ++ci) {
        auto pblocks = param_blocks(part[ci]);
        for (std::size_t b = 0; b < gblocks.size(); ++b) {
          const std::vector<double>& src = *pblocks[b].data;
          std::vector<double>& dst = *gblocks[b].data;
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
        loss_sum += part_loss[ci];
        correct += part_correct[ci];
      }
      const double inv = 1.0 / static_cast<double>(bn);
      for (auto& blk : gblocks)
        for (double& v : *blk.data) v *= inv;
      optimizer_step(out.weights, grads, out.opt, cfg, lr);
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    out.history.push_back({epoch, loss_sum / static_cast<double>(n),
                           100.0 * static_cast<double>(correct) /
                               static_cast<double>(n),
                           wall_ms});
  }
  return out;
}

ClassLabel predict(const ModelWeights& w, const FeatureMatrix& input,
                   std::array<double, kNumClasses>* probs) {
  if (input.values.rows() != w.spec.input_h ||
      input.values.cols() != w.spec.input_w)
    throw PreconditionError("input does not match the network input shape");
  const Tensor x = tensor_from_features(input);
  std::vector<double> p;
  model_forward(w, x, 0, nullptr, &p);
  if (probs) {
    probs->fill(0.0);
    for (std::size_t i = 0; i < p.size() && i < probs->size(); ++i)
      (*probs)[i] = p[i];
  }
  return static_cast<ClassLabel>(argmax_index(p));
}

GradCheckReport grad_check(const NetworkSpec& spec_in, std::uint64_t seed,
                           double corrupt_amount) {
  const NetworkSpec spec = finalize_spec(spec_in);
  ModelWeights w = init_weights(spec, seed);
  Rng rng(derive_seed(seed, 0x6d1f));
  Tensor x(1, spec.input_h, spec.input_w);
  for (double& v : x.v) v = rng.uniform(-1.0, 1.0);
  const int label = static_cast<int>(rng.uniform_index(
      static_cast<std::size_t>(spec.n_classes)));

  ModelWeights grads = zeros_like(w);
  ForwardCache cache;
  model_forward(w, x, label, &cache, nullptr);
  model_backward(w, x, label, cache, grads);
  if (corrupt_amount != 0.0) {
    auto gb = param_blocks(grads);
    for (auto& blk : gb)
      if (blk.name == "lstm_w_in" && !blk.data->empty()) {
        (*blk.data)[0] += corrupt_amount;
        break;
      }
  }

  const double step = 1e-5;
  GradCheckReport report;
  auto wb = param_blocks(w);
  auto gb = param_blocks(grads);
  for (std::size_t b = 0; b < wb.size(); ++b) {
    std::vector<double>& p = *wb[b].data;
    const std::vector<double>& g = *gb[b].data;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double orig = p[i];
      p[i] = orig + step;
      const double up = model_forward(w, x, label, nullptr, nullptr);
      p[i] = orig - step;
      const double down = model_forward(w, x, label, nullptr, nullptr);
      p[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double rel = std::abs(g[i] - numeric) /
                         std::max({std::abs(g[i]), std::abs(numeric), 1e-8});
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_block = wb[b].name;
        report.worst_index = i;
      }
    }
  }
  report.pass = report.max_rel_error <= 1e-4;
  return report;
}

}  // namespace gaborlens
