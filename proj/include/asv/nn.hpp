#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "asv/episode.hpp"
#include "asv/rng.hpp"

namespace asv::nn {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Trainable tensor with gradient and first/second moment buffers.
template <typename T>
struct Param {
  Mat<T> w, g, m, v;

  void init(int rows, int cols) {
    w.setZero(rows, cols);
    g.setZero(rows, cols);
    m.setZero(rows, cols);
    v.setZero(rows, cols);
  }
  long count() const { return w.size(); }
};

// He-normal fill, drawn in row-major order so the layout of the storage does
// not leak into the draw sequence.
template <typename T>
void he_init(Mat<T>& w, int fan_in, Rng& rng) {
  double sd = std::sqrt(2.0 / fan_in);
  for (int r = 0; r < w.rows(); ++r)
    for (int c = 0; c < w.cols(); ++c) w(r, c) = static_cast<T>(rng.normal(0.0, sd));
}

// 3x3, stride 1, zero-padded convolution over fixed spatial dims.  Activations
// travel in "wide" layout: (channels, batch*H*W), sample-major columns, which
// lets consecutive conv layers share it without reshuffling.
template <typename T>
struct Conv2d {
  int in_ch = 0, out_ch = 0, height = 0, width = 0;
  Param<T> W;  // (out_ch, in_ch*9)
  Param<T> B;  // (out_ch, 1)
  Mat<T> col;  // (in_ch*9, batch*H*W), cached for backward

  void init(int ic, int oc, int h, int w, Rng& rng) {
    in_ch = ic;
    out_ch = oc;
    height = h;
    width = w;
    W.init(oc, ic * 9);
    B.init(oc, 1);
    he_init(W.w, ic * 9, rng);
  }

  void im2col(const Mat<T>& x, Mat<T>& out) const {
    int hw = height * width;
    long cols = x.cols();
    out.resize(in_ch * 9, cols);
    long batch = cols / hw;
    for (long b = 0; b < batch; ++b)
      for (int c = 0; c < in_ch; ++c)
        for (int k = 0; k < 9; ++k) {
          int di = k / 3 - 1, dj = k % 3 - 1;
          int r = c * 9 + k;
          for (int i = 0; i < height; ++i) {
            int si = i + di;
            long dst = b * hw + static_cast<long>(i) * width;
            if (si < 0 || si >= height) {
              for (int j = 0; j < width; ++j) out(r, dst + j) = T(0);
              continue;
            }
            long src = b * hw + static_cast<long>(si) * width;
            for (int j = 0; j < width; ++j) {
              int sj = j + dj;
              out(r, dst + j) = (sj < 0 || sj >= width) ? T(0) : x(c, src + sj);
            }
          }
        }
  }

  Mat<T> forward(const Mat<T>& x, bool cache) {
    Mat<T> local;
    Mat<T>& c = cache ? col : local;
    im2col(x, c);
    Mat<T> y;
    y.noalias() = W.w * c;
    y.colwise() += B.w.col(0);
    return y;
  }

  // Returns dX; accumulates into W.g / B.g.
  Mat<T> backward(const Mat<T>& dy) {
    W.g.noalias() += dy * col.transpose();
    B.g.col(0) += dy.rowwise().sum();
    Mat<T> dcol;
    dcol.noalias() = W.w.transpose() * dy;
    int hw = height * width;
    Mat<T> dx = Mat<T>::Zero(in_ch, dy.cols());
    long batch = dy.cols() / hw;
    for (long b = 0; b < batch; ++b)
      for (int c = 0; c < in_ch; ++c)
        for (int k = 0; k < 9; ++k) {
          int di = k / 3 - 1, dj = k % 3 - 1;
          int r = c * 9 + k;
          for (int i = 0; i < height; ++i) {
            int si = i + di;
            if (si < 0 || si >= height) continue;
            long src = b * hw + static_cast<long>(i) * width;
            long dst = b * hw + static_cast<long>(si) * width;
            for (int j = 0; j < width; ++j) {
              int sj = j + dj;
              if (sj >= 0 && sj < width) dx(c, dst + sj) += dcol(r, src + j);
            }
          }
        }
    return dx;
  }
};

template <typename T>
struct Linear {
  Param<T> W;  // (out, in)
  Param<T> B;  // (out, 1)
  Mat<T> x;    // cached input (in, batch)

  void init(int in, int out, Rng& rng) {
    W.init(out, in);
    B.init(out, 1);
    he_init(W.w, in, rng);
  }

  Mat<T> forward(const Mat<T>& in, bool cache) {
    if (cache) x = in;
    Mat<T> y;
    y.noalias() = W.w * in;
    y.colwise() += B.w.col(0);
    return y;
  }

  Mat<T> backward(const Mat<T>& dy) {
    W.g.noalias() += dy * x.transpose();
    B.g.col(0) += dy.rowwise().sum();
    Mat<T> dx;
    dx.noalias() = W.w.transpose() * dy;
    return dx;
  }
};

// In-place rectifier; remembers its output to gate the backward pass.
template <typename T>
struct Relu {
  Mat<T> y;

  Mat<T> forward(Mat<T> in, bool cache) {
    in = in.cwiseMax(T(0));
    if (cache) y = in;
    return in;
  }
  Mat<T> backward(const Mat<T>& dy) {
    return ((y.array() > T(0)).template cast<T>() * dy.array()).matrix();
  }
};

struct NetConfig {
  int height = 24;
  int width = 18;
  int in_ch = 6;
  int conv1 = 8, conv2 = 16, conv3 = 16;
  int fc1 = 128, fc2 = 64, fc3 = 64;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Dueling Q-network: three conv layers, three fully connected layers, then
// value and advantage heads combined as Q = V + A - mean(A).
template <typename T>
struct QNetwork {
  NetConfig cfg;
  Conv2d<T> conv1, conv2, conv3;
  Relu<T> r1, r2, r3, r4, r5, r6;
  Linear<T> fc1, fc2, fc3, val, adv;
  long adam_t = 0;

  // backward-pass caches
  Mat<T> feat, dual_in;

  void init(const NetConfig& c, Rng& rng) {
    cfg = c;
    conv1.init(c.in_ch, c.conv1, c.height, c.width, rng);
    conv2.init(c.conv1, c.conv2, c.height, c.width, rng);
    conv3.init(c.conv2, c.conv3, c.height, c.width, rng);
    fc1.init(c.conv3 * c.height * c.width, c.fc1, rng);
    fc2.init(c.fc1, c.fc2, rng);
    fc3.init(c.fc2, c.fc3, rng);
    val.init(c.fc3, 1, rng);
    adv.init(c.fc3, kNumActions, rng);
    adam_t = 0;
  }

  template <typename Fn>
  void for_each_param(Fn&& fn) {
    for (auto* p : {&conv1.W, &conv1.B, &conv2.W, &conv2.B, &conv3.W, &conv3.B, &fc1.W, &fc1.B,
                    &fc2.W, &fc2.B, &fc3.W, &fc3.B, &val.W, &val.B, &adv.W, &adv.B})
      fn(*p);
  }

  long param_count() {
    long n = 0;
    for_each_param([&](Param<T>& p) { n += p.count(); });
    return n;
  }

  // Input: (in_ch*H*W, batch), channel-major within a column.  Output: (8, batch).
  Mat<T> forward(const Mat<T>& input, bool cache = true) {
    int hw = cfg.height * cfg.width;
    long batch = input.cols();

    Mat<T> wide(cfg.in_ch, batch * hw);
    for (long b = 0; b < batch; ++b)
      for (int c = 0; c < cfg.in_ch; ++c)
        for (int p = 0; p < hw; ++p) wide(c, b * hw + p) = input(static_cast<long>(c) * hw + p, b);

    wide = r1.forward(conv1.forward(wide, cache), cache);
    wide = r2.forward(conv2.forward(wide, cache), cache);
    wide = r3.forward(conv3.forward(wide, cache), cache);

    Mat<T> flat(static_cast<long>(cfg.conv3) * hw, batch);
    for (long b = 0; b < batch; ++b)
      for (int c = 0; c < cfg.conv3; ++c)
        for (int p = 0; p < hw; ++p) flat(static_cast<long>(c) * hw + p, b) = wide(c, b * hw + p);

    Mat<T> h = r4.forward(fc1.forward(flat, cache), cache);
    h = r5.forward(fc2.forward(h, cache), cache);
    h = r6.forward(fc3.forward(h, cache), cache);
    if (cache) dual_in = h;

    Mat<T> v = val.forward(h, cache);   // (1, batch)
    Mat<T> a = adv.forward(h, cache);   // (8, batch)
    Mat<T> q = a;
    for (long b = 0; b < batch; ++b) {
      T m = a.col(b).mean();
      q.col(b).array() += v(0, b) - m;
    }
    return q;
  }

  // dQ: (8, batch).  Accumulates parameter gradients for the last cached
  // forward pass.
  void backward(const Mat<T>& dQ) {
    long batch = dQ.cols();
    Mat<T> dV(1, batch);
    Mat<T> dA = dQ;
    for (long b = 0; b < batch; ++b) {
      T s = dQ.col(b).sum();
      dV(0, b) = s;
      dA.col(b).array() -= s / T(kNumActions);
    }
    Mat<T> dh = val.backward(dV) + adv.backward(dA);
    dh = fc3.backward(r6.backward(dh));
    dh = fc2.backward(r5.backward(dh));
    Mat<T> dflat = fc1.backward(r4.backward(dh));

    int hw = cfg.height * cfg.width;
    Mat<T> dwide(cfg.conv3, batch * hw);
    for (long b = 0; b < batch; ++b)
      for (int c = 0; c < cfg.conv3; ++c)
        for (int p = 0; p < hw; ++p)
          dwide(c, b * hw + p) = dflat(static_cast<long>(c) * hw + p, b);

    dwide = conv3.backward(r3.backward(dwide));
    dwide = conv2.backward(r2.backward(dwide));
    conv1.backward(r1.backward(dwide));
  }

  void zero_grad() {
    for_each_param([](Param<T>& p) { p.g.setZero(); });
  }

  void adam_step(const AdamConfig& a) {
    ++adam_t;
    T c1 = T(1) / static_cast<T>(1.0 - std::pow(a.beta1, adam_t));
    T c2 = T(1) / static_cast<T>(1.0 - std::pow(a.beta2, adam_t));
    for_each_param([&](Param<T>& p) {
      p.m = T(a.beta1) * p.m + T(1 - a.beta1) * p.g;
      p.v = T(a.beta2) * p.v + T(1 - a.beta2) * p.g.cwiseProduct(p.g);
      p.w.array() -=
          T(a.lr) * (p.m.array() * c1) / ((p.v.array() * c2).sqrt() + T(a.eps));
    });
  }

  void copy_weights_from(QNetwork& other) {
    std::vector<Mat<T>*> mine, theirs;
    for_each_param([&](Param<T>& p) { mine.push_back(&p.w); });
    other.for_each_param([&](Param<T>& p) { theirs.push_back(&p.w); });
    for (size_t k = 0; k < mine.size(); ++k) *mine[k] = *theirs[k];
  }

  // Flat parameter access in a fixed order (row-major within each tensor);
  // used by the finite-difference check and the checkpoint writer.
  std::vector<T> get_params() {
    std::vector<T> out;
    out.reserve(param_count());
    for_each_param([&](Param<T>& p) {
      for (int r = 0; r < p.w.rows(); ++r)
        for (int c = 0; c < p.w.cols(); ++c) out.push_back(p.w(r, c));
    });
    return out;
  }

  void set_params(const std::vector<T>& flat) {
    size_t k = 0;
    for_each_param([&](Param<T>& p) {
      for (int r = 0; r < p.w.rows(); ++r)
        for (int c = 0; c < p.w.cols(); ++c) p.w(r, c) = flat[k++];
    });
  }

  std::vector<T> get_grads() {
    std::vector<T> out;
    out.reserve(param_count());
    for_each_param([&](Param<T>& p) {
      for (int r = 0; r < p.g.rows(); ++r)
        for (int c = 0; c < p.g.cols(); ++c) out.push_back(p.g(r, c));
    });
    return out;
  }
};

template <typename T>
int masked_argmax(const Mat<T>& q, long col, ActionMask mask) {
  int best = -1;
  T best_v = -std::numeric_limits<T>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    if (!mask.legal[a]) continue;
    if (best < 0 || q(a, col) > best_v) {
      best = a;
      best_v = q(a, col);
    }
  }
  return best;
}

// Q-row with illegal entries pushed to -inf.
template <typename T>
std::array<T, kNumActions> masked_q(const Mat<T>& q, long col, ActionMask mask) {
  std::array<T, kNumActions> out;
  for (int a = 0; a < kNumActions; ++a)
    out[a] = mask.legal[a] ? q(a, col) : -std::numeric_limits<T>::infinity();
  return out;
}

// One sample of the double-Q backup: the online row picks the successor
// action, the target row evaluates it; terminal samples use the bare reward.
template <typename T>
std::pair<T, int> double_q_target(const std::array<T, kNumActions>& q_online_next,
                                  const std::array<T, kNumActions>& q_target_next,
                                  ActionMask next_mask, T reward, bool done, T gamma) {
  if (done || !next_mask.any()) return {reward, -1};
  int best = 0;
  T best_v = -std::numeric_limits<T>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    if (!next_mask.legal[a]) continue;
    if (q_online_next[a] > best_v) {
      best_v = q_online_next[a];
      best = a;
    }
  }
  return {reward + gamma * q_target_next[best], best};
}

}  // namespace asv::nn
