#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "asv/nn.hpp"

using namespace asv;
using nn::Mat;
using nn::NetConfig;
using nn::QNetwork;

namespace {

const NetConfig kToy{8, 8, 6, 4, 4, 4, 16, 12, 8};

QNetwork<double> toy_net(uint64_t seed, int index = 0) {
  QNetwork<double> net;
  Rng rng = Rng::stream(seed, "init", index);
  net.init(kToy, rng);
  return net;
}

Mat<double> random_input(const NetConfig& cfg, int batch, uint64_t seed) {
  Mat<double> x(cfg.in_ch * cfg.height * cfg.width, batch);
  Rng rng(seed);
  for (long c = 0; c < x.cols(); ++c)
    for (long r = 0; r < x.rows(); ++r) x(r, c) = rng.uniform();
  return x;
}

using Field = std::vector<std::vector<double>>;  // [channel][i*W+j]

// plain quadruple-loop 3x3 convolution with zero padding
template <typename ConvT>
Field conv_naive(const ConvT& layer, const Field& x, int h, int w) {
  Field out(layer.out_ch, std::vector<double>(h * w, 0.0));
  for (int oc = 0; oc < layer.out_ch; ++oc)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        double acc = layer.B.w(oc, 0);
        for (int ic = 0; ic < layer.in_ch; ++ic)
          for (int k = 0; k < 9; ++k) {
            int si = i + k / 3 - 1, sj = j + k % 3 - 1;
            if (si < 0 || si >= h || sj < 0 || sj >= w) continue;
            acc += layer.W.w(oc, ic * 9 + k) * x[ic][si * w + sj];
          }
        out[oc][i * w + j] = acc;
      }
  return out;
}

void relu_field(Field& f) {
  for (auto& ch : f)
    for (double& v : ch) v = std::max(v, 0.0);
}

template <typename LinT>
std::vector<double> linear_naive(const LinT& layer, const std::vector<double>& in, bool relu) {
  std::vector<double> out(layer.W.w.rows());
  for (long r = 0; r < layer.W.w.rows(); ++r) {
    double acc = layer.B.w(r, 0);
    for (long c = 0; c < layer.W.w.cols(); ++c) acc += layer.W.w(r, c) * in[c];
    out[r] = relu ? std::max(acc, 0.0) : acc;
  }
  return out;
}

// the whole network by hand, one sample at a time
std::array<double, 8> forward_naive(QNetwork<double>& net, const Mat<double>& input, long col) {
  const NetConfig& c = net.cfg;
  int hw = c.height * c.width;
  Field x(c.in_ch, std::vector<double>(hw));
  for (int ch = 0; ch < c.in_ch; ++ch)
    for (int p = 0; p < hw; ++p) x[ch][p] = input(static_cast<long>(ch) * hw + p, col);

  Field y = conv_naive(net.conv1, x, c.height, c.width);
  relu_field(y);
  y = conv_naive(net.conv2, y, c.height, c.width);
  relu_field(y);
  y = conv_naive(net.conv3, y, c.height, c.width);
  relu_field(y);

  std::vector<double> flat(static_cast<size_t>(c.conv3) * hw);
  for (int ch = 0; ch < c.conv3; ++ch)
    for (int p = 0; p < hw; ++p) flat[static_cast<size_t>(ch) * hw + p] = y[ch][p];

  std::vector<double> h = linear_naive(net.fc1, flat, true);
  h = linear_naive(net.fc2, h, true);
  h = linear_naive(net.fc3, h, true);
  double v = linear_naive(net.val, h, false)[0];
  std::vector<double> a = linear_naive(net.adv, h, false);
  double m = 0.0;
  for (double av : a) m += av;
  m /= kNumActions;
  std::array<double, 8> q{};
  for (int k = 0; k < kNumActions; ++k) q[k] = v + a[k] - m;
  return q;
}

ActionMask mask_of(std::initializer_list<int> legal) {
  ActionMask m;
  for (int a : legal) m.legal[a] = true;
  return m;
}

}  // namespace

TEST_CASE("the fast forward agrees with a naive re-evaluation") {
  QNetwork<double> net = toy_net(5);
  Mat<double> x = random_input(kToy, 3, 42);
  Mat<double> q = net.forward(x, false);
  REQUIRE(q.rows() == 8);
  REQUIRE(q.cols() == 3);
  for (long b = 0; b < 3; ++b) {
    std::array<double, 8> want = forward_naive(net, x, b);
    for (int a = 0; a < 8; ++a) CHECK(q(a, b) == doctest::Approx(want[a]).epsilon(1e-9));
  }
}

TEST_CASE("single-sample and batched forwards agree") {
  QNetwork<double> net = toy_net(6);
  Mat<double> x = random_input(kToy, 5, 43);
  Mat<double> all = net.forward(x, false);
  Mat<double> one = net.forward(x.col(2), false);
  for (int a = 0; a < 8; ++a) CHECK(one(a, 0) == doctest::Approx(all(a, 2)).epsilon(1e-12));
}

TEST_CASE("a uniform advantage shift cancels out of the duel") {
  QNetwork<double> net = toy_net(7);
  Mat<double> x = random_input(kToy, 2, 44);
  Mat<double> before = net.forward(x, false);
  net.adv.B.w.array() += 0.37;
  Mat<double> after = net.forward(x, false);
  for (long b = 0; b < 2; ++b)
    for (int a = 0; a < 8; ++a) CHECK(after(a, b) == doctest::Approx(before(a, b)).epsilon(1e-9));

  net.val.B.w(0, 0) += 1.25;  // the value head shifts every entry as one
  Mat<double> shifted = net.forward(x, false);
  for (long b = 0; b < 2; ++b)
    for (int a = 0; a < 8; ++a)
      CHECK(shifted(a, b) - before(a, b) == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("seeded initialization is reproducible and stream-dependent") {
  QNetwork<double> a = toy_net(9);
  QNetwork<double> b = toy_net(9);
  QNetwork<double> c = toy_net(9, 1);
  CHECK(a.get_params() == b.get_params());
  CHECK(a.get_params() != c.get_params());
  // 216+4 + 144+4 + 144+4 + 4096+16 + 192+12 + 96+8 + 8+1 + 64+8
  CHECK(a.param_count() == 5017);
}

TEST_CASE("flat parameter access round-trips") {
  QNetwork<double> net = toy_net(10);
  std::vector<double> p = net.get_params();
  REQUIRE(p.size() == size_t(net.param_count()));
  std::vector<double> q = p;
  for (double& v : q) v += 0.01;
  net.set_params(q);
  CHECK(net.get_params() == q);
  net.set_params(p);
  CHECK(net.get_params() == p);
}

TEST_CASE("weight copies mirror the source") {
  QNetwork<double> a = toy_net(11);
  QNetwork<double> b = toy_net(12);
  REQUIRE(a.get_params() != b.get_params());
  b.copy_weights_from(a);
  CHECK(a.get_params() == b.get_params());
}

TEST_CASE("a zeroed network ranks its actions by mask order") {
  QNetwork<double> net = toy_net(13);
  net.set_params(std::vector<double>(net.param_count(), 0.0));
  Mat<double> q = net.forward(random_input(kToy, 1, 45), false);
  for (int a = 0; a < 8; ++a) CHECK(q(a, 0) == doctest::Approx(0.0));
  CHECK(nn::masked_argmax(q, 0, mask_of({2, 5})) == 2);
  CHECK(nn::masked_argmax(q, 0, mask_of({7})) == 7);
  CHECK(nn::masked_argmax(q, 0, ActionMask{}) == -1);
}

TEST_CASE("masking floors illegal actions at minus infinity") {
  Mat<double> q(8, 1);
  for (int a = 0; a < 8; ++a) q(a, 0) = a;
  std::array<double, 8> row = nn::masked_q(q, 0, mask_of({1, 4}));
  CHECK(row[1] == 1.0);
  CHECK(row[4] == 4.0);
  for (int a : {0, 2, 3, 5, 6, 7}) CHECK(row[a] == -std::numeric_limits<double>::infinity());
  CHECK(nn::masked_argmax(q, 0, mask_of({1, 4})) == 4);
  // ties resolve to the lowest legal index
  q(1, 0) = 4.0;
  CHECK(nn::masked_argmax(q, 0, mask_of({1, 4})) == 1);
}

TEST_CASE("the double backup selects online and evaluates target") {
  std::array<double, 8> online{};
  std::array<double, 8> target{};
  online[0] = 100.0;  // illegal, must be ignored
  online[1] = 1.0;
  online[6] = 3.0;
  target[1] = 5.0;
  target[6] = 7.0;
  ActionMask mask = mask_of({1, 6});

  auto [y, chosen] = nn::double_q_target(online, target, mask, 1.0, false, 0.5);
  CHECK(y == doctest::Approx(4.5));
  CHECK(chosen == 6);

  auto [y0, c0] = nn::double_q_target(online, target, mask, 1.0, false, 0.0);
  CHECK(y0 == doctest::Approx(1.0));
  CHECK(c0 == 6);

  auto [yd, cd] = nn::double_q_target(online, target, mask, 1.0, true, 0.5);
  CHECK(yd == doctest::Approx(1.0));
  CHECK(cd == -1);

  auto [yb, cb] = nn::double_q_target(online, target, ActionMask{}, -2.0, false, 0.5);
  CHECK(yb == doctest::Approx(-2.0));
  CHECK(cb == -1);
}

TEST_CASE("backpropagation matches finite differences") {
  QNetwork<double> net = toy_net(21);
  const int batch = 3;
  Mat<double> x = random_input(kToy, batch, 46);

  std::array<int, 3> acts{2, 5, 0};
  std::array<double, 3> targets{0.3, -0.2, 0.9};
  std::array<double, 3> weights{1.2, 0.6, 0.9};

  auto loss_of = [&](bool cache) {
    Mat<double> q = net.forward(x, cache);
    double loss = 0.0;
    for (int b = 0; b < batch; ++b) {
      double d = q(acts[b], b) - targets[b];
      loss += weights[b] * d * d;
    }
    return loss / batch;
  };

  // analytic pass
  net.zero_grad();
  Mat<double> q = net.forward(x, true);
  Mat<double> dQ = Mat<double>::Zero(8, batch);
  for (int b = 0; b < batch; ++b)
    dQ(acts[b], b) = 2.0 * weights[b] * (q(acts[b], b) - targets[b]) / batch;
  net.backward(dQ);
  std::vector<double> ga = net.get_grads();

  // probe every tensor (first, middle, last) plus a coarse sweep
  std::vector<long> sizes;
  net.for_each_param([&](nn::Param<double>& p) { sizes.push_back(p.count()); });
  std::vector<size_t> picks;
  size_t off = 0;
  for (long s : sizes) {
    picks.push_back(off);
    picks.push_back(off + s / 2);
    picks.push_back(off + s - 1);
    off += s;
  }
  for (size_t k = 0; k < ga.size(); k += 97) picks.push_back(k);

  std::vector<double> flat = net.get_params();
  const double h = 1e-5;
  int worst_count = 0;
  for (size_t k : picks) {
    double keep = flat[k];
    flat[k] = keep + h;
    net.set_params(flat);
    double lp = loss_of(false);
    flat[k] = keep - h;
    net.set_params(flat);
    double lm = loss_of(false);
    flat[k] = keep;
    net.set_params(flat);
    double gn = (lp - lm) / (2.0 * h);
    double rel = std::abs(ga[k] - gn) / std::max(std::abs(ga[k]) + std::abs(gn), 1e-6);
    if (rel >= 1e-4) ++worst_count;
    CHECK(rel < 1e-4);
  }
  CHECK(worst_count == 0);
}

TEST_CASE("repeated backward calls accumulate gradients") {
  QNetwork<double> net = toy_net(22);
  Mat<double> x = random_input(kToy, 2, 47);
  Mat<double> dQ = Mat<double>::Ones(8, 2);

  net.zero_grad();
  net.forward(x, true);
  net.backward(dQ);
  std::vector<double> once = net.get_grads();

  net.forward(x, true);
  net.backward(dQ);
  std::vector<double> twice = net.get_grads();
  for (size_t k = 0; k < once.size(); k += 53)
    CHECK(twice[k] == doctest::Approx(2.0 * once[k]).epsilon(1e-9));

  net.zero_grad();
  for (double g : net.get_grads()) REQUIRE(g == 0.0);
}

TEST_CASE("one moment update follows the closed form") {
  QNetwork<double> net = toy_net(23);
  net.zero_grad();
  net.conv1.B.g(0, 0) = 4.0;
  double before0 = net.conv1.B.w(0, 0);
  double before1 = net.conv1.B.w(1, 0);
  net.adam_step({});
  // at t = 1 the bias corrections cancel: step = lr * g / (|g| + eps)
  CHECK(net.conv1.B.w(0, 0) == doctest::Approx(before0 - 1e-4 * 4.0 / (4.0 + 1e-8)).epsilon(1e-12));
  CHECK(net.conv1.B.w(1, 0) == before1);
  CHECK(net.adam_t == 1);
}

TEST_CASE("gradient descent drives a Q-value to its target") {
  QNetwork<double> net = toy_net(24);
  Mat<double> x = random_input(kToy, 1, 48);
  const double want = 4.5;
  const int act = 3;
  nn::AdamConfig adam;
  adam.lr = 1e-2;

  auto value = [&](bool cache) { return net.forward(x, cache)(act, 0); };
  double initial = (value(false) - want) * (value(false) - want);
  double last = initial;
  for (int t = 0; t < 800; ++t) {
    net.zero_grad();
    double q = value(true);
    Mat<double> dQ = Mat<double>::Zero(8, 1);
    dQ(act, 0) = 2.0 * (q - want);
    net.backward(dQ);
    net.adam_step(adam);
    last = (value(false) - want) * (value(false) - want);
  }
  CHECK(last < 1e-6);
  CHECK(last < initial / 100.0);
}
