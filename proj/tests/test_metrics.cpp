#include <doctest.h>

#include <cmath>
#include <vector>

#include "asv/metrics.hpp"
#include "asv/rng.hpp"
#include "helpers.hpp"

using namespace asv;

namespace {

// reflect index into [0, n): -1 -> 0, n -> n-1
int reflect(int k, int n) {
  if (k < 0) return -k - 1;
  if (k >= n) return 2 * n - k - 1;
  return k;
}

// dense reference: smooth with the full normalized 2D kernel, then average
// the squared difference
double dense_mse(const std::vector<double>& a, const std::vector<double>& b, int h, int w,
                 double sigma) {
  int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k2((2 * r + 1) * (2 * r + 1));
  double sum = 0.0;
  for (int di = -r; di <= r; ++di)
    for (int dj = -r; dj <= r; ++dj) {
      double v = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
      k2[(di + r) * (2 * r + 1) + (dj + r)] = v;
      sum += v;
    }
  for (double& v : k2) v /= sum;

  auto smooth_at = [&](const std::vector<double>& f, int i, int j) {
    double acc = 0.0;
    for (int di = -r; di <= r; ++di)
      for (int dj = -r; dj <= r; ++dj)
        acc += k2[(di + r) * (2 * r + 1) + (dj + r)] *
               f[reflect(i + di, h) * w + reflect(j + dj, w)];
    return acc;
  };

  double err = 0.0;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double d = smooth_at(a, i, j) - smooth_at(b, i, j);
      err += d * d;
    }
  return err / (h * w);
}

}  // namespace

TEST_CASE("collection traces accumulate into percentages") {
  std::vector<double> t = ptc_trace({3, 0, 2}, 10);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(30.0));
  CHECK(t[1] == doctest::Approx(30.0));
  CHECK(t[2] == doctest::Approx(50.0));
  CHECK(ptc_trace({}, 5).empty());
  CHECK_THROWS_AS(ptc_trace({1}, 0), MetricError);
  CHECK_THROWS_AS(ptc_trace({1}, -3), MetricError);
}

TEST_CASE("a full cleanup reaches exactly one hundred") {
  std::vector<double> t = ptc_trace({2, 5, 0, 3}, 10);
  CHECK(t.back() == doctest::Approx(100.0));
}

TEST_CASE("the unit kernel has seven taps and unit mass") {
  std::vector<double> k = gaussian_kernel(1.0);
  REQUIRE(k.size() == 7);
  double sum = 0.0;
  for (double v : k) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) CHECK(k[i] == doctest::Approx(k[6 - i]).epsilon(1e-12));
  CHECK(k[3] > k[2]);
  CHECK(k[2] > k[1]);
  CHECK(k[1] > k[0]);
  CHECK(gaussian_kernel(0.5).size() == 5);  // radius ceil(1.5) = 2
}

TEST_CASE("a single spike scores its frozen value") {
  // One unit spike against an empty field on 9x9: the mean squared smoothed
  // difference is (sum of squared 2D kernel taps) / 81.
  std::vector<double> truth(81, 0.0), belief(81, 0.0);
  truth[4 * 9 + 4] = 1.0;
  double got = gaussian_mse(truth, belief, 9, 9);

  double g2 = 0.0;
  for (double v : gaussian_kernel(1.0)) g2 += v * v;
  CHECK(g2 == doctest::Approx(0.2822768).epsilon(1e-6));
  CHECK(got == doctest::Approx(g2 * g2 / 81.0).epsilon(1e-9));
  CHECK(got == doctest::Approx(9.837e-4).epsilon(1e-3));
}

TEST_CASE("identical fields have zero error") {
  Rng rng(3);
  std::vector<double> f(7 * 11);
  for (double& v : f) v = rng.uniform() * 5.0;
  CHECK(gaussian_mse(f, f, 7, 11) == doctest::Approx(0.0));
}

TEST_CASE("the separable pass matches a dense convolution") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int h = 5 + rng.uniform_int(10);
    int w = 5 + rng.uniform_int(10);
    double sigma = trial % 3 == 0 ? 1.0 : 0.5 + rng.uniform() * 1.5;
    std::vector<double> a(h * w), b(h * w);
    for (double& v : a) v = rng.uniform() * 4.0;
    for (double& v : b) v = rng.uniform() * 4.0;
    double got = gaussian_mse(a, b, h, w, sigma);
    double want = dense_mse(a, b, h, w, sigma);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("the count overload mirrors the real-valued one") {
  Rng rng(23);
  std::vector<int> a(6 * 8), b(6 * 8);
  for (int& v : a) v = rng.uniform_int(5);
  for (int& v : b) v = rng.uniform_int(5);
  std::vector<double> ad(a.begin(), a.end()), bd(b.begin(), b.end());
  CHECK(gaussian_mse(a, b, 6, 8) == doctest::Approx(gaussian_mse(ad, bd, 6, 8)).epsilon(1e-12));

  // doubling both fields scales the error by four
  std::vector<int> a2 = a, b2 = b;
  for (int& v : a2) v *= 2;
  for (int& v : b2) v *= 2;
  CHECK(gaussian_mse(a2, b2, 6, 8) == doctest::Approx(4.0 * gaussian_mse(a, b, 6, 8)).epsilon(1e-9));
}

TEST_CASE("smoothing is linear so the error ignores a common offset") {
  Rng rng(29);
  std::vector<double> a(9 * 9), b(9 * 9);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform();
  std::vector<double> a1 = a, b1 = b;
  for (double& v : a1) v += 2.5;
  for (double& v : b1) v += 2.5;
  CHECK(gaussian_mse(a1, b1, 9, 9) == doctest::Approx(gaussian_mse(a, b, 9, 9)).epsilon(1e-9));
}

TEST_CASE("mean and the confidence radius match hand values") {
  CHECK(mean({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
  CHECK(mean({}) == doctest::Approx(0.0));
  CHECK(ci95({1.0, 2.0, 3.0, 4.0}) ==
        doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
  CHECK(ci95({7.0}) == doctest::Approx(0.0));
  CHECK(ci95({}) == doctest::Approx(0.0));
  CHECK(ci95({4.2, 4.2, 4.2, 4.2}) == doctest::Approx(0.0));
}
