#include "asv/metrics.hpp"

#include <cmath>
#include <numeric>

namespace asv {

std::vector<double> ptc_trace(const std::vector<int>& collections, int total) {
  if (total <= 0) throw MetricError("ptc_trace: total must be positive");
  std::vector<double> out(collections.size());
  long cum = 0;
  for (size_t t = 0; t < collections.size(); ++t) {
    cum += collections[t];
    out[t] = 100.0 * static_cast<double>(cum) / total;
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    k[d + radius] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += k[d + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

namespace {

inline int reflect(int i, int n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

// Separable smoothing: rows then columns.
void smooth(const std::vector<double>& in, std::vector<double>& out, int height, int width,
            const std::vector<double>& kernel, std::vector<double>& tmp) {
  int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  tmp.resize(in.size());
  out.resize(in.size());
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d)
        acc += kernel[d + radius] * in[i * width + reflect(j + d, width)];
      tmp[i * width + j] = acc;
    }
  for (int j = 0; j < width; ++j)
    for (int i = 0; i < height; ++i) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d)
        acc += kernel[d + radius] * tmp[reflect(i + d, height) * width + j];
      out[i * width + j] = acc;
    }
}

}  // namespace

double gaussian_mse(const std::vector<double>& truth, const std::vector<double>& belief,
                    int height, int width, double sigma) {
  size_t n = static_cast<size_t>(height) * width;
  if (truth.size() != n || belief.size() != n)
    throw MetricError("gaussian_mse: shape mismatch");
  auto kernel = gaussian_kernel(sigma);
  std::vector<double> a, b, tmp;
  smooth(truth, a, height, width, kernel, tmp);
  smooth(belief, b, height, width, kernel, tmp);
  double acc = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double d = a[k] - b[k];
    acc += d * d;
  }
  return acc / static_cast<double>(n);
}

double gaussian_mse(const std::vector<int>& truth, const std::vector<int>& belief, int height,
                    int width, double sigma) {
  std::vector<double> a(truth.begin(), truth.end());
  std::vector<double> b(belief.begin(), belief.end());
  return gaussian_mse(a, b, height, width, sigma);
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double ci95(const std::vector<double>& xs) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

}  // namespace asv
