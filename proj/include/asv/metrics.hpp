#pragma once

#include <vector>

#include "asv/grid.hpp"

namespace asv {

struct MetricError : SimError {
  using SimError::SimError;
};

// PTC(t) = 100 * (cumulative collected through t) / total, one entry per step.
std::vector<double> ptc_trace(const std::vector<int>& collections, int total);

// Mean squared difference between the two fields after smoothing each with a
// truncated discrete Gaussian (radius 3*sigma, kernel sum 1, reflect-padded
// borders).  Inputs are row-major height x width.
double gaussian_mse(const std::vector<double>& truth, const std::vector<double>& belief,
                    int height, int width, double sigma = 1.0);

double gaussian_mse(const std::vector<int>& truth, const std::vector<int>& belief, int height,
                    int width, double sigma = 1.0);

// 1D kernel exposed for testing: symmetric, radius ceil(3*sigma), 2*radius+1
// taps summing to 1.
std::vector<double> gaussian_kernel(double sigma);

// 1.96 * sd / sqrt(n), sample standard deviation; 0 when n < 2.
double ci95(const std::vector<double>& xs);

double mean(const std::vector<double>& xs);

}  // namespace asv
