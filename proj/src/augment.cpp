/* Copyright 2026 The Align Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "align/augment.hpp"

#include <algorithm>
#include <cmath>

#include "align/errors.hpp"

namespace align::augment {

void AugmentPolicy::validate() const {
  if (stretch_min < 1.0) throw ConfigError("augment: stretch_min must be >= 1");
  if (stretch_min > stretch_max) throw ConfigError("augment: stretch_min > stretch_max");
  if (white_noise_sd < 0 || baseline_shift_sd < 0) throw ConfigError("augment: negative noise sd");
  if (max_mask_pct < 0 || max_mask_pct >= 1) throw ConfigError("augment: max_mask_pct must be in [0,1)");
  if (num_masks < 0) throw ConfigError("augment: num_masks must be >= 0");
  if (smoothing_enabled && gaussian_smooth_width < 1e-3)
    throw ConfigError("augment: gaussian_smooth_width below 1e-3");
  if (random_cut_max < 0) throw ConfigError("augment: random_cut_max must be >= 0");
}

Matrix tsa_stretch(const Matrix& features, double r) {
  const int t_in = features.rows();
  const int c = features.cols();
  if (t_in < 2) throw DataError("tsa_stretch: need at least 2 frames");
  if (r < 1.0) throw DataError("tsa_stretch: stretch factor must be >= 1");

  const int t_out = static_cast<int>(std::floor(r * t_in));
  Matrix out(t_out, c);
  const double scale = static_cast<double>(t_in - 1) / static_cast<double>(t_out - 1);
  for (int j = 0; j < t_out; ++j) {
    const double pos = j * scale;
    int i0 = static_cast<int>(std::floor(pos));
    if (i0 >= t_in - 1) i0 = t_in - 2;
    const double w = pos - i0;
    for (int k = 0; k < c; ++k) {
      out(j, k) = (1.0 - w) * features(i0, k) + w * features(i0 + 1, k);
    }
  }
  // exact endpoints, immune to rounding in the interpolation weights
  for (int k = 0; k < c; ++k) {
    out(0, k) = features(0, k);
    out(t_out - 1, k) = features(t_in - 1, k);
  }
  return out;
}

double sample_stretch(const AugmentPolicy& policy, Rng& rng) {
  return rng.uniform(policy.stretch_min, policy.stretch_max);
}

std::vector<Matrix> expand_with_tsa(const Matrix& features, const AugmentPolicy& policy, Rng& rng) {
  std::vector<Matrix> out;
  out.push_back(features);
  if (policy.tsa_enabled) {
    const double r = sample_stretch(policy, rng);
    out.push_back(tsa_stretch(features, r));
  }
  return out;
}

Matrix add_white_noise(const Matrix& features, double sd, Rng& rng) {
  if (sd < 0) throw DataError("add_white_noise: negative sd");
  Matrix out = features;
  if (sd == 0.0) return out;
  for (size_t i = 0; i < out.size(); ++i) out[i] += rng.normal(0.0, sd);
  return out;
}

Matrix add_baseline_shift(const Matrix& features, double sd, Rng& rng) {
  if (sd < 0) throw DataError("add_baseline_shift: negative sd");
  Matrix out = features;
  if (sd == 0.0) return out;
  std::vector<double> shift(out.cols());
  for (double& s : shift) s = rng.normal(0.0, sd);
  for (int t = 0; t < out.rows(); ++t)
    for (int k = 0; k < out.cols(); ++k) out(t, k) += shift[k];
  return out;
}

Matrix gaussian_smooth(const Matrix& features, double width) {
  if (width < 1e-3) throw DataError("gaussian_smooth: width below 1e-3");
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * width)));
  std::vector<double> kernel(2 * radius + 1);
  double mass = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i / width) * (i / width));
    mass += kernel[i + radius];
  }
  for (double& k : kernel) k /= mass;

  const int t_len = features.rows();
  Matrix out(t_len, features.cols());
  auto reflect = [t_len](int idx) {
    // symmetric padding with edge repetition: -1 -> 0, T -> T-1
    while (idx < 0 || idx >= t_len) {
      if (idx < 0) idx = -idx - 1;
      if (idx >= t_len) idx = 2 * t_len - idx - 1;
    }
    return idx;
  };
  for (int t = 0; t < t_len; ++t) {
    for (int k = 0; k < features.cols(); ++k) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * features(reflect(t + i), k);
      out(t, k) = acc;
    }
  }
  return out;
}

Matrix random_time_masks(const Matrix& features, double max_pct, int n_masks, Rng& rng) {
  if (max_pct < 0 || max_pct >= 1) throw DataError("random_time_masks: max_pct must be in [0,1)");
  Matrix out = features;
  const int t_len = out.rows();
  const int max_len = static_cast<int>(std::ceil(max_pct * t_len));
  for (int m = 0; m < n_masks; ++m) {
    const int len = rng.uniform_int_range(0, max_len);
    if (len == 0) continue;
    const int start = rng.uniform_int_range(0, t_len - len);
    for (int t = start; t < start + len; ++t)
      for (int k = 0; k < out.cols(); ++k) out(t, k) = 0.0;
  }
  return out;
}

Matrix random_leading_cut(const Matrix& features, int max_cut, Rng& rng) {
  if (max_cut < 0) throw DataError("random_leading_cut: negative max_cut");
  const int t_len = features.rows();
  int cut = rng.uniform_int_range(0, max_cut);
  cut = std::min(cut, std::max(0, t_len - 2));
  if (cut == 0) return features;
  Matrix out(t_len - cut, features.cols());
  for (int t = cut; t < t_len; ++t)
    for (int k = 0; k < features.cols(); ++k) out(t - cut, k) = features(t, k);
  return out;
}

}  // namespace align::augment
