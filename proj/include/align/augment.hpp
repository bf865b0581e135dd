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
#ifndef ALIGN_AUGMENT_HPP_
#define ALIGN_AUGMENT_HPP_

#include "align/matrix.hpp"
#include "align/rng.hpp"

namespace align::augment {

struct AugmentPolicy {
  bool tsa_enabled = true;
  double stretch_min = 1.5;  // stretch factors stay >= 1 so label feasibility survives
  double stretch_max = 5.0;

  bool white_noise_enabled = true;
  double white_noise_sd = 0.2;

  bool baseline_shift_enabled = true;
  double baseline_shift_sd = 0.05;

  bool smoothing_enabled = true;
  double gaussian_smooth_width = 2.0;

  bool time_masks_enabled = true;
  double max_mask_pct = 0.075;
  int num_masks = 20;

  int random_cut_max = 0;  // leading-frame drop, GRU-style; 0 disables

  void validate() const;
};

// Time-axis linear interpolation to length floor(r*T). Output row j samples
// the input at position j*(T-1)/(T'-1), so both endpoints are copied exactly
// and r=1 is the identity. Columns (channels) are preserved.
Matrix tsa_stretch(const Matrix& features, double r);

double sample_stretch(const AugmentPolicy& policy, Rng& rng);

// The training loader's TSA expansion: the unmodified input plus one
// stretched copy. Labels are never touched by any augmentation here, so the
// caller reuses the trial's label sequence for both.
std::vector<Matrix> expand_with_tsa(const Matrix& features, const AugmentPolicy& policy, Rng& rng);

Matrix add_white_noise(const Matrix& features, double sd, Rng& rng);

// One N(0, sd^2) offset per channel, constant over time.
Matrix add_baseline_shift(const Matrix& features, double sd, Rng& rng);

// Per-channel convolution with a normalized Gaussian kernel truncated at
// +-3*width, symmetric (edge-repeating) padding. width below 1e-3 is an
// error; the discrete kernel degenerates there.
Matrix gaussian_smooth(const Matrix& features, double width);

// n_masks contiguous spans, each of random length <= ceil(max_pct*T), zeroed.
// Spans may overlap.
Matrix random_time_masks(const Matrix& features, double max_pct, int n_masks, Rng& rng);

// Drops a uniform count in [0, max_cut] of leading frames, keeping at least
// two. Our reading of the recurrent baseline's "random temporal cuts".
Matrix random_leading_cut(const Matrix& features, int max_cut, Rng& rng);

}  // namespace align::augment

#endif  // ALIGN_AUGMENT_HPP_
