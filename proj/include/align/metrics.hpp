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
#ifndef ALIGN_METRICS_HPP_
#define ALIGN_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace align::metrics {

// Minimal Levenshtein alignment, split by operation type.
struct EditCounts {
  size_t insertions = 0;
  size_t deletions = 0;
  size_t substitutions = 0;
  size_t ref_length = 0;

  size_t distance() const { return insertions + deletions + substitutions; }
};

// Unit-cost edit distance via dynamic programming. When a substitution and an
// insertion+deletion pair tie on total cost, the substitution is preferred;
// ties between deletion and insertion resolve to deletion. The tie-break
// affects the per-op counts, never the distance.
EditCounts edit_distance(std::span<const int> ref, std::span<const int> hyp);

// Corpus-pooled error rate: sum of distances over sum of reference lengths.
double pooled_error_rate(const std::vector<std::vector<int>>& refs, const std::vector<std::vector<int>>& hyps);

double per(const std::vector<std::vector<int>>& ref_phonemes, const std::vector<std::vector<int>>& hyp_phonemes);

// WER over whitespace-tokenized, case-folded transcripts.
double wer(const std::vector<std::string>& ref_transcripts, const std::vector<std::string>& hyp_transcripts);

// Exact 1D Wasserstein distance between empirical distributions. Equal sizes
// reduce to the sorted pairing mean; unequal sizes integrate the two
// piecewise-constant quantile functions over the merged breakpoint grid.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

struct WdReport {
  std::vector<double> per_dimension;  // W_j, j = 0..D-1
  std::vector<int> ranking;           // dimension indices, descending W_j
  double mean = 0.0;
  int frames_a = 0;
  int frames_b = 0;
};

// Per-dimension distances between two frame collections (rows = frames).
// Subsamples each side to max_frames rows first (uniform without replacement,
// deterministic for a given seed).
WdReport wd_per_dimension(const std::vector<std::vector<double>>& frames_a,
                          const std::vector<std::vector<double>>& frames_b, int max_frames, uint64_t seed);

}  // namespace align::metrics

#endif  // ALIGN_METRICS_HPP_
