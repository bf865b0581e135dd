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
#include "align/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "align/errors.hpp"
#include "align/rng.hpp"
#include "align/textio.hpp"

namespace align::metrics {

EditCounts edit_distance(std::span<const int> ref, std::span<const int> hyp) {
  const size_t n = ref.size();
  const size_t m = hyp.size();

  struct Cell {
    size_t ins, del, sub;
    size_t cost() const { return ins + del + sub; }
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = {j, 0, 0};

  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {0, i, 0};
    for (size_t j = 1; j <= m; ++j) {
      if (ref[i - 1] == hyp[j - 1]) {
        cur[j] = prev[j - 1];
        continue;
      }
      Cell sub = prev[j - 1];
      sub.sub += 1;
      Cell del = prev[j];
      del.del += 1;
      Cell ins = cur[j - 1];
      ins.ins += 1;
      // prefer substitution, then deletion, then insertion on cost ties
      Cell best = sub;
      if (del.cost() < best.cost()) best = del;
      if (ins.cost() < best.cost()) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  EditCounts out;
  out.insertions = prev[m].ins;
  out.deletions = prev[m].del;
  out.substitutions = prev[m].sub;
  out.ref_length = n;
  return out;
}

double pooled_error_rate(const std::vector<std::vector<int>>& refs, const std::vector<std::vector<int>>& hyps) {
  if (refs.size() != hyps.size()) throw DataError("pooled_error_rate: ref/hyp count mismatch");
  size_t total_dist = 0;
  size_t total_ref = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    EditCounts c = edit_distance(refs[i], hyps[i]);
    total_dist += c.distance();
    total_ref += refs[i].size();
  }
  if (total_ref == 0) throw DataError("pooled_error_rate: zero total reference length");
  return static_cast<double>(total_dist) / static_cast<double>(total_ref);
}

double per(const std::vector<std::vector<int>>& ref_phonemes, const std::vector<std::vector<int>>& hyp_phonemes) {
  return pooled_error_rate(ref_phonemes, hyp_phonemes);
}

double wer(const std::vector<std::string>& ref_transcripts, const std::vector<std::string>& hyp_transcripts) {
  if (ref_transcripts.size() != hyp_transcripts.size()) throw DataError("wer: ref/hyp count mismatch");
  size_t total_dist = 0;
  size_t total_ref = 0;
  for (size_t i = 0; i < ref_transcripts.size(); ++i) {
    // shared vocabulary per pair so ids agree between ref and hyp
    std::vector<std::string> vocab;
    auto to_ids = [&vocab](const std::string& s) {
      std::vector<int> ids;
      for (const auto& t : split_ws(lower(s))) {
        auto it = std::find(vocab.begin(), vocab.end(), t);
        if (it == vocab.end()) {
          vocab.push_back(t);
          ids.push_back(static_cast<int>(vocab.size()) - 1);
        } else {
          ids.push_back(static_cast<int>(it - vocab.begin()));
        }
      }
      return ids;
    };
    std::vector<int> ref_ids = to_ids(ref_transcripts[i]);
    std::vector<int> hyp_ids = to_ids(hyp_transcripts[i]);
    EditCounts c = edit_distance(ref_ids, hyp_ids);
    total_dist += c.distance();
    total_ref += ref_ids.size();
  }
  if (total_ref == 0) throw DataError("wer: zero total reference length");
  return static_cast<double>(total_dist) / static_cast<double>(total_ref);
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("wasserstein_1d: empty sample set");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const size_t n = sa.size();
  const size_t m = sb.size();

  if (n == m) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += std::abs(sa[i] - sb[i]);
    return s / static_cast<double>(n);
  }

  // Integrate |Fa^-1(q) - Fb^-1(q)| over the merged breakpoint grid i/n, j/m.
  double total = 0.0;
  size_t ia = 0, ib = 0;
  double q = 0.0;
  while (ia < n && ib < m) {
    const double qa = static_cast<double>(ia + 1) / static_cast<double>(n);
    const double qb = static_cast<double>(ib + 1) / static_cast<double>(m);
    const double qn = std::min(qa, qb);
    total += (qn - q) * std::abs(sa[ia] - sb[ib]);
    q = qn;
    if (qa <= qn) ++ia;
    if (qb <= qn) ++ib;
  }
  return total;
}

WdReport wd_per_dimension(const std::vector<std::vector<double>>& frames_a,
                          const std::vector<std::vector<double>>& frames_b, int max_frames, uint64_t seed) {
  if (frames_a.empty() || frames_b.empty()) throw DataError("wd_per_dimension: empty frame set");
  const size_t dim = frames_a.front().size();
  if (frames_b.front().size() != dim) throw DataError("wd_per_dimension: dimension mismatch");

  auto subsample = [&](const std::vector<std::vector<double>>& frames, uint64_t salt) {
    if (max_frames <= 0 || frames.size() <= static_cast<size_t>(max_frames)) return frames;
    std::vector<size_t> idx(frames.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng = Rng::substream(seed, "metrics/wd_subsample", salt);
    rng.shuffle(idx);
    idx.resize(static_cast<size_t>(max_frames));
    std::sort(idx.begin(), idx.end());
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(frames[i]);
    return out;
  };

  const auto fa = subsample(frames_a, 0);
  const auto fb = subsample(frames_b, 1);

  WdReport report;
  report.frames_a = static_cast<int>(fa.size());
  report.frames_b = static_cast<int>(fb.size());
  report.per_dimension.resize(dim);
  std::vector<double> col_a(fa.size()), col_b(fb.size());
  for (size_t j = 0; j < dim; ++j) {
    for (size_t i = 0; i < fa.size(); ++i) col_a[i] = fa[i][j];
    for (size_t i = 0; i < fb.size(); ++i) col_b[i] = fb[i][j];
    report.per_dimension[j] = wasserstein_1d(col_a, col_b);
  }
  report.ranking.resize(dim);
  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](int x, int y) { return report.per_dimension[x] > report.per_dimension[y]; });
  report.mean = std::accumulate(report.per_dimension.begin(), report.per_dimension.end(), 0.0) /
                static_cast<double>(dim);
  return report;
}

}  // namespace align::metrics
