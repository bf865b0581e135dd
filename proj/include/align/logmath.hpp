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
#ifndef ALIGN_LOGMATH_HPP_
#define ALIGN_LOGMATH_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace align {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)). Symmetric in its arguments, so accumulation results
// do not depend on the order contributions arrive in.
inline double logadd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double m = std::max(a, b);
  const double n = std::min(a, b);
  return m + std::log1p(std::exp(n - m));
}

// Canonical n-ary logsumexp: contributions are sorted before reduction so the
// value is a function of the multiset only. CTC and beam-search accumulators
// both go through this, which is what makes cross-route score comparisons
// exact rather than order-of-evaluation dependent.
inline double logsumexp(std::span<const double> xs) {
  if (xs.empty()) return kLogZero;
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end(), std::greater<double>());
  const double m = s[0];
  if (m == kLogZero) return kLogZero;
  double acc = 0.0;
  for (double x : s) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline double logsumexp3(double a, double b, double c) {
  const double xs[3] = {a, b, c};
  return logsumexp(std::span<const double>(xs, 3));
}

}  // namespace align

#endif  // ALIGN_LOGMATH_HPP_
