/* Copyright 2026 The polylab Authors.

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

#pragma once

#include <algorithm>
#include <cmath>

namespace polylab {

struct QuadratureTolerance {
  double absolute = 1e-12;
  /// Relative to the first coarse estimate; 0 disables.
  double relative = 0.0;
  int max_depth = 60;
};

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb,
                    double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // The last test stops refinement once differences are at roundoff level.
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 1e-15 * std::abs(left + right)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
///
/// The target error is min(absolute, relative * |coarse estimate|), so tiny
/// integrals (thin caps) keep their relative accuracy.
template <class F>
double adaptive_simpson(const F& f, double a, double b, QuadratureTolerance tol = {}) {
  if (a == b) return 0.0;
  // Start from four panels so symmetric integrands are not mistaken for
  // converged on the first comparison.
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  double coarse = 0.0;
  double x0 = a;
  double f0 = f(a);
  struct Panel {
    double a, fa, b, fb, m, fm, whole;
  };
  Panel panels[kPanels];
  for (int i = 0; i < kPanels; ++i) {
    const double x1 = (i + 1 == kPanels) ? b : a + (i + 1) * h;
    const double m = 0.5 * (x0 + x1);
    const double f1 = f(x1);
    const double fm = f(m);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    panels[i] = {x0, f0, x1, f1, m, fm, whole};
    coarse += whole;
    x0 = x1;
    f0 = f1;
  }
  double target = tol.absolute;
  if (tol.relative > 0.0 && coarse != 0.0) {
    target = std::min(target, tol.relative * std::abs(coarse));
  }
  target = std::max(target, 1e-300);
  double sum = 0.0;
  for (const auto& p : panels) {
    sum += detail::simpson_step(f, p.a, p.fa, p.b, p.fb, p.m, p.fm, p.whole,
                                target / kPanels, tol.max_depth);
  }
  return sum;
}

}  // namespace polylab
