// Copyright 2026 The neural_drawer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neural_drawer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nd {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientErrBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;

// Knuth's TwoSum: a + b == s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

// a * b == p + e exactly (no overflow/underflow assumed).
inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

int exact_orientation(Point2 a, Point2 b, Point2 c) {
  // det = bx*cy - bx*ay - ax*cy - by*cx + ax*by + ay*cx
  const double terms[6][3] = {
      {b.x, c.y, 1.0}, {b.x, a.y, -1.0}, {a.x, c.y, -1.0},
      {b.y, c.x, -1.0}, {a.x, b.y, 1.0}, {a.y, c.x, 1.0},
  };
  std::array<double, 12> parts{};
  for (int i = 0; i < 6; ++i) {
    double p, e;
    two_product(terms[i][0], terms[i][1], p, e);
    parts[2 * i] = terms[i][2] * p;
    parts[2 * i + 1] = terms[i][2] * e;
  }
  // Grow a nonoverlapping expansion one term at a time; its largest nonzero
  // component carries the sign of the exact sum.
  std::array<double, 13> h{};
  std::size_t len = 0;
  for (double x : parts) {
    double q = x;
    std::size_t out = 0;
    for (std::size_t i = 0; i < len; ++i) {
      double s, e;
      two_sum(q, h[i], s, e);
      q = s;
      if (e != 0.0) h[out++] = e;
    }
    if (q != 0.0) h[out++] = q;
    len = out;
  }
  if (len == 0) return 0;
  const double top = h[len - 1];
  return top > 0.0 ? 1 : (top < 0.0 ? -1 : 0);
}

bool on_segment(Point2 p, Point2 q, Point2 r) {
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
         r.y <= std::max(p.y, q.y);
}

}  // namespace

int orientation(Point2 a, Point2 b, Point2 c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double bound = kOrientErrBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orientation(a, b, c);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int d1 = orientation(q1, q2, p1);
  const int d2 = orientation(q1, q2, p2);
  const int d3 = orientation(p1, p2, q1);
  const int d4 = orientation(p1, p2, q2);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool segments_intersect(const ArcPair& a) {
  return segments_intersect({a[0], a[1]}, {a[2], a[3]}, {a[4], a[5]}, {a[6], a[7]});
}

}  // namespace nd
