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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nd::oracle {

std::vector<int> floyd_warshall(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> d(static_cast<std::size_t>(n) * n, kUnreachable);
  auto at = [&](int i, int j) -> int& { return d[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) at(i, i) = 0;
  for (const Edge& e : g.edges()) {
    at(e.u, e.v) = 1;
    at(e.v, e.u) = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, k) + at(k, j) < at(i, j)) at(i, j) = at(i, k) + at(k, j);
  return d;
}

namespace {

using Dense = std::vector<std::vector<long double>>;

// Householder tridiagonalization; returns (diagonal, off-diagonal).
std::pair<std::vector<long double>, std::vector<long double>> tridiagonalize(const Matrix& m) {
  const std::size_t n = m.rows();
  Dense a(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    long double alpha = 0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
    alpha = std::sqrt(alpha);
    if (alpha == 0) continue;
    if (a[k + 1][k] > 0) alpha = -alpha;
    std::vector<long double> v(n, 0);
    v[k + 1] = a[k + 1][k] - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i][k];
    long double vv = 0;
    for (long double x : v) vv += x * x;
    if (vv == 0) continue;
    // A <- H A H with H = I - 2 v v^T / v^T v.
    std::vector<long double> p(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[i] += a[i][j] * v[j];
    for (long double& x : p) x *= 2 / vv;
    long double kappa = 0;
    for (std::size_t i = 0; i < n; ++i) kappa += v[i] * p[i];
    kappa /= vv;
    std::vector<long double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] - kappa * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= v[i] * q[j] + q[i] * v[j];
  }
  std::vector<long double> diag(n), off(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i][i];
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a[i + 1][i];
  return {diag, off};
}

// Number of eigenvalues of the tridiagonal matrix strictly below x.
int sturm_count(const std::vector<long double>& diag, const std::vector<long double>& off, long double x) {
  int count = 0;
  long double q = 1;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const long double prev = i == 0 ? 0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0 : prev / q);
    if (q == 0) q = -1e-300L;
    if (q < 0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const Matrix& a) {
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double r = 0;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (j != i) r += std::abs(a(i, j));
    lo = std::min(lo, a(i, i) - r);
    hi = std::max(hi, a(i, i) + r);
  }
  return {lo - 1.0, hi + 1.0};
}

}  // namespace

std::vector<double> sturm_eigenvalues(const Matrix& a, double tol) {
  const auto [diag, off] = tridiagonalize(a);
  const auto [lo0, hi0] = gershgorin(a);
  const int n = static_cast<int>(a.rows());
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    // Smallest x with more than k eigenvalues below it.
    long double lo = lo0, hi = hi0;
    while (hi - lo > tol) {
      const long double mid = (lo + hi) / 2;
      if (mid == lo || mid == hi) break;
      if (sturm_count(diag, off, mid) > k) hi = mid; else lo = mid;
    }
    out.push_back(static_cast<double>((lo + hi) / 2));
  }
  return out;
}

long double characteristic_value(const Matrix& a, double x) {
  const std::size_t n = a.rows();
  Dense m(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j) - (i == j ? x : 0.0);
  long double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::vector<double> characteristic_roots(const Matrix& a, int grid) {
  const auto [lo, hi] = gershgorin(a);
  std::vector<double> roots;
  double x0 = lo;
  long double f0 = characteristic_value(a, x0);
  for (int i = 1; i <= grid; ++i) {
    const double x1 = lo + (hi - lo) * i / grid;
    const long double f1 = characteristic_value(a, x1);
    if (f0 == 0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0) {
      double l = x0, h = x1;
      long double fl = f0;
      for (int it = 0; it < 200 && h - l > 1e-15 * (1 + std::abs(l)); ++it) {
        const double m = 0.5 * (l + h);
        const long double fm = characteristic_value(a, m);
        if (fm == 0) {
          l = h = m;
          break;
        }
        if ((fm < 0) == (fl < 0)) {
          l = m;
          fl = fm;
        } else {
          h = m;
        }
      }
      roots.push_back(0.5 * (l + h));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

namespace {

struct P2 {
  long double x, y;
};

long double side(P2 a, P2 b, P2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

bool interval_overlap(long double a0, long double a1, long double b0, long double b1) {
  if (a0 > a1) std::swap(a0, a1);
  if (b0 > b1) std::swap(b0, b1);
  return std::max(a0, b0) <= std::min(a1, b1);
}

// Parameter of the projection of c onto segment ab.
long double project(P2 a, P2 b, P2 c) {
  const long double dx = b.x - a.x, dy = b.y - a.y;
  const long double len2 = dx * dx + dy * dy;
  if (len2 == 0) return 0;
  return ((c.x - a.x) * dx + (c.y - a.y) * dy) / len2;
}

bool point_on_segment(P2 a, P2 b, P2 c) {
  if (side(a, b, c) != 0) return false;
  return interval_overlap(a.x, b.x, c.x, c.x) && interval_overlap(a.y, b.y, c.y, c.y);
}

}  // namespace

bool sampled_intersect(const ArcPair& pr, int samples) {
  const P2 p1{pr[0], pr[1]}, p2{pr[2], pr[3]}, q1{pr[4], pr[5]}, q2{pr[6], pr[7]};
  // Degenerate segments (points).
  const bool p_point = p1.x == p2.x && p1.y == p2.y;
  const bool q_point = q1.x == q2.x && q1.y == q2.y;
  if (p_point && q_point) return p1.x == q1.x && p1.y == q1.y;
  if (p_point) return point_on_segment(q1, q2, p1);
  if (q_point) return point_on_segment(p1, p2, q1);

  const long double dpx = p2.x - p1.x, dpy = p2.y - p1.y;
  const long double dqx = q2.x - q1.x, dqy = q2.y - q1.y;
  if (dpx * dqy - dpy * dqx == 0) {
    // Parallel: only collinear pairs can meet, then overlap on the dominant axis.
    if (side(q1, q2, p1) != 0) return false;
    if (std::abs(dpx) >= std::abs(dpy)) return interval_overlap(p1.x, p2.x, q1.x, q2.x);
    return interval_overlap(p1.y, p2.y, q1.y, q2.y);
  }

  auto at = [&](long double t) { return P2{p1.x + t * dpx, p1.y + t * dpy}; };
  auto hit = [&](long double t) {
    const long double s = project(q1, q2, at(t));
    return s >= 0 && s <= 1;
  };
  long double t0 = 0, f0 = side(q1, q2, at(0));
  if (f0 == 0 && hit(0)) return true;
  for (int i = 1; i <= samples; ++i) {
    const long double t1 = static_cast<long double>(i) / samples;
    const long double f1 = side(q1, q2, at(t1));
    if (f1 == 0) return hit(t1);
    if ((f0 < 0) != (f1 < 0)) {
      long double lo = t0, hi = t1, flo = f0;
      for (int it = 0; it < 80; ++it) {
        const long double mid = (lo + hi) / 2;
        const long double fm = side(q1, q2, at(mid));
        if (fm == 0) return hit(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return hit((lo + hi) / 2);
    }
    t0 = t1;
    f0 = f1;
  }
  return false;
}

bool cramer_intersect(const ArcPair& pr) {
  const long double ax = pr[2] - pr[0], ay = pr[3] - pr[1];
  const long double bx = pr[6] - pr[4], by = pr[7] - pr[5];
  const long double cx = pr[4] - pr[0], cy = pr[5] - pr[1];
  // t a - s b = c
  const long double det = ax * -by - ay * -bx;
  if (det == 0) return false;
  const long double t = (cx * -by - cy * -bx) / det;
  const long double s = (ax * cy - ay * cx) / det;
  return t >= 0 && t <= 1 && s >= 0 && s <= 1;
}

int brute_force_crossings(const Layout& layout, const Graph& g) {
  const auto edges = g.edges();
  int count = 0;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = 0; b < edges.size(); ++b) {
      if (b <= a) continue;
      const Edge e = edges[a], f = edges[b];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
      const ArcPair pr{layout(e.u, 0), layout(e.u, 1), layout(e.v, 0), layout(e.v, 1),
                       layout(f.u, 0), layout(f.u, 1), layout(f.v, 0), layout(f.v, 1)};
      if (cramer_intersect(pr)) ++count;
    }
  }
  return count;
}

double naive_stress(const Layout& p, const std::vector<int>& dist, int n, int alpha, bool averaged) {
  double total = 0;
  long pairs = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = dist[static_cast<std::size_t>(i) * n + j];
      const double e = std::hypot(p(i, 0) - p(j, 0), p(i, 1) - p(j, 1));
      total += std::pow(d, -alpha) * (e - d) * (e - d);
      ++pairs;
    }
  }
  return averaged && pairs > 0 ? total / static_cast<double>(pairs) : total;
}

namespace {

using M2 = std::array<long double, 4>;  // row-major 2 x 2

M2 mul(const M2& a, const M2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

M2 inverse(const M2& a) {
  const long double det = a[0] * a[3] - a[1] * a[2];
  return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

}  // namespace

double procrustes_by_sqrtm(const Layout& p, const Layout& q) {
  const std::size_t n = p.rows();
  long double mp[2] = {0, 0}, mq[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) {
      mp[c] += p(i, c);
      mq[c] += q(i, c);
    }
  for (long double& v : mp) v /= n;
  for (long double& v : mq) v /= n;
  M2 c{0, 0, 0, 0};
  long double tp = 0, tq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double px[2] = {p(i, 0) - mp[0], p(i, 1) - mp[1]};
    const long double qx[2] = {q(i, 0) - mq[0], q(i, 1) - mq[1]};
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) c[2 * r + s] += px[r] * qx[s];
    tp += px[0] * px[0] + px[1] * px[1];
    tq += qx[0] * qx[0] + qx[1] * qx[1];
  }
  const M2 ct{c[0], c[2], c[1], c[3]};
  const M2 s = mul(c, ct);
  // Denman-Beavers: Y -> sqrt(S), Z -> sqrt(S)^-1. Needs S nonsingular.
  M2 y = s, z{1, 0, 0, 1};
  for (int it = 0; it < 100; ++it) {
    const M2 yi = inverse(y), zi = inverse(z);
    M2 yn, zn;
    for (int k = 0; k < 4; ++k) {
      yn[k] = (y[k] + zi[k]) / 2;
      zn[k] = (z[k] + yi[k]) / 2;
    }
    y = yn;
    z = zn;
  }
  const long double tr = y[0] + y[3];
  return static_cast<double>(1 - tr * tr / (tp * tq));
}

Layout regular_polygon(int n, double r) {
  Layout p(static_cast<std::size_t>(n), 2);
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * i / n;
    p(static_cast<std::size_t>(i), 0) = r * std::cos(a);
    p(static_cast<std::size_t>(i), 1) = r * std::sin(a);
  }
  return p;
}

double best_polygon_stress(int n) {
  std::vector<int> dist(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = std::abs(i - j);
      dist[static_cast<std::size_t>(i) * n + j] = std::min(k, n - k);
    }
  auto f = [&](double r) { return naive_stress(regular_polygon(n, r), dist, n, 1, true); };
  double lo = 0.0, hi = static_cast<double>(n);
  double best_r = 0.0, best = f(0.0);
  for (int round = 0; round < 6; ++round) {
    const int steps = 1000;
    for (int i = 0; i <= steps; ++i) {
      const double r = lo + (hi - lo) * i / steps;
      const double v = f(r);
      if (v < best) {
        best = v;
        best_r = r;
      }
    }
    const double width = (hi - lo) / steps;
    lo = std::max(0.0, best_r - 2 * width);
    hi = best_r + 2 * width;
  }
  return best;
}

}  // namespace nd::oracle
