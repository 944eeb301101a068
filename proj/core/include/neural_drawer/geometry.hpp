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

#ifndef NEURAL_DRAWER_GEOMETRY_HPP
#define NEURAL_DRAWER_GEOMETRY_HPP

#include <array>

namespace nd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Two arcs (p_i, p_j) and (p_h, p_k) flattened as
/// [x_i, y_i, x_j, y_j, x_h, y_h, x_k, y_k].
using ArcPair = std::array<double, 8>;

/// Exact sign of the orientation determinant of (a, b, c): +1 when c lies to
/// the left of the directed line a->b, -1 to the right, 0 when collinear.
/// A floating-point filter is tried first; uncertain cases are resolved with
/// error-free product expansions.
int orientation(Point2 a, Point2 b, Point2 c);

/// True iff the closed segments [p1, p2] and [q1, q2] share a point,
/// including touching endpoints and collinear overlap.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);
bool segments_intersect(const ArcPair& pair);

}  // namespace nd

#endif  // NEURAL_DRAWER_GEOMETRY_HPP
