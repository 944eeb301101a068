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

#ifndef NEURAL_DRAWER_SVG_HPP
#define NEURAL_DRAWER_SVG_HPP

#include <string>

#include "neural_drawer/graph.hpp"
#include "neural_drawer/matrix.hpp"

namespace nd {

struct SvgStyle {
  double width = 600.0;
  double height = 600.0;
  /// Node radius and stroke width as fractions of the larger layout extent.
  double node_radius = 0.015;
  double stroke_width = 0.004;
  std::string node_fill = "#1f77b4";
  std::string edge_stroke = "#555555";
};

/// Node-link drawing. The viewBox is the layout bounding box grown by 5% of
/// its larger side on every edge; lines for edges in (min, max) order, then
/// circles for nodes in index order. Throws std::invalid_argument on
/// non-finite coordinates.
std::string render_svg(const Layout& layout, const Graph& g, const SvgStyle& style = {});

}  // namespace nd

#endif  // NEURAL_DRAWER_SVG_HPP
