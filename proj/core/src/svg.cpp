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

#include "neural_drawer/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "neural_drawer/errors.hpp"

namespace nd {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string render_svg(const Layout& layout, const Graph& g, const SvgStyle& style) {
  const int n = g.node_count();
  if (layout.rows() != static_cast<std::size_t>(n) || layout.cols() != 2) {
    throw ShapeError("render_svg: layout " + layout.shape_string() + " for " + std::to_string(n) + " nodes");
  }
  for (double v : layout.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("render_svg: non-finite coordinate");
  }
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  if (n > 0) {
    min_x = max_x = layout(0, 0);
    min_y = max_y = layout(0, 1);
    for (int i = 1; i < n; ++i) {
      min_x = std::min(min_x, layout(i, 0));
      max_x = std::max(max_x, layout(i, 0));
      min_y = std::min(min_y, layout(i, 1));
      max_y = std::max(max_y, layout(i, 1));
    }
  }
  double extent = std::max(max_x - min_x, max_y - min_y);
  if (!(extent > 0.0)) extent = 1.0;
  const double margin = 0.05 * extent;
  const double r = style.node_radius * extent;
  const double sw = style.stroke_width * extent;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(style.width) + "\" height=\"" +
         num(style.height) + "\" viewBox=\"" + num(min_x - margin) + ' ' + num(min_y - margin) + ' ' +
         num(max_x - min_x + 2 * margin) + ' ' + num(max_y - min_y + 2 * margin) + "\">\n";
  out += "<g stroke=\"" + style.edge_stroke + "\" stroke-width=\"" + num(sw) + "\">\n";
  // Graph::edges() is already sorted by (min, max).
  for (const Edge& e : g.edges()) {
    out += "<line x1=\"" + num(layout(e.u, 0)) + "\" y1=\"" + num(layout(e.u, 1)) + "\" x2=\"" +
           num(layout(e.v, 0)) + "\" y2=\"" + num(layout(e.v, 1)) + "\"/>\n";
  }
  out += "</g>\n<g fill=\"" + style.node_fill + "\">\n";
  for (int i = 0; i < n; ++i) {
    out += "<circle cx=\"" + num(layout(i, 0)) + "\" cy=\"" + num(layout(i, 1)) + "\" r=\"" + num(r) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace nd
