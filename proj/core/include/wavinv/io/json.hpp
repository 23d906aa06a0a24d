#pragma once

#include <string>

#include "wavinv/wavelet/quadtree.hpp"

namespace wavinv::io {

// Quadtree JSON (schema in docs/formats.md):
// {
//   "format": "wavinv-quadtree", "max_level": S, "half_width": N,
//   "boundary": "periodic" | "reflect", "domain": [x0, x1, y0, y1],
//   "scaling": [[...], ...],
//   "details": [ { "level": j, "horizontal": [[...]], "vertical": [[...]], "diagonal": [[...]],
//                  "mask": { "horizontal": [[0|1]], ... } }, ... ]
// }
std::string quadtree_to_json(const wavelet::CoefficientQuadtree& tree, int indent = 1);
// Throws IoError on malformed input, ShapeError/InvariantError via validate().
wavelet::CoefficientQuadtree quadtree_from_json(const std::string& text);

}  // namespace wavinv::io
