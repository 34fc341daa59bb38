#pragma once

#include <optional>
#include <string>

#include "maxsum/center.hpp"
#include "maxsum/matching.hpp"

namespace maxsum {

inline constexpr int kCanvasSize = 800;

/// Deterministic 800x800 drawing: disks B(pq), ellipses E_lambda(pq), matched segments,
/// red and blue points, and the center with one bisector ray per matched pair.
std::string render_svg(const Instance& inst, const Matching& m, const std::optional<CenterCertificate>& center,
                       double lambda);

}  // namespace maxsum
