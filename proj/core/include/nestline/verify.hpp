#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nestline/geometry.hpp"
#include "nestline/model.hpp"

namespace nestline {

struct VerifyLimits {
  double max_violation = 1e-6;   // containment and separation residuals
  double overlap_factor = 1e-8;  // overlap area limit relative to the smallest part
};

struct VerifyResult {
  bool ok = false;
  FeasibilityReport report;
  double overlap_limit = 0.0;
  std::vector<std::string> messages;  // one line per failed check
};

/// Checks a layout against the strip [0, length] x [0, e] and for pairwise
/// overlap. When `lines` is given the model's separation residuals are checked too.
VerifyResult verify_layout(double strip_width, std::span<const Piece> pieces, double length,
                           std::span<const Placement> placements,
                           std::optional<std::span<const SeparationLineVar>> lines = std::nullopt,
                           const VerifyLimits& limits = {});

}  // namespace nestline
