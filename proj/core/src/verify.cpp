#include "nestline/verify.hpp"

#include <algorithm>
#include <cstdio>

#include "nestline/errors.hpp"

namespace nestline {
namespace {

std::string format(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

VerifyResult verify_layout(double strip_width, std::span<const Piece> pieces, double length,
                           std::span<const Placement> placements,
                           std::optional<std::span<const SeparationLineVar>> lines,
                           const VerifyLimits& limits) {
  if (pieces.empty()) throw Error(ErrorCode::EmptyInstance, "no pieces to verify");
  if (placements.size() != pieces.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "layout has " + std::to_string(placements.size()) + " placements for " +
                    std::to_string(pieces.size()) + " pieces");
  }
  std::vector<Piece> copy(pieces.begin(), pieces.end());
  const NlpProblem problem = build_problem(strip_width, std::move(copy));

  VerifyResult out;
  if (lines) {
    const auto v = problem.encode(length, placements, *lines);
    out.report = check_feasibility(v, problem);
    out.report.max_violation = std::max({out.report.containment_y, out.report.containment_x,
                                         out.report.separation});
  } else {
    out.report = check_layout(problem, length, placements);
  }
  out.overlap_limit = limits.overlap_factor * out.report.min_part_area;

  const auto& r = out.report;
  if (r.containment_y > limits.max_violation) {
    out.messages.push_back(format("vertex outside the strip width by %.3e (limit %.1e)",
                                  r.containment_y, limits.max_violation));
  }
  if (r.containment_x > limits.max_violation) {
    out.messages.push_back(format("vertex outside [0, length] by %.3e (limit %.1e)",
                                  r.containment_x, limits.max_violation));
  }
  if (lines && r.separation > limits.max_violation) {
    out.messages.push_back(format("separation residual %.3e (limit %.1e)", r.separation,
                                  limits.max_violation));
  }
  if (r.max_overlap_area > out.overlap_limit) {
    std::string msg = format("overlap area %.3e exceeds %.3e", r.max_overlap_area,
                             out.overlap_limit);
    if (r.worst_pair) msg += " between '" + r.worst_pair->first + "' and '" + r.worst_pair->second + "'";
    out.messages.push_back(std::move(msg));
  }
  out.ok = out.messages.empty();
  return out;
}

}  // namespace nestline
