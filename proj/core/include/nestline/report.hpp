#pragma once

#include <span>
#include <string>

#include "nestline/multi_start.hpp"

namespace nestline {

struct ReportJsonOptions {
  /// Drop every wall-clock field so identical runs give identical bytes.
  bool include_timings = true;
  /// Embed placements of every start, not only the best one.
  bool include_start_layouts = false;
};

/// RunReport as a JSON document (field names in docs/formats.md).
std::string report_json(const RunReport& report, const ReportJsonOptions& opts = {});

/// Text table with one row per report, sorted by instance name, followed by
/// footnotes for starts that did not yield a verified feasible layout.
std::string report_table(std::span<const RunReport> reports);

}  // namespace nestline
