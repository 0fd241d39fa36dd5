#include "nestline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "json.hpp"
#include "nestline/errors.hpp"
#include "nestline/instance.hpp"

namespace nestline {
namespace {

using nlohmann::ordered_json;

double seconds2(double s) { return std::round(s * 100.0) / 100.0; }

ordered_json placements_json(std::span<const std::string> ids, std::span<const Placement> pls) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < pls.size(); ++i) {
    arr.push_back({{"id", i < ids.size() ? ids[i] : std::to_string(i)},
                   {"tx", pls[i].tx},
                   {"ty", pls[i].ty},
                   {"theta", wrap_angle(pls[i].theta)}});
  }
  return arr;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string report_json(const RunReport& r, const ReportJsonOptions& opts) {
  ordered_json doc;
  doc["instance"] = r.instance;
  doc["version"] = r.version;
  doc["rng_seed"] = r.options.rng_seed;
  doc["k_starts"] = r.options.starts;
  doc["strip_width"] = r.strip_width;
  doc["statistics"] = {{"pieces", r.piece_count},
                       {"parts", r.part_count},
                       {"lines", r.line_count},
                       {"variables", r.variable_count},
                       {"constraints", r.constraint_count}};
  const auto& so = r.options.solver;
  doc["options"] = {{"bl_iterations", r.options.bl_iterations},
                    {"raster_scale", r.options.raster_scale},
                    {"threads", r.options.threads},
                    {"solver",
                     {{"feasibility_tol", so.feasibility_tol},
                      {"stationarity_tol", so.stationarity_tol},
                      {"max_time_seconds", so.max_time_seconds},
                      {"max_outer_iterations", so.max_outer_iterations},
                      {"max_inner_iterations", so.max_inner_iterations},
                      {"penalty_init", so.penalty_init},
                      {"penalty_growth", so.penalty_growth},
                      {"inner_memory", so.inner_memory}}}};

  ordered_json starts = ordered_json::array();
  for (const auto& s : r.starts) {
    ordered_json sj;
    sj["index"] = s.index;
    sj["seed"] = s.seed;
    sj["seed_length"] = s.seed_length;
    sj["final_length"] = s.final_length;
    sj["objective"] = s.objective;
    sj["status"] = std::string(to_string(s.status));
    sj["feasible"] = s.feasible();
    sj["max_violation"] = s.max_violation;
    sj["max_overlap_area"] = s.max_overlap_area;
    if (opts.include_timings) {
      sj["seed_seconds"] = seconds2(s.seed_seconds);
      sj["solve_seconds"] = seconds2(s.solve_seconds);
      sj["iterations"] = s.iterations;
    }
    if (!s.message.empty()) sj["message"] = s.message;
    if (opts.include_start_layouts) sj["placements"] = placements_json(r.piece_ids, s.placements);
    starts.push_back(std::move(sj));
  }
  doc["starts"] = std::move(starts);

  const auto& m = r.summary;
  ordered_json summary;
  summary["feasible_count"] = m.feasible_count;
  if (m.feasible_count > 0) {
    summary["min_length"] = m.min_length;
    summary["avg_length"] = m.avg_length;
    summary["max_length"] = m.max_length;
    summary["best_start"] = m.best_start;
  } else {
    summary["min_length"] = nullptr;
    summary["avg_length"] = nullptr;
    summary["max_length"] = nullptr;
    summary["best_start"] = nullptr;
  }
  if (opts.include_timings) {
    summary["raster_seconds"] = seconds2(m.raster_seconds);
    summary["avg_seed_seconds"] = seconds2(m.avg_seed_seconds);
    summary["avg_seed_seconds_amortized"] = seconds2(m.avg_seed_seconds_amortized);
    summary["avg_solve_seconds"] = seconds2(m.avg_solve_seconds);
  }
  doc["summary"] = std::move(summary);

  if (m.best_start >= 0) {
    const auto& b = r.starts[static_cast<std::size_t>(m.best_start)];
    doc["best"] = {{"start", b.index},
                   {"length", b.final_length},
                   {"placements", placements_json(r.piece_ids, b.placements)}};
  } else {
    doc["best"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string report_table(std::span<const RunReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::ValidationError, "no reports to tabulate");
  std::vector<const RunReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunReport* a, const RunReport* b) { return a->instance < b->instance; });

  const std::vector<std::string> header{"Instance", "Min. Sol.", "Avg. Sol.", "Max. Sol.",
                                        "SP Avg. time(s)", "Solve Avg. time(s)", "Feasible"};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  for (const RunReport* r : sorted) {
    const auto& m = r->summary;
    const bool all_ok = m.feasible_count == static_cast<int>(r->starts.size());
    std::vector<std::string> row;
    row.push_back(r->instance + (all_ok ? "" : " *"));
    if (m.feasible_count > 0) {
      row.push_back(fixed2(m.min_length));
      row.push_back(fixed2(m.avg_length));
      row.push_back(fixed2(m.max_length));
    } else {
      row.insert(row.end(), {"-", "-", "-"});
    }
    row.push_back(fixed2(m.avg_seed_seconds));
    row.push_back(fixed2(m.avg_solve_seconds));
    row.push_back(std::to_string(m.feasible_count) + "/" + std::to_string(r->starts.size()));
    rows.push_back(std::move(row));
    for (const auto& s : r->starts) {
      if (s.feasible()) continue;
      std::string note = "* " + r->instance + ": start " + std::to_string(s.index) +
                         " excluded (" + std::string(to_string(s.status));
      if (!s.message.empty()) note += ": " + s.message;
      notes.push_back(note + ")");
    }
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t pad = width[c] - row[c].size();
      if (c == 0) {
        line += row[c] + std::string(pad, ' ');
      } else {
        line += "  " + std::string(pad, ' ') + row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  };
  emit(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& row : rows) emit(row);
  for (const auto& n : notes) out += n + "\n";
  return out;
}

}  // namespace nestline
