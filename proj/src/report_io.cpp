#include "hlab/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hlab {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << v;
  return s.str();
}

}  // namespace

json to_json(const DecayMonitor& m) {
  return {{"applicable", m.applicable}, {"edge_max", m.edge_max}, {"global_max", m.global_max},
          {"ratio", m.ratio}, {"passed", m.passed}};
}

json to_json(const CrossCheckReport& r) {
  json table = json::array();
  for (const auto& row : r.table)
    table.push_back({{"n", row.n},
                     {"h", row.h},
                     {"dt", row.dt},
                     {"max_discrepancy", row.max_discrepancy},
                     {"l2_discrepancy", row.l2_discrepancy},
                     {"aligned_discrepancy", row.aligned_discrepancy},
                     {"max_gauge_phase", row.max_gauge_phase},
                     {"decay_ok", row.decay_ok}});
  double worst_edge = 0.0;
  for (const auto& m : r.monitors)
    if (m.global_max > 0.0) worst_edge = std::max(worst_edge, m.edge_max / m.global_max);
  return {{"kind", "crosscheck"},
          {"flagged", r.flagged},
          {"equivalence_claimed", !r.flagged},
          {"observed_order", r.observed_order},
          {"finest_max_discrepancy", r.max_discrepancy.empty() ? 0.0 : *std::max_element(r.max_discrepancy.begin(), r.max_discrepancy.end())},
          {"worst_edge_ratio", worst_edge},
          {"table", table}};
}

json to_json(const IdentityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"name", row.name}, {"max_residual", row.max_residual}, {"relative", row.relative}});
  return {{"kind", "identities"}, {"skipped", r.skipped}, {"valid_count", r.valid_count}, {"rows", rows}};
}

json to_json(const HolonomyStudy& s) {
  auto levels = [](const std::vector<HolonomyLevel>& v) {
    json a = json::array();
    for (const auto& l : v)
      a.push_back({{"n", l.n},
                   {"h", l.h},
                   {"dt", l.dt},
                   {"max_defect", l.stats.max_defect},
                   {"mean_defect", l.stats.mean_defect},
                   {"plaquettes", l.stats.plaquettes}});
    return a;
  };
  return {{"kind", "holonomy"},
          {"positive_order", s.positive_order},
          {"negative_order", s.negative_order},
          {"separation", s.positive_order - s.negative_order},
          {"positive", levels(s.positive)},
          {"negative", levels(s.negative)}};
}

json to_json(const WeakResidualReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"dt", l.dt}, {"substeps", l.substeps}, {"mean", l.mean}, {"std_error", l.std_error}});
  return {{"kind", "weak_residual"},
          {"levels", levels},
          {"within_band", r.within_band},
          {"decreasing", r.decreasing}};
}

json to_json(const CovarianceReport& r) {
  return {{"t", r.t},
          {"samples", r.samples},
          {"monte_carlo", r.monte_carlo},
          {"formula", r.formula},
          {"half_width", r.half_width},
          {"mc_half_width", r.mc_half_width},
          {"agrees", r.agrees()}};
}

std::string aligned_table(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < std::min(row.size(), width.size()); ++c)
      width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      out << (c ? "  " : "") << std::string(width[c] - cell.size(), ' ') << cell;
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

std::string to_text(const CrossCheckReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : r.table)
    rows.push_back({std::to_string(l.n), sci(l.h), sci(l.dt), sci(l.max_discrepancy),
                    sci(l.aligned_discrepancy), sci(l.max_gauge_phase), l.decay_ok ? "ok" : "FAIL"});
  std::string s = aligned_table({"n", "h", "dt", "max|H(u)-q|", "aligned", "phase", "decay"}, rows);
  s += "observed order: " + fixed2(r.observed_order) + (r.flagged ? "  (flagged: decay monitor failed)\n" : "\n");
  return s;
}

std::string to_text(const IdentityReport& r) {
  if (r.skipped) return "identity suite skipped: no node above the curvature threshold\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : r.rows) rows.push_back({row.name, sci(row.max_residual), row.relative ? "relative" : "absolute"});
  return aligned_table({"identity", "max residual", "kind"}, rows);
}

std::string to_text(const HolonomyStudy& s) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < s.positive.size(); ++i)
    rows.push_back({std::to_string(s.positive[i].n), sci(s.positive[i].h), sci(s.positive[i].dt),
                    sci(s.positive[i].stats.max_defect),
                    i < s.negative.size() ? sci(s.negative[i].stats.max_defect) : ""});
  std::string t = aligned_table({"n", "h", "dt", "solution", "frozen q"}, rows);
  t += "orders: solution " + fixed2(s.positive_order) + ", frozen " + fixed2(s.negative_order) + "\n";
  return t;
}

std::string to_text(const WeakResidualReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : r.levels)
    for (std::size_t i = 0; i < l.mean.size(); ++i)
      rows.push_back({sci(l.dt), std::to_string(i), sci(l.mean[i]), sci(l.std_error[i]),
                      fixed2(l.std_error[i] > 0 ? std::abs(l.mean[i]) / l.std_error[i] : 0.0)});
  return aligned_table({"dt", "phi", "mean R", "stderr", "|mean|/stderr"}, rows);
}

std::string to_text(const std::vector<CovarianceReport>& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.size(); ++i)
    rows.push_back({std::to_string(i), sci(r[i].monte_carlo), sci(r[i].formula), sci(r[i].half_width),
                    r[i].agrees() ? "yes" : "no"});
  return aligned_table({"pair", "monte carlo", "formula", "3 sigma", "agrees"}, rows);
}

}  // namespace hlab
