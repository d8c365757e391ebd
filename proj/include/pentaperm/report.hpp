#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentaperm/families.hpp"
#include "pentaperm/identities.hpp"
#include "pentaperm/qm_equiv.hpp"

namespace pentaperm {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv, Pretty };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "pretty") return ReportFormat::Pretty;
  fail(Errc::ParseError, "unknown format: " + s);
}

// Elapsed times are rounded to a fixed precision so CSV and JSON agree.
inline double round_ms(double v) { return static_cast<double>(static_cast<long long>(v * 1000.0)) / 1000.0; }

inline ordered_json to_json(const VerifyRow& r) {
  ordered_json j;
  j["family"] = r.family;
  j["m"] = r.m;
  j["k"] = r.k ? ordered_json(*r.k) : ordered_json(nullptr);
  j["i"] = r.i ? ordered_json(*r.i) : ordered_json(nullptr);
  j["predicted"] = r.predicted ? ordered_json(*r.predicted) : ordered_json(nullptr);
  j["actual"] = r.actual;
  j["agree"] = r.agree ? ordered_json(*r.agree) : ordered_json(nullptr);
  j["witness_x1"] = r.witness_x1 ? ordered_json(*r.witness_x1) : ordered_json(nullptr);
  j["witness_x2"] = r.witness_x2 ? ordered_json(*r.witness_x2) : ordered_json(nullptr);
  j["elapsed_ms"] = round_ms(r.elapsed_ms);
  return j;
}

inline ordered_json to_json(const ConjectureRow& r) {
  ordered_json j;
  j["family"] = r.family;
  j["m"] = r.m;
  j["k"] = r.k;
  j["gcd"] = r.gcd_val;
  j["predicted"] = r.predicted;
  j["actual"] = r.actual;
  j["agree"] = r.agree;
  j["witness_x1"] = r.witness_x1 ? ordered_json(*r.witness_x1) : ordered_json(nullptr);
  j["witness_x2"] = r.witness_x2 ? ordered_json(*r.witness_x2) : ordered_json(nullptr);
  j["elapsed_ms"] = round_ms(r.elapsed_ms);
  return j;
}

inline ordered_json to_json(const IdentityResult& r) {
  ordered_json j;
  j["identity"] = r.identity;
  j["m"] = r.m;
  j["trials"] = r.trials;
  j["passed"] = r.skipped_reason.empty() ? ordered_json(r.passed) : ordered_json(nullptr);
  j["skipped_reason"] = r.skipped_reason.empty() ? ordered_json(nullptr) : ordered_json(r.skipped_reason);
  j["counterexample_a"] = r.counterexample_a ? ordered_json(*r.counterexample_a) : ordered_json(nullptr);
  return j;
}

inline ordered_json qm_to_json(const QMReport& r, const std::string& f_id, const std::string& g_id,
                               int m, const ExtCtx& ctx) {
  ordered_json j;
  j["f_id"] = f_id;
  j["g_id"] = g_id;
  j["m"] = m;
  j["verdict"] = verdict_name(r.verdict);
  j["admissible_d"] = r.admissible_d;
  j["alpha"] = r.cert ? ordered_json(ctx.hex(r.cert->alpha)) : ordered_json(nullptr);
  j["gamma"] = r.cert ? ordered_json(ctx.hex(r.cert->gamma)) : ordered_json(nullptr);
  return j;
}

namespace detail {

inline std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

}  // namespace detail

// One JSON object per line (JSON Lines) / fixed-column CSV / aligned table.
class ReportWriter {
 public:
  explicit ReportWriter(ReportFormat fmt) : fmt_(fmt) {}

  void add(ordered_json row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& os) const {
    if (rows_.empty()) return;
    switch (fmt_) {
      case ReportFormat::Json:
        for (const auto& r : rows_) os << r.dump() << "\n";
        break;
      case ReportFormat::Csv: {
        bool first = true;
        for (auto it = rows_.front().begin(); it != rows_.front().end(); ++it) {
          if (!first) os << ",";
          os << it.key();
          first = false;
        }
        os << "\n";
        for (const auto& r : rows_) {
          first = true;
          for (auto it = r.begin(); it != r.end(); ++it) {
            if (!first) os << ",";
            os << detail::csv_cell(it.value());
            first = false;
          }
          os << "\n";
        }
        break;
      }
      case ReportFormat::Pretty: {
        std::vector<size_t> widths;
        std::vector<std::vector<std::string>> cells;
        std::vector<std::string> header;
        for (auto it = rows_.front().begin(); it != rows_.front().end(); ++it)
          header.push_back(it.key());
        cells.push_back(header);
        for (const auto& r : rows_) {
          std::vector<std::string> line;
          for (auto it = r.begin(); it != r.end(); ++it) {
            auto s = detail::csv_cell(it.value());
            line.push_back(s.empty() ? "-" : s);
          }
          cells.push_back(std::move(line));
        }
        widths.assign(header.size(), 0);
        for (const auto& line : cells)
          for (size_t i = 0; i < line.size() && i < widths.size(); ++i)
            widths[i] = std::max(widths[i], line[i].size());
        for (const auto& line : cells) {
          for (size_t i = 0; i < line.size(); ++i)
            os << std::left << std::setw(static_cast<int>(widths[i]) + 2) << line[i];
          os << "\n";
        }
        break;
      }
    }
  }

 private:
  ReportFormat fmt_;
  std::vector<ordered_json> rows_;
};

}  // namespace pentaperm
