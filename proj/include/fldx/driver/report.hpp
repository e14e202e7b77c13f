#pragma once

#include "fldx/driver/pipeline.hpp"

#include "json.hpp"

namespace fldx {

inline constexpr const char *kReportSchema = "fldx-report/1";

/// A rational as a decimal string when its expansion is finite and short,
/// else as {"num", "den"}.
nlohmann::json rational_json(const Rational &r);
nlohmann::json interval_json(const RInterval &r);
nlohmann::json bounds_json(const Bounds &b);

struct ReportMeta {
  std::string file;
  std::string scenario;
  AnalysisConfig config;
};

nlohmann::json report_json(const Analysis &a, const ReportMeta &meta);
std::string report_text(const Analysis &a, const ReportMeta &meta);

/// Every assertion with the kind, computation type and carrier type of
/// each term and the type each relation is decided in.
std::string typing_text(const Prepared &p);

/// Largest magnitude in an interval.
Rational magnitude(const RInterval &r);

} // namespace fldx
