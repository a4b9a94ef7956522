#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qmono/figures.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/vendor_json.hpp"

namespace qmono {

/// Shortest round-trip decimal representation, independent of the locale.
std::string format_number(double v);

nlohmann::json to_json(const MeasureValue& v);
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const FigureData& fig);
nlohmann::json to_json(const std::vector<CounterexampleCheck>& checks);

inline constexpr const char* kAuditCsvHeader = "label,nu,bound_id,lhs,rhs_low,rhs_high,margin,verdict";

/// One row per nu x bound; `with_header` prepends kAuditCsvHeader.
void write_csv(std::ostream& os, const AuditReport& report, bool with_header = true);
void write_csv(std::ostream& os, const FigureData& fig);

} // namespace qmono
