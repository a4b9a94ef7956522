#pragma once

#include <algorithm>
#include <optional>
#include <string_view>

namespace qmono {

/// Closed interval [lower, upper].
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    static Interval point(double v) { return {v, v}; }
    bool contains(double v, double slack = 0.0) const { return v >= lower - slack && v <= upper + slack; }
    double width() const { return upper - lower; }
};

enum class Method { ClosedFormPure, Wootters, SchmidtFormula, TraceNorm, ConvexRoofUpper };

std::string_view to_string(Method m);

/// A non-negative entanglement value together with how it was obtained.
/// Optimizer-derived values are upper bounds and always carry an interval.
struct MeasureValue {
    double value = 0.0;
    Method method = Method::ClosedFormPure;
    std::optional<Interval> interval;
    bool converged = true;

    bool exact() const noexcept { return !interval.has_value(); }
    Interval range() const { return interval.value_or(Interval::point(value)); }
};

inline std::string_view to_string(Method m) {
    switch (m) {
    case Method::ClosedFormPure: return "closed_form_pure";
    case Method::Wootters: return "wootters";
    case Method::SchmidtFormula: return "schmidt_formula";
    case Method::TraceNorm: return "trace_norm";
    case Method::ConvexRoofUpper: return "convex_roof_upper";
    }
    return "unknown";
}

} // namespace qmono
