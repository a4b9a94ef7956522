#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "vendor_json.hpp"
#include "qmono/tensor.hpp"

namespace qmono {

using AnyState = std::variant<PureState, DensityOperator>;

// Wire format:
//   pure:    {"dims":[2,2,2], "amplitudes":[[re,im], ...]}
//   density: {"dims":[...],   "matrix":[[[re,im], ...], ...]}
// Amplitudes and matrix entries follow the big-endian register index.

nlohmann::json to_json(const PureState& psi);
nlohmann::json to_json(const DensityOperator& rho);
nlohmann::json to_json(const AnyState& state);

/// Throws InputError on structural problems and ValidationError when the
/// decoded state violates its invariants.
AnyState state_from_json(const nlohmann::json& j);
AnyState load_state(const std::filesystem::path& path);

} // namespace qmono
