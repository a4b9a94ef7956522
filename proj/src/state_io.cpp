#include "qmono/state_io.hpp"

#include <fstream>

namespace qmono {

namespace {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError("complex numbers must be encoded as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Dims dims_from_json(const json& j) {
    if (!j.contains("dims") || !j["dims"].is_array()) throw InputError("state JSON needs a \"dims\" array");
    std::vector<int> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer()) throw InputError("\"dims\" entries must be integers");
        dims.push_back(d.get<int>());
    }
    try {
        return Dims(std::move(dims));
    } catch (const ValidationError& e) {
        throw InputError(e.what());
    }
}

} // namespace

json to_json(const PureState& psi) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) amps.push_back(complex_to_json(psi.amplitudes()(i)));
    return json{{"dims", psi.dims().values()}, {"amplitudes", std::move(amps)}};
}

json to_json(const DensityOperator& rho) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
        rows.push_back(std::move(row));
    }
    return json{{"dims", rho.dims().values()}, {"matrix", std::move(rows)}};
}

json to_json(const AnyState& state) {
    return std::visit([](const auto& s) { return to_json(s); }, state);
}

AnyState state_from_json(const json& j) {
    if (!j.is_object()) throw InputError("state JSON must be an object");
    Dims dims = dims_from_json(j);
    const auto n = static_cast<Eigen::Index>(dims.total());
    if (j.contains("amplitudes")) {
        const auto& a = j["amplitudes"];
        if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n) {
            throw InputError("\"amplitudes\" must hold " + std::to_string(n) + " entries");
        }
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_from_json(a[static_cast<std::size_t>(i)]);
        return PureState(std::move(dims), std::move(v));
    }
    if (j.contains("matrix")) {
        const auto& m = j["matrix"];
        if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != n) {
            throw InputError("\"matrix\" must have " + std::to_string(n) + " rows");
        }
        Matrix rho(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& row = m[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw InputError("\"matrix\" row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
            }
            for (Eigen::Index c = 0; c < n; ++c) rho(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
        return DensityOperator(std::move(dims), std::move(rho));
    }
    throw InputError("state JSON needs either \"amplitudes\" or \"matrix\"");
}

AnyState load_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open state file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("cannot parse " + path.string() + ": " + e.what());
    }
    return state_from_json(j);
}

} // namespace qmono
