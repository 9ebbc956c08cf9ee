#pragma once

// JSON -> MarketParams loader for the command line tool. Scalar entries
// are expanded: a number for `r` or `b` means time-constant (and
// asset-constant for b); `sigma` accepts a number or flat array (diagonal
// loadings, n == d), a matrix, or one matrix per period.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpmv/errors.hpp"
#include "mpmv/market.hpp"

namespace mpmv::cli {

using nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("config file '" + path + "': " + e.what());
    }
}

inline MarketParams market_from_json(const json& j) {
    if (!j.is_object()) throw DataError("market config must be a JSON object");
    for (const char* key : {"horizon_T", "n_assets", "d_noise", "r", "b", "sigma"})
        if (!j.contains(key)) throw DataError(std::string("market config misses key '") + key + "'");

    const int T = j.at("horizon_T").get<int>();
    const int n = j.at("n_assets").get<int>();
    const int d = j.at("d_noise").get<int>();
    if (T < 1 || n < 1 || d < 1)
        throw DataError("horizon_T, n_assets and d_noise must all be >= 1");

    std::vector<double> r(T);
    const json& jr = j.at("r");
    if (jr.is_number()) {
        std::fill(r.begin(), r.end(), jr.get<double>());
    } else if (jr.is_array() && static_cast<int>(jr.size()) == T) {
        for (int s = 0; s < T; ++s) r[s] = jr.at(s).get<double>();
    } else {
        throw DataError("'r' must be a number or an array of horizon_T numbers");
    }

    std::vector<Vec> b(T);
    const json& jb = j.at("b");
    if (jb.is_number()) {
        for (auto& v : b) v = Vec::Constant(n, jb.get<double>());
    } else if (jb.is_array() && !jb.empty() && jb.front().is_number()) {
        if (static_cast<int>(jb.size()) != n)
            throw DataError("'b' array must have n_assets entries");
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = jb.at(i).get<double>();
        for (auto& e : b) e = v;
    } else if (jb.is_array() && static_cast<int>(jb.size()) == T) {
        for (int s = 0; s < T; ++s) {
            const json& row = jb.at(s);
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw DataError("'b' per-period rows must have n_assets entries");
            Vec v(n);
            for (int i = 0; i < n; ++i) v[i] = row.at(i).get<double>();
            b[s] = v;
        }
    } else {
        throw DataError("'b' must be a number, an n_assets array or horizon_T rows of n_assets");
    }

    auto matrix_from = [n, d](const json& m) {
        Mat sg(n, d);
        if (static_cast<int>(m.size()) != n) throw DataError("'sigma' matrix must have n_assets rows");
        for (int i = 0; i < n; ++i) {
            const json& row = m.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != d)
                throw DataError("'sigma' rows must have d_noise entries");
            for (int k = 0; k < d; ++k) sg(i, k) = row.at(k).get<double>();
        }
        return sg;
    };

    std::vector<Mat> sigma(T);
    const json& js = j.at("sigma");
    if (js.is_number()) {
        if (n != d) throw DataError("scalar 'sigma' needs n_assets == d_noise");
        Mat sg = Mat::Identity(n, d) * js.get<double>();
        for (auto& e : sigma) e = sg;
    } else if (js.is_array() && !js.empty() && js.front().is_number()) {
        if (n != d || static_cast<int>(js.size()) != n)
            throw DataError("diagonal 'sigma' array needs n_assets == d_noise entries");
        Mat sg = Mat::Zero(n, d);
        for (int i = 0; i < n; ++i) sg(i, i) = js.at(i).get<double>();
        for (auto& e : sigma) e = sg;
    } else if (js.is_array() && !js.empty() && js.front().is_array() &&
               !js.front().empty() && js.front().front().is_number()) {
        const Mat sg = matrix_from(js);
        for (auto& e : sigma) e = sg;
    } else if (js.is_array() && static_cast<int>(js.size()) == T) {
        for (int s = 0; s < T; ++s) sigma[s] = matrix_from(js.at(s));
    } else {
        throw DataError("'sigma' must be a number, a diagonal, a matrix or one matrix per period");
    }

    const double delta = j.value("delta", 1e-10);
    MarketParams params = MarketParams::from_schedules(std::move(r), std::move(b),
                                                       std::move(sigma), delta);
    if (params.n_assets != n || params.d_noise != d)
        throw DataError("schedule shapes disagree with n_assets/d_noise");
    return params;
}

inline MarketParams load_market(const std::string& path) {
    return market_from_json(load_json_file(path));
}

}  // namespace mpmv::cli
