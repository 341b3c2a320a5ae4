#pragma once

// Code-spec parsing and JSON/CSV serialization of reports, predictions and
// simulation results. Positions and container indices are 1-based in every
// external format.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnastore/asymptotics.hpp"
#include "dnastore/code_analysis.hpp"
#include "dnastore/error.hpp"
#include "dnastore/finite_field.hpp"
#include "dnastore/mds_codes.hpp"
#include "dnastore/sim_engine.hpp"

namespace dnastore {

using json = nlohmann::ordered_json;

/// Rounds to 12 significant digits; NaN and infinities become null.
inline json number12(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::stod(buf);
}

namespace detail {

inline std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& token) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad number '" + part + "' in code token '" + token + "'");
        }
    }
    return out;
}

inline std::shared_ptr<const FiniteField> field_of_order(std::uint64_t q) {
    require(q >= 2 && q <= FiniteField::kMaxOrder, ErrorCode::ParseError, "field order out of range");
    for (std::uint32_t p = 2; p <= q; ++p) {
        if (q % p) continue;
        std::uint64_t rest = q;
        std::uint32_t e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        require(rest == 1, ErrorCode::ParseError, std::to_string(q) + " is not a prime power");
        return std::make_shared<const FiniteField>(FiniteField::create(p, e));
    }
    throw Error(ErrorCode::ParseError, "bad field order");
}

template <typename T>
T json_get(const json& j, const char* key) {
    require(j.contains(key), ErrorCode::ParseError, std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace detail

inline std::shared_ptr<const FiniteField> parse_field(const json& j) {
    const auto p = detail::json_get<std::uint32_t>(j, "p");
    const auto e = j.contains("e") ? detail::json_get<std::uint32_t>(j, "e") : 1u;
    std::optional<std::vector<std::uint32_t>> modulus;
    if (j.contains("modulus") && !j.at("modulus").is_null())
        modulus = detail::json_get<std::vector<std::uint32_t>>(j, "modulus");
    return std::make_shared<const FiniteField>(FiniteField::create(p, e, modulus));
}

inline json field_to_json(const FiniteField& f) {
    json j;
    j["p"] = f.characteristic();
    j["e"] = f.degree();
    if (f.degree() > 1) j["modulus"] = f.modulus();
    return j;
}

inline ArrayCodeSpec code_from_json(const json& j) {
    ArrayCodeSpec code;
    code.name = j.contains("name") ? detail::json_get<std::string>(j, "name") : std::string("custom");
    require(j.contains("field"), ErrorCode::ParseError, "missing key 'field'");
    code.field = parse_field(j.at("field"));
    code.M = detail::json_get<std::size_t>(j, "M");
    code.r = detail::json_get<std::size_t>(j, "r");
    code.b = j.contains("b") ? detail::json_get<std::size_t>(j, "b") : 1;
    const auto rows = detail::json_get<std::vector<std::vector<std::uint32_t>>>(j, "generator");
    for (const auto& row : rows)
        for (auto v : row)
            require(v < code.field->order(), ErrorCode::FieldMismatch, "generator entry outside the field");
    code.generator = FieldMatrix::from_rows(rows, *code.field);
    validate(code);
    return code;
}

inline json code_to_json(const ArrayCodeSpec& code) {
    json j;
    j["name"] = code.name;
    j["field"] = field_to_json(*code.field);
    j["M"] = code.M;
    j["r"] = code.r;
    j["b"] = code.b;
    json rows = json::array();
    for (std::size_t i = 0; i < code.generator.rows; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < code.generator.cols; ++c) row.push_back(code.generator(i, c).value);
        rows.push_back(std::move(row));
    }
    j["generator"] = std::move(rows);
    return j;
}

/// Accepts "parity:M,q", "rs:M,r,q", "f3-regen-example", or a JSON file path.
inline ArrayCodeSpec parse_code_spec(const std::string& token) {
    if (token == "f3-regen-example") return make_f3_regen_example();
    if (token.rfind("parity:", 0) == 0) {
        const auto v = detail::parse_uint_list(token.substr(7), token);
        require(v.size() == 2, ErrorCode::ParseError, "expected parity:M,q");
        return make_parity_code(v[0], detail::field_of_order(v[1]));
    }
    if (token.rfind("rs:", 0) == 0) {
        const auto v = detail::parse_uint_list(token.substr(3), token);
        require(v.size() == 3, ErrorCode::ParseError, "expected rs:M,r,q");
        return make_rs_doubly_extended(v[0], v[1], detail::field_of_order(v[2]));
    }
    std::ifstream in(token);
    require(in.good(), ErrorCode::ParseError, "cannot open code spec '" + token + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    return code_from_json(j);
}

inline json positions_to_json(PositionMask mask, std::size_t b, std::size_t p) {
    auto positions = mask_positions(mask, b, p);
    std::sort(positions.begin(), positions.end());
    json set = json::array();
    for (const auto& pos : positions) set.push_back({pos.row + 1, pos.container + 1});
    return set;
}

inline json report_to_json(const BadBlockReport& rep, const std::string& code_name) {
    json j;
    j["code"] = code_name;
    j["p"] = rep.p + 1;
    j["alpha_star"] = rep.alpha_star;
    j["beta_star"] = rep.beta_star;
    j["b_delta"] = rep.b_delta;
    j["bound"] = {{"log_coeff", number12(rep.bound_log_coeff)}, {"linear_coeff", number12(rep.bound_linear_coeff)}};
    json sets = json::array();
    for (auto mask : rep.maximal_bad_sets) sets.push_back(positions_to_json(mask, rep.b, rep.p));
    j["maximal_bad_sets"] = std::move(sets);
    return j;
}

inline json prediction_to_json(const Prediction& pr) {
    json j;
    j["kind"] = to_string(pr.kind);
    j["n"] = number12(pr.n);
    j["value"] = number12(pr.value);
    j["leading"] = number12(pr.leading);
    j["linear"] = number12(pr.linear_coeff);
    j["gumbel"] = {{"mu", number12(pr.gumbel_mu)}, {"beta", number12(pr.gumbel_beta)}};
    return j;
}

inline json config_to_json(const SimConfig& c) {
    json j;
    j["process"] = to_string(c.kind);
    j["n"] = c.n;
    switch (c.kind) {
    case ProcessKind::CcpMax:
        j["m"] = c.m;
        j["l"] = c.ell;
        break;
    case ProcessKind::ScalarMds:
        j["m"] = c.m;
        j["rho"] = c.rho;
        break;
    case ProcessKind::ArrayBlock:
        j["code"] = c.code;
        j["p"] = c.p + 1;
        break;
    }
    j["trials"] = c.trials;
    return j;
}

inline json aggregate_to_json(const SimAggregate& agg) {
    json j;
    j["config"] = config_to_json(agg.config);
    j["seed"] = agg.config.master_seed;
    j["mean"] = number12(agg.mean);
    j["stderr"] = number12(agg.std_error);
    j["variance"] = number12(agg.variance);
    j["min"] = agg.min;
    j["max"] = agg.max;
    return j;
}

inline void write_samples_csv(std::ostream& out, const SimAggregate& agg) {
    for (auto t : agg.samples) out << t << '\n';
}

inline void write_z_csv(std::ostream& out, const SimAggregate& agg) {
    out << "trial,z\n";
    char buf[32];
    for (std::size_t i = 0; i < agg.z.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", agg.z[i]);
        out << i << ',' << buf << '\n';
    }
}

/// Reads normalized values: "trial,z" rows (header optional) or one value
/// per line.
inline std::vector<double> read_z_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            out.push_back(v);
        } catch (const std::exception&) {
            if (lineno == 1) continue; // header
            throw Error(ErrorCode::ParseError, "bad sample on line " + std::to_string(lineno));
        }
    }
    return out;
}

} // namespace dnastore
