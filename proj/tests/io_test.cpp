#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "dnastore/io.hpp"

using namespace dnastore;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Number12, Rounding) {
    EXPECT_EQ(number12(1.0 / 3.0).dump(), "0.333333333333");
    EXPECT_EQ(number12(54430.8416123456789).get<double>(), 54430.8416123);
    EXPECT_TRUE(number12(std::nan("")).is_null());
    EXPECT_TRUE(number12(INFINITY).is_null());
}

TEST(CodeSpec, Builtins) {
    const auto f3 = parse_code_spec("f3-regen-example");
    EXPECT_EQ(f3.b, 2u);
    EXPECT_EQ(f3.field->order(), 3u);
    const auto par = parse_code_spec("parity:5,2");
    EXPECT_EQ(par.M, 5u);
    EXPECT_EQ(par.r, 1u);
    const auto rs = parse_code_spec("rs:5,2,4");
    EXPECT_EQ(rs.field->order(), 4u);
    EXPECT_EQ(rs.field->degree(), 2u);
    EXPECT_EQ(code_of([] { parse_code_spec("rs:5,2"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_code_spec("rs:5,x,4"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_code_spec("parity:3,6"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_code_spec("rs:8,2,4"); }), ErrorCode::FieldTooSmall);
    EXPECT_EQ(code_of([] { parse_code_spec("/nonexistent/code.json"); }), ErrorCode::ParseError);
}

TEST(CodeSpec, JsonRoundTrip) {
    for (const auto* token : {"f3-regen-example", "rs:5,2,4", "parity:3,2", "rs:6,3,9"}) {
        const auto code = parse_code_spec(token);
        const auto back = code_from_json(code_to_json(code));
        EXPECT_EQ(back.generator, code.generator) << token;
        EXPECT_EQ(back.field->modulus(), code.field->modulus());
        EXPECT_EQ(back.M, code.M);
        EXPECT_EQ(back.r, code.r);
        EXPECT_EQ(back.b, code.b);
        EXPECT_EQ(back.name, code.name);
    }
}

TEST(CodeSpec, FromFile) {
    const auto path = std::filesystem::temp_directory_path() / "dnastore_io_code.json";
    {
        std::ofstream f(path);
        f << R"({"name": "rep3", "field": {"p": 2}, "M": 3, "r": 2, "generator": [[1, 1, 1]]})";
    }
    const auto code = parse_code_spec(path.string());
    EXPECT_EQ(code.name, "rep3");
    EXPECT_EQ(code.b, 1u);
    EXPECT_EQ(code.message_length(), 1u);
    {
        std::ofstream f(path);
        f << R"({"field": {"p": 2}, "M": 3, "r": 2, "generator": [[1, 2, 1]]})";
    }
    EXPECT_EQ(code_of([&] { parse_code_spec(path.string()); }), ErrorCode::FieldMismatch);
    {
        std::ofstream f(path);
        f << R"({"field": {"p": 2}, "M": 3, "r": 1, "generator": [[1, 1, 0], [1, 1, 0]]})";
    }
    EXPECT_EQ(code_of([&] { parse_code_spec(path.string()); }), ErrorCode::RankDeficientGenerator);
    {
        std::ofstream f(path);
        f << R"({"field": {"p": 2}, "M": 3,)";
    }
    EXPECT_EQ(code_of([&] { parse_code_spec(path.string()); }), ErrorCode::ParseError);
    {
        std::ofstream f(path);
        f << R"({"field": {"p": 2}, "M": "three", "r": 1, "generator": []})";
    }
    EXPECT_EQ(code_of([&] { parse_code_spec(path.string()); }), ErrorCode::ParseError);
    std::filesystem::remove(path);
}

TEST(Report, F3Json) {
    const auto code = make_f3_regen_example();
    const auto j = report_to_json(analyze(code, 0), code.name);
    EXPECT_EQ(j["p"], 1);
    EXPECT_EQ(j["alpha_star"], 2);
    EXPECT_EQ(j["beta_star"], 2);
    EXPECT_EQ(j["b_delta"].dump(), "[1,6,15,18,2,0,0]");
    EXPECT_EQ(j["maximal_bad_sets"].size(), 2u);
    const std::string sets = j["maximal_bad_sets"].dump();
    EXPECT_NE(sets.find("[[1,2],[1,3],[1,4],[2,2]]"), std::string::npos) << sets;
    EXPECT_NE(sets.find("[[1,2],[2,2],[2,3],[2,4]]"), std::string::npos) << sets;
    EXPECT_DOUBLE_EQ(j["bound"]["log_coeff"].get<double>(), 0.5);
    EXPECT_DOUBLE_EQ(j["bound"]["linear_coeff"].get<double>(), 0.5);
}

TEST(Prediction, RegenGumbelIsNull) {
    const auto j = prediction_to_json(predict_regen_bound(100.0, analyze(make_f3_regen_example(), 0)));
    EXPECT_EQ(j["kind"], "upper-bound");
    EXPECT_TRUE(j["gumbel"]["mu"].is_null());
}

TEST(Csv, ZRoundTrip) {
    const auto agg = sim_scalar_mds(200, 2, 1, 40, 3);
    std::stringstream s;
    write_z_csv(s, agg);
    EXPECT_EQ(s.str().substr(0, 8), "trial,z\n");
    const auto back = read_z_csv(s);
    ASSERT_EQ(back.size(), agg.z.size());
    for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], agg.z[i], 1e-10 * (1 + std::abs(agg.z[i])));
}

TEST(Csv, SingleColumnAndErrors) {
    std::stringstream plain("0.5\n-1.25\r\n\n3\n");
    EXPECT_EQ(read_z_csv(plain), (std::vector<double>{0.5, -1.25, 3.0}));
    std::stringstream bad("trial,z\n0,1.0\n1,abc\n");
    EXPECT_EQ(code_of([&] { read_z_csv(bad); }), ErrorCode::ParseError);
}

TEST(Aggregate, JsonFields) {
    const auto agg = sim_ccp_max(5, 1, 2, 10, 77);
    const auto j = aggregate_to_json(agg);
    EXPECT_EQ(j["config"]["process"], "ccp");
    EXPECT_EQ(j["config"]["m"], 2);
    EXPECT_EQ(j["seed"], 77);
    EXPECT_TRUE(j.contains("stderr"));
    EXPECT_EQ(j["min"].get<std::uint64_t>(), agg.min);
}
