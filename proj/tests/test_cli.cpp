#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include <doctest.h>

#include "qpr/documents.hpp"

using qpr::Json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" QPR_CLI_PATH "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_tmp(const std::string& name, const std::string& text) {
    const std::string path = std::string(QPR_TEST_TMP) + "/" + name;
    std::ofstream(path) << text;
    return "'" + path + "'";
}

double value(const Json& tagged) { return tagged.at("value").get<double>(); }

/// Every object carrying "value" is mode-tagged, and no bare float sits outside the schema echoes.
bool all_tagged(const Json& j, const std::string& key = "") {
    if (j.is_object()) {
        if (j.contains("value")) return j.contains("mode");
        for (const auto& [k, v] : j.items())
            if (!all_tagged(v, k)) return false;
        return true;
    }
    if (j.is_array()) {
        for (const auto& v : j)
            if (!all_tagged(v, key)) return false;
        return true;
    }
    if (j.is_number_float()) return key == "bloch" || key == "re" || key == "im";
    return true;
}

const char* kStabilizer = R"({"version": 1, "dim": 2, "bases": [
  {"bloch": [1, 0, 0]}, {"bloch": [0, 1, 0]}, {"bloch": [0, 0, 1]}]})";

}  // namespace

TEST_CASE("certify the stabilizer bases") {
    const auto path = write_tmp("stab.json", kStabilizer);
    const auto r = run("certify " + path);
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["verdict"] == "feasible");
    CHECK(j["mode"] == "exact");
    REQUIRE(j["witness"]["q"].size() == 8);
    for (const auto& [label, q] : j["witness"]["q"].items()) {
        CHECK(q["mode"] == "exact");
        CHECK(q["value"] == "1/4");
    }
    CHECK(j["witness_verified"] == true);
    CHECK(j["frame_verified"] == true);
    CHECK(j["input_sha256"] == qpr::sha256_hex(kStabilizer));
    CHECK(all_tagged(j));
    CHECK(qpr::certificate_from_json(j).verdict == "feasible");

    const auto out = std::string(QPR_TEST_TMP) + "/stab_cert.json";
    REQUIRE(run("certify " + path + " --out '" + out + "'").code == 0);
    std::ifstream in(out);
    CHECK(Json::parse(in) == j);
}

TEST_CASE("certify the icosahedron is infeasible") {
    const auto fam = run("family icosahedron");
    REQUIRE(fam.code == 0);
    const auto path = write_tmp("ico.json", fam.out);
    const auto r = run("certify " + path);
    CHECK(r.code == 1);
    const auto j = Json::parse(r.out);
    CHECK(j["verdict"] == "infeasible");
    CHECK_FALSE(j["witness"]["farkas"].empty());
    CHECK(j["witness_verified"] == true);
    CHECK(all_tagged(j));
}

TEST_CASE("malformed input exits 2") {
    CHECK(run("certify " + write_tmp("bad.json", "{\"bases\": [")).code == 2);
    CHECK(run("certify " + write_tmp("bad2.json", R"({"bases": [{"bloch": [0, 0, 0.5]}]})")).code == 2);
    CHECK(run("certify /nonexistent/qpr.json").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("d3 at the magic angle is mutually orthogonal") {
    const auto r = run("family d3 --theta 0.9553");
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["family"] == "d3");
    CHECK(all_tagged(j));
    const auto& b = j["bases"];
    REQUIRE(b.size() == 3);
    for (int a = 0; a < 3; ++a)
        for (int c = a + 1; c < 3; ++c) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += b[a]["bloch"][k].get<double>() * b[c]["bloch"][k].get<double>();
            CHECK(std::abs(dot) < 1e-4);
        }
}

TEST_CASE("cuboid at the cube angles gives the cube diagonals") {
    const auto r = run("family cuboid --theta 0.9553 --phi 0.7854");
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    REQUIRE(j["bases"].size() == 4);
    const double s = 1 / std::sqrt(3.0);
    for (const auto& b : j["bases"])
        for (int k = 0; k < 3; ++k) CHECK(std::abs(std::abs(b["bloch"][k].get<double>()) - s) < 1e-4);
}

TEST_CASE("emit-frame past the d3 threshold exits 2") {
    CHECK(run("family d3 --theta 1.5708 --emit-frame").code == 2);
    const auto ok = run("family d3 --theta 0.9 --emit-frame");
    REQUIRE(ok.code == 0);
    const auto j = Json::parse(ok.out);
    CHECK(j["frame"].size() == 8);
    CHECK(all_tagged(j));
}

TEST_CASE("threshold scans") {
    const auto d3 = run("scan d3 --param theta");
    REQUIRE(d3.code == 0);
    const auto j = Json::parse(d3.out);
    CHECK(std::abs(value(j["sin2_boundary"]) - 8.0 / 9) < 1e-8);
    CHECK(all_tagged(j));

    const auto c2 = run("scan c2 --param phi --theta 1.0471975511965976");
    REQUIRE(c2.code == 0);
    const auto k = Json::parse(c2.out);
    CHECK(std::abs(value(k["cos_boundary"]) - std::sqrt(3.0) / 2) < 1e-8);

    CHECK(run("scan d3 --param theta --lo 0.5 --hi 1.0").code == 2);
}

TEST_CASE("simulate circuits") {
    auto r = run("simulate --initial z+ --circuit H --measure x");
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(value(j["ontic"][0]) == doctest::Approx(1.0));
    CHECK(value(j["ontic"][1]) == doctest::Approx(0.0));
    CHECK(j["agree"] == true);
    CHECK(all_tagged(j));

    r = run("simulate --initial z+ --circuit 'H P H' --measure z");
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["agree"] == true);

    r = run("simulate --family d3 --theta 0.8 --initial b1+ --circuit GAMMA --measure b2");
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["agree"] == true);

    CHECK(run("simulate --initial z+ --circuit FOO --measure x").code == 2);
}

TEST_CASE("verify is deterministic for a seed") {
    const auto a = run("verify --suite qubit --trials 20 --seed 11");
    const auto b = run("verify --suite qubit --trials 20 --seed 11");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = Json::parse(a.out);
    CHECK(j["all_passed"] == true);
    CHECK(j["criteria"].size() == 11);
    CHECK(all_tagged(j));
}

TEST_CASE("QPR_MODE selects the default mode") {
    const auto path = write_tmp("stab_mode.json", kStabilizer);
    const auto f = run("certify " + path, "QPR_MODE=float");
    REQUIRE(f.code == 0);
    CHECK(Json::parse(f.out)["mode"] == "float");
    const auto e = run("certify " + path + " --mode exact", "QPR_MODE=float");
    REQUIRE(e.code == 0);
    CHECK(Json::parse(e.out)["mode"] == "exact");
    CHECK(run("certify " + path, "QPR_MODE=bogus").code == 2);
}
