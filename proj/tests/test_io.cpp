#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swallowkit/io.hpp"

namespace sk = swallowkit;
namespace fs = std::filesystem;

namespace {

const fs::path kGerms = SWALLOWKIT_GERMS;

struct CliRun {
    int code;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "swallowkit_io_test.out";
    const std::string cmd = std::string(SWALLOWKIT_CLI) + " " + args + " > " + log.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ostringstream os;
    os << std::ifstream(log).rdbuf();
    return {WEXITSTATUS(status), os.str()};
}

std::string germ(const char* name) { return (kGerms / name).string(); }

}  // namespace

TEST(GermSpec, SwallowtailData) {
    const sk::GermSpec s = sk::load_germ_spec(kGerms / "planar_swallowtail.json");
    ASSERT_EQ(s.kind, sk::GermKind::Swallowtail);
    const sk::MapGerm g = sk::germ_of(s);
    EXPECT_TRUE(sk::polynomially_equal(*g.f.expr, sk::parse_vec("(u^2 + 2*v, u^3 + 3*u*v, v^2)")));
}

TEST(GermSpec, AsymptoticAndTupleForms) {
    const sk::GermSpec s = sk::parse_germ_spec(
        R"j({"kind": "asymptotic-data", "xi": "(1, u, u^2)", "q": 0.1, "r": [0, 0, "0"], "at": [0, 0]})j");
    ASSERT_TRUE(s.asymptotic);
    EXPECT_DOUBLE_EQ(sk::value(s.asymptotic->q.f, 0.3, 0.0), 0.1);
    EXPECT_TRUE(sk::classify(sk::germ_of(s)).is_swallowtail);
}

TEST(GermSpec, Errors) {
    EXPECT_THROW(sk::parse_germ_spec("{\"kind\": "), sk::ParseError);
    EXPECT_THROW(sk::parse_germ_spec(R"({"xi": ["1","u","0"]})"), sk::ParseError);
    EXPECT_THROW(sk::parse_germ_spec(R"({"kind": "mystery"})"), sk::ParseError);
    EXPECT_THROW(sk::parse_germ_spec(R"({"kind": "raw-germ", "f": ["u", "v"]})"), sk::ParseError);
    EXPECT_THROW(sk::parse_germ_spec(R"({"kind": "raw-germ", "f": ["u", "v", "u*("]})"), sk::ParseError);
    EXPECT_THROW(sk::parse_germ_spec(R"({"kind": "raw-germ", "f": ["u", "v", "0"], "a": "one"})"), sk::ParseError);
    EXPECT_THROW(sk::germ_of(sk::parse_germ_spec(R"({"kind": "curve", "gamma": ["u^2", "u^3", "0"]})")),
                 sk::PreconditionError);
}

TEST(Json, TwelveSignificantDigits) {
    EXPECT_EQ(sk::number(1.0 / 3.0).dump(), "0.333333333333");
    EXPECT_EQ(sk::number(-0.0).dump(), "0.0");
    EXPECT_TRUE(sk::number(NAN).is_null());
    EXPECT_EQ(sk::number(6.0).dump(), "6.0");
}

TEST(Json, ReportFieldOrderIsStable) {
    const sk::SingularityReport r = sk::classify(sk::germ_of(sk::load_germ_spec(kGerms / "planar_swallowtail.json")));
    const sk::Json j = sk::to_json(r);
    EXPECT_EQ(j.begin().key(), "at");
    EXPECT_EQ(sk::dump(j), sk::dump(sk::to_json(r)));
    EXPECT_EQ(j["sigma0_S"], -1);
    EXPECT_EQ(j["sigma_S"], 1);
}

TEST(Mesh, VertexAndFaceCounts) {
    const sk::MapGerm g = sk::germ_of(sk::load_germ_spec(kGerms / "planar_swallowtail.json"));
    const sk::MeshGrid m = sk::sample_germ(g, {-2.0 / 3, 2.0 / 3, -1.0 / 3, 1.0 / 3}, 12, 7);
    std::ostringstream os;
    sk::write_obj(os, m);
    const std::string text = os.str();
    int v = 0, f = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) ++f;
    }
    EXPECT_EQ(v, 13 * 8);
    EXPECT_EQ(f, 12 * 7);
    EXPECT_THROW(sk::sample_germ(g, {}, 0, 5), sk::PreconditionError);
}

TEST(Mesh, CurvatureChannelLeavesSingularVerticesEmpty) {
    const sk::MapGerm g = sk::germ_of(sk::load_germ_spec(kGerms / "planar_swallowtail.json"));
    const sk::MeshGrid m = sk::sample_germ(g, {-0.2, 0.2, -0.2, 0.2}, 2, 2);
    std::ostringstream os;
    sk::curvature_table(g, m).write(os);
    std::istringstream in(os.str());
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "u,v,x,y,z,K_a,K_ext,H_E");
    int empty = 0;
    while (std::getline(in, line))
        if (line.find(",,") != std::string::npos) ++empty;
    EXPECT_EQ(empty, 3);  // the three vertices on v = 0
}

TEST(Mesh, OutsideTheModelDomain) {
    const sk::MapGerm g = sk::germ_of(sk::load_germ_spec(kGerms / "planar_swallowtail_hyperbolic.json"));
    EXPECT_THROW(sk::sample_germ(g, {-3, 3, -3, 3}, 4, 4), sk::DomainError);
}

TEST(Cli, ClassifyCorpus) {
    const CliRun a = run_cli("classify " + germ("planar_swallowtail.json") + " --at 0,0");
    ASSERT_EQ(a.code, 0);
    const sk::Json j = sk::Json::parse(a.out);
    EXPECT_EQ(j["is_swallowtail"], true);
    EXPECT_EQ(j["sigma0_S"], -1);
    EXPECT_EQ(j["sigma_S"], 1);
    const CliRun b = run_cli("classify " + germ("planar_frontal.json"));
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(sk::Json::parse(b.out)["is_swallowtail"], false);
}

TEST(Cli, Deterministic) {
    const CliRun a = run_cli("invariants " + germ("positive.json"));
    const CliRun b = run_cli("invariants " + germ("positive.json"));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExitCodes) {
    const fs::path bad = fs::temp_directory_path() / "swallowkit_bad.json";
    std::ofstream(bad) << "{\"kind\": ";
    EXPECT_EQ(run_cli("classify " + bad.string()).code, 2);
    EXPECT_EQ(run_cli("classify " + germ("standard.json")).code, 3);
    EXPECT_EQ(run_cli("classify " + germ("cusp_planar.json")).code, 4);
    EXPECT_EQ(run_cli("mesh " + germ("planar_swallowtail.json") + " --res 0,5 --out /tmp/swallowkit_never.obj").code, 2);
    EXPECT_EQ(run_cli("deform " + germ("positive.json") + " " + germ("negative.json") + " --recipe D --keep-sign").code, 4);
    EXPECT_EQ(run_cli("deform " + germ("planar_swallowtail.json") + " " + germ("planar_frontal.json") + " --recipe any").code, 4);
    EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST(Cli, MeshWritesObjAndCsv) {
    const fs::path obj = fs::temp_directory_path() / "swallowkit_planar_swallowtail.obj";
    const CliRun r = run_cli("mesh " + germ("planar_swallowtail.json") + " --domain=-0.6667,0.6667,-0.3333,0.3333 --res 8,4 --out " +
                          obj.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(sk::Json::parse(r.out)["vertices"], 45);
    EXPECT_TRUE(fs::exists(fs::path(obj).replace_extension(".csv")));
}

TEST(Cli, CuspCommands) {
    const CliRun c = run_cli("cusp " + germ("cusp_generic.json") + " --action classify");
    ASSERT_EQ(c.code, 0);
    EXPECT_EQ(sk::Json::parse(c.out)["cusp"]["kind"], "generic-cusp");
    const CliRun p = run_cli("cusp " + germ("planar_swallowtail.json") + " --action classify");
    ASSERT_EQ(p.code, 0);
    EXPECT_EQ(sk::Json::parse(p.out)["cusp"]["kind"], "non-generic-cusp");
    const CliRun n = run_cli("cusp " + germ("cusp_generic.json") + " --action normalize");
    ASSERT_EQ(n.code, 0);
    for (const auto& s : sk::Json::parse(n.out)["samples"]) EXPECT_NEAR(s["norm"].get<double>(), 1.0, 1e-8);
}

TEST(Cli, Frenet) {
    const CliRun r = run_cli("frenet --kappa 1 --tau 0 --range=-1,1 --samples 3");
    ASSERT_EQ(r.code, 0);
    const sk::Json j = sk::Json::parse(r.out);
    // Unit circle through the origin with tangent e1 and normal e2.
    EXPECT_NEAR(j["samples"][2]["curve"][0].get<double>(), std::sin(1.0), 1e-9);
    EXPECT_NEAR(j["samples"][2]["curve"][1].get<double>(), 1.0 - std::cos(1.0), 1e-9);
}
