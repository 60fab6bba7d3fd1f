#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(VSCHOTTKY_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string scene(const std::string& name) { return std::string(VSCHOTTKY_SCENES) + "/" + name; }

std::vector<nlohmann::json> lines(const std::string& out) {
    std::vector<nlohmann::json> v;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) v.push_back(nlohmann::json::parse(line));
    return v;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST(Cli, RankOfT4IsOneOverZ3) {
    auto r = run("rank " + scene("t4_rank.scene"));
    EXPECT_EQ(r.status, 0);
    auto j = lines(r.out).back();
    EXPECT_EQ(j["rank"], 1);
    EXPECT_EQ(j["H"], "Z₃");
    EXPECT_EQ(j["chi"], "0");
}

TEST(Cli, EnumerateCyclicHasGenusTwoRecord) {
    auto r = run("enumerate-cyclic 3 2");
    EXPECT_EQ(r.status, 0);
    bool found = false;
    for (const auto& j : lines(r.out))
        found = found || (j["d"] == 2 && j["g"] == 2 && j["n_j"] == nlohmann::json::array({3, 3}));
    EXPECT_TRUE(found);
}

TEST(Cli, BrokenScenesFailWithWitness) {
    for (const char* name : {"broken_overlap.scene", "broken_circle.scene", "broken_elliptic.scene"}) {
        auto r = run("verify " + scene(name));
        EXPECT_EQ(r.status, 1) << name;
        auto j = lines(r.out).back();
        EXPECT_EQ(j["status"], "fail");
        EXPECT_FALSE(j["witness"].get<std::string>().empty()) << name;
    }
}

TEST(Cli, MalformedSceneIsInputError) {
    auto path = temp("vschottky_bad.scene");
    std::ofstream(path) << "leaf K {\n  type T1\n  n three\n}\n";
    auto r = run("build " + path.string());
    EXPECT_EQ(r.status, 2);
    auto j = lines(r.out).back();
    EXPECT_EQ(j["line"], 3);
    EXPECT_EQ(j["field"], "n");
    EXPECT_EQ(run("build /nonexistent/scene").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("enumerate-cyclic 1 3").status, 2);
}

TEST(Cli, RankRefusesNonSurjectiveQuotientUnlessForced) {
    auto path = temp("vschottky_theta.scene");
    std::ofstream(path) << "leaf K { type T4; n 3; lambda 2 }\ntheta { target 6; K.A 0; K.E 2 }\n";
    EXPECT_EQ(run("rank " + path.string()).status, 2);
    auto r = run("rank --force " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(lines(r.out).back()["surjective"], false);
}

TEST(Cli, BuildEchoReparsesToTheSameScene) {
    auto first = run("build " + scene("z2_star_z3.scene"));
    ASSERT_EQ(first.status, 0);
    auto echo = lines(first.out).back()["scene"].get<std::string>();
    auto path = temp("vschottky_echo.scene");
    std::ofstream(path) << echo;
    auto second = run("build " + path.string());
    ASSERT_EQ(second.status, 0);
    EXPECT_EQ(lines(second.out).back()["scene"], echo);
    EXPECT_EQ(lines(second.out).back()["certificates"], lines(first.out).back()["certificates"]);
}

TEST(Cli, OutputsAreByteIdentical) {
    for (const std::string& args : {"build " + scene("t3_amalgam.scene"), "rank " + scene("cyclic_6.scene"),
                                   "signature " + scene("b3.scene"), std::string("enumerate-cyclic 6 10")}) {
        auto a = run(args), b = run(args);
        EXPECT_EQ(a.status, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
    auto svg1 = temp("vschottky_a.svg"), svg2 = temp("vschottky_b.svg");
    auto a = run("limitset --ls-depth 5 -o " + svg1.string() + " " + scene("rank2_schottky.scene"));
    auto b = run("limitset --ls-depth 5 -o " + svg2.string() + " " + scene("rank2_schottky.scene"));
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(slurp(svg1), slurp(svg2));
    EXPECT_FALSE(slurp(svg1).empty());
}

TEST(Cli, LimitsetReportsNesting) {
    auto svg = temp("vschottky_ls.svg");
    auto r = run("limitset -o " + svg.string() + " " + scene("rank2_schottky.scene"));
    EXPECT_EQ(r.status, 0);
    auto j = lines(r.out).back();
    EXPECT_EQ(j["nesting_violations"], 0);
    EXPECT_EQ(j["depth"], 8);
    EXPECT_EQ(j["strictly_decreasing"], true);
}

TEST(Cli, SignatureListsLeavesAndAssembly) {
    auto out = lines(run("signature " + scene("t3_amalgam.scene")).out);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0]["signature"], "(0;2,2,2)");
    EXPECT_EQ(out[2]["assembly"], "(0;2,2,2,2)");
}
