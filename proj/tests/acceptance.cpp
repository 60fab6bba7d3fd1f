// One line per acceptance criterion; exit status 1 if any line fails.

#include <vschottky/vschottky.hpp>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace vschottky;

namespace {

struct Result {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::pair<int, std::string> run_cli(const std::string& args) {
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

PairingSystem rank_two() {
    return PairingSystem({Pairing::between_discs(-2.0, 0.5, 2.0, 0.5, "A"),
                          Pairing::between_discs(Complex{0.0, -2.0}, 0.5, Complex{0.0, 2.0}, 0.5, "B")});
}

Result relation_suite() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> modulus(std::nextafter(1.0, 2.0), 10.0), arg(-kPi, kPi);
    std::uniform_int_distribution<int> order(2, 12);
    auto draw = [&] { return std::polar(modulus(rng), arg(rng)); };
    int groups = 0;
    std::size_t relations = 0;
    std::string failure;
    for (auto type : {BasicType::T1, BasicType::T2, BasicType::T3, BasicType::T4, BasicType::T5, BasicType::T6,
                      BasicType::T7})
        for (int i = 0; i < 50; ++i) {
            BasicParams p;
            p.n = order(rng);
            p.lambda1 = draw();
            p.lambda2 = draw();
            p.lambda3 = draw();
            auto bg = make_basic(type, p);
            ++groups;
            relations += bg.relations.size() + bg.extra_relations.size();
            auto bad = failed_relations(bg, 1e-9);
            if (!bad.empty() && failure.empty()) failure = std::string(to_string(type)) + " " + bad.front();
        }
    double t = seconds_since(t0);
    std::ostringstream os;
    os << groups << " groups, " << relations << " relations within 1e-9, " << t << " s";
    if (!failure.empty()) os << ", first failure " << failure;
    return {failure.empty() && t < 1.0, os.str()};
}

Result signature_table() {
    std::vector<std::pair<BasicType, OrbifoldSignature>> expected = {
        {BasicType::T2, {1, {}}},           {BasicType::T3, {0, {2, 2, 2}}},       {BasicType::T4, {1, {}}},
        {BasicType::T5, {0, {2, 2, 2, 2}}}, {BasicType::T6, {0, {2, 2, 2, 2, 2}}}, {BasicType::T7, {0, {2, 2, 2, 2, 2, 2}}}};
    int checked = 0;
    std::string failure;
    for (int n = 2; n <= 12; ++n) {
        BasicParams p;
        p.n = n;
        auto sig = orbifold_signature(make_basic(BasicType::T1, p));
        ++checked;
        if (!(sig == OrbifoldSignature(0, {n, n})) && failure.empty()) failure = "T1 n=" + std::to_string(n);
    }
    for (const auto& [type, sig] : expected)
        for (int n = 2; n <= 12; ++n) {
            BasicParams p;
            p.n = n;
            ++checked;
            if (!(orbifold_signature(make_basic(type, p)) == sig) && failure.empty()) failure = to_string(type);
        }
    return {failure.empty(), std::to_string(checked) + " exact matches" + (failure.empty() ? "" : ", mismatch " + failure)};
}

Result cyclic_ranks() {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t total = 0, mismatches = 0;
    std::string first;
    CyclicPlacement place;
    place.depth = 1;
    for (int n = 2; n <= 12; ++n)
        for (const auto& s : enumerate_signatures(n, 50)) {
            ++total;
            auto built = build_cyclic(s, place);
            auto r = kernel_rank(built.tree, built.theta);
            if (!r.integral || r.kernel_rank != s.genus_formula() || r.kernel_rank != Rational(s.g)) {
                ++mismatches;
                if (first.empty()) first = s.str();
            }
        }
    double t = seconds_since(t0);
    std::ostringstream os;
    os << total << " signatures, " << mismatches << " mismatches, " << t << " s";
    if (!first.empty()) os << ", first " << first;
    return {mismatches == 0 && total > 1000 && t < 30.0, os.str()};
}

Result ping_pong() {
    auto t0 = std::chrono::steady_clock::now();
    auto ps = rank_two();
    bool verified = verify_pairing(ps).ok();
    auto tally = tally_classes(ps.generators(), 6);
    double t = seconds_since(t0);
    std::ostringstream os;
    os << "pairing " << (verified ? "verifies" : "fails") << ", " << tally.words << " words, " << tally.loxodromic
       << " loxodromic, " << tally.elliptic << " elliptic, " << tally.parabolic + tally.ambiguous << " parabolic, "
       << tally.identity << " identity, " << t << " s";
    return {verified && tally.words == 1456 && tally.loxodromic == 1456 && t < 5.0, os.str()};
}

Result no_parabolics() {
    auto t0 = std::chrono::steady_clock::now();
    BasicParams p;
    p.n = 3;
    p.lambda1 = 4.0;
    p.lambda2 = Complex{3.0, 4.0};
    p.lambda3 = 8.0;
    std::vector<std::pair<std::string, std::vector<Generator>>> groups;
    for (auto type : {BasicType::T1, BasicType::T2, BasicType::T3, BasicType::T4, BasicType::T5, BasicType::T6,
                      BasicType::T7})
        groups.emplace_back(to_string(type), make_basic(type, p).generators);
    CyclicSignature three;
    three.n = 6;
    three.a = 1;
    three.c = 1;
    three.d = 1;
    three.nj = {3};
    three.g = three.genus_formula().numerator();
    groups.emplace_back("T2 * T1(2) * T1(3)", tree_generators(build_cyclic(three).tree));
    std::size_t words = 0, parabolic = 0, ambiguous = 0;
    for (const auto& [name, gens] : groups) {
        auto t = tally_classes(gens, 6);
        words += t.words;
        parabolic += t.parabolic;
        ambiguous += t.ambiguous;
    }
    double t = seconds_since(t0);
    std::ostringstream os;
    os << groups.size() << " groups, " << words << " words, " << parabolic << " parabolic, " << ambiguous
       << " ambiguous, " << t << " s";
    return {parabolic == 0 && ambiguous == 0 && t < 10.0, os.str()};
}

Result negative_controls() {
    std::ostringstream os;
    bool ok = true;
    for (const char* name : {"broken_overlap.scene", "broken_circle.scene", "broken_elliptic.scene"}) {
        auto [status, out] = run_cli("verify " + scene(name));
        bool witnessed = out.find("\"witness\":\"") != std::string::npos && out.find("\"witness\":\"\"") == std::string::npos;
        ok = ok && status == 1 && witnessed;
        os << name << " exit " << status << (witnessed ? " with witness" : " without witness") << "; ";
    }
    return {ok, os.str()};
}

Result limit_set_nesting() {
    auto s = sample(rank_two(), 8);
    auto r = disconnectedness_report(s);
    double depth2 = s.max_diameter_by_depth.at(1);
    std::ostringstream os;
    os << s.circles.size() << " circles, " << r.nesting_violations << " nesting violations, terminal diameter "
       << r.max_terminal_diameter << " vs depth-2 " << depth2 << ", "
       << (r.strictly_decreasing ? "strictly decreasing" : "not strictly decreasing");
    return {r.nesting_violations == 0 && r.strictly_decreasing && r.max_terminal_diameter < 0.1 * depth2, os.str()};
}

Result determinism() {
    std::ostringstream os;
    bool ok = true;
    for (const std::string& args :
         {"build " + scene("z2_star_z3.scene"), "build " + scene("b3.scene"), "rank " + scene("t4_rank.scene"),
          "rank " + scene("cyclic_6.scene"), std::string("enumerate-cyclic 12 20")}) {
        auto a = run_cli(args), b = run_cli(args);
        bool same = a == b && a.first == 0 && !a.second.empty();
        ok = ok && same;
        os << args.substr(0, args.find(' ')) << (same ? " identical" : " DIFFERS") << " (" << a.second.size()
           << " bytes); ";
    }
    return {ok, os.str()};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"basic-type relation suite", relation_suite},
        {"signature table", signature_table},
        {"cyclic rank cross-validation", cyclic_ranks},
        {"ping-pong freeness", ping_pong},
        {"no parabolics", no_parabolics},
        {"combination negative controls", negative_controls},
        {"limit-set nesting", limit_set_nesting},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r{false, {}};
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failures += r.pass ? 0 : 1;
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << r.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
