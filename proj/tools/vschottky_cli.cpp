// vschottky: build, verify and inspect virtual Schottky groups from scene files.

#include <vschottky/vschottky.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace vschottky;
using json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Options {
    std::string scene;
    std::optional<int> depth;
    std::optional<int> ls_depth;
    bool force = false;
    std::string output;
    std::string sample_output;
    int size = 800;
    double window = 4.0;
    int n = 0;
    long g_max = 0;
};

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const json& j) { std::cout << j.dump() << '\n'; }

std::string str(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

std::string subscript(long k) {
    static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    std::string out;
    for (char ch : std::to_string(k)) out += digits[ch - '0'];
    return out;
}

std::string group_name(const FiniteAbelianGroup& g) {
    if (g.orders().empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < g.orders().size(); ++i) out += (i ? " × Z" : "Z") + subscript(g.orders()[i]);
    return out;
}

Scene load(const Options& o) {
    std::ifstream in(o.scene);
    if (!in) throw InputError("cannot read scene file '" + o.scene + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return Scene::parse(buf.str());
}

int depth_of(const Options& o, const Scene& s) { return o.depth.value_or(s.depth().value_or(kDefaultDepth)); }

json check_json(const std::string& node, const HypothesisCheck& c) {
    json j;
    j["node"] = node;
    j["check"] = c.name;
    j["outcome"] = to_string(c.outcome);
    j["depth"] = c.depth;
    j["words"] = c.words_checked;
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

int fail(const std::string& command, const std::string& hypothesis, const std::string& witness,
         const std::string& error = {}) {
    json j;
    j["command"] = command;
    j["status"] = "fail";
    j["hypothesis"] = hypothesis;
    j["witness"] = witness;
    if (!error.empty()) j["error"] = error;
    emit(j);
    std::cerr << command << ": " << (error.empty() ? hypothesis + " fails, witness " + witness : error) << '\n';
    return kFail;
}

// Pairing-system checks shared by build and verify; false on failure.
bool check_pairing(const std::string& command, const PairingSystem& ps, int depth, bool verbose) {
    auto report = verify_pairing(ps);
    auto cert = is_nontrivial_to_depth(ps, depth);
    if (verbose) {
        auto line = [&](const std::string& name, bool ok) {
            json j;
            j["check"] = name;
            j["outcome"] = ok ? "pass" : "fail";
            emit(j);
        };
        line("disjoint circles", report.disjoint_circles);
        line("circles paired", report.circles_paired);
        line("common region mapped off itself", report.region_mapped_off);
        line("fixed points clear of circles", report.fixed_points_clear);
        json j;
        j["check"] = "ping-pong nesting";
        j["outcome"] = cert.holds ? "bounded-pass" : "fail";
        j["depth"] = depth;
        j["words"] = cert.words_checked;
        if (cert.witness) j["witness"] = format_word(*cert.witness, generator_names(ps.generators()));
        emit(j);
    }
    if (!report.ok()) {
        fail(command, "pairing verifies", report.failures.front());
        return false;
    }
    if (!cert.holds) {
        fail(command, "ping-pong nesting", format_word(*cert.witness, generator_names(ps.generators())));
        return false;
    }
    return true;
}

int run_build(const Options& o, bool verify) {
    const std::string command = verify ? "verify" : "build";
    auto scene = load(o);
    int depth = depth_of(o, scene);
    auto built = scene.build(depth);
    json out;
    out["command"] = command;
    out["status"] = "pass";
    out["root"] = built.root;
    out["kind"] = built.group.kind;
    out["depth"] = depth;
    if (built.group.pairing) {
        if (!check_pairing(command, *built.group.pairing, depth, verify)) return kFail;
        out["generators"] = generator_names(built.group.pairing->generators());
        out["relations"] = json::array();
    } else {
        auto tree = *built.tree();
        auto group = assemble(tree);
        out["generators"] = group.names();
        json relations = json::array();
        for (const auto& r : group.relations)
            relations.push_back({{"name", r.name}, {"word", format_word(r.word, group.names())}});
        out["relations"] = relations;
        json certs = json::array();
        for (const auto& [node, report] : group.certificates) {
            bool bounded = false;
            for (const auto& c : report.checks) {
                bounded = bounded || c.outcome == Outcome::bounded_pass;
                if (verify) emit(check_json(node, c));
            }
            certs.push_back({{"node", node},
                             {"status", report.ok() ? (bounded ? "bounded-pass" : "pass") : "fail"},
                             {"checks", report.checks.size()}});
        }
        out["certificates"] = certs;
        out["signature"] = tree_signature(tree).str();
    }
    if (!verify) out["scene"] = scene.str();
    emit(out);
    return kPass;
}

int run_signature(const Options& o) {
    auto scene = load(o);
    auto built = scene.build(depth_of(o, scene));
    json out;
    out["command"] = "signature";
    out["root"] = built.root;
    if (built.group.pairing) {
        OrbifoldSignature sig(built.group.pairing->rank(), {});
        out["assembly"] = sig.str();
        out["chi"] = str(Rational(1 - built.group.pairing->rank()));
        emit(out);
        return kPass;
    }
    auto tree = *built.tree();
    auto leaves = [&](auto&& self, const ConstructionTree::Node& n) -> void {
        if (n.group) {
            json j;
            j["leaf"] = n.group->label;
            j["type"] = to_string(n.group->type);
            j["signature"] = n.group->signature.str();
            j["chi"] = str(n.group->chi);
            emit(j);
        }
        if (n.left) self(self, *n.left);
        if (n.right) self(self, *n.right);
    };
    leaves(leaves, tree.node());
    auto sig = tree_signature(tree);
    out["assembly"] = sig.str();
    out["chi"] = str(euler_characteristic(tree));
    out["orbifold_chi"] = str(sig.euler_characteristic());
    emit(out);
    return kPass;
}

int run_rank(const Options& o) {
    auto scene = load(o);
    int depth = depth_of(o, scene);
    auto built = scene.build(depth);
    auto tree = built.tree();
    if (!tree) throw InputError("rank needs a group node, not a pairing system");
    if (!built.theta) throw InputError("scene has no quotient map; add a theta stanza");
    auto r = kernel_rank(*tree, *built.theta, o.force);
    json out;
    out["command"] = "rank";
    out["root"] = built.root;
    out["chi"] = str(r.chi);
    const auto& target = built.theta->target();
    if (r.surjective) out["H"] = group_name(target);
    else if (target.orders().size() == 1) out["H"] = "Z" + subscript(r.quotient_order);
    else out["H"] = "order " + std::to_string(r.quotient_order);
    out["quotient_order"] = r.quotient_order;
    out["surjective"] = r.surjective;
    out["integral"] = r.integral;
    if (!r.integral) return fail("rank", "kernel rank is an integer", "rank " + str(r.kernel_rank));
    out["rank"] = r.rank();
    if (auto w = kernel_torsion_witness(*tree, *built.theta, depth))
        return fail("rank", "kernel is torsion free", format_word(*w, generator_names(tree_generators(*tree))));
    out["torsion_free_to_depth"] = depth;
    emit(out);
    return kPass;
}

int run_limitset(const Options& o) {
    auto scene = load(o);
    int depth = depth_of(o, scene);
    int ls_depth = o.ls_depth.value_or(scene.ls_depth().value_or(kDefaultLimitSetDepth));
    if (ls_depth < 0) throw InputError("--ls-depth must be >= 0");
    auto built = scene.build(depth);
    LimitSetSample s;
    try {
        s = built.group.pairing ? sample(*built.group.pairing, ls_depth) : sample(*built.tree(), ls_depth);
    } catch (const std::invalid_argument& e) {
        return fail("limitset", "input is certified", e.what());
    }
    RenderOptions ro;
    ro.width = ro.height = o.size;
    ro.half_width = o.window;
    auto svg = render(s, ro);
    std::ofstream file(o.output, std::ios::binary);
    if (!file || !(file << svg)) throw InputError("cannot write '" + o.output + "'");
    if (!o.sample_output.empty()) {
        std::ofstream text(o.sample_output);
        if (!text) throw InputError("cannot write '" + o.sample_output + "'");
        write_sample(text, s);
    }
    json out;
    out["command"] = "limitset";
    out["root"] = built.root;
    out["depth"] = ls_depth;
    out["circles"] = s.circles.size();
    out["points"] = s.points.size();
    out["truncated"] = s.truncated;
    out["max_diameter_by_depth"] = s.max_diameter_by_depth;
    out["output"] = o.output;
    if (ls_depth >= 2) {
        auto r = disconnectedness_report(s);
        out["nesting_violations"] = r.nesting_violations;
        out["max_terminal_diameter"] = r.max_terminal_diameter;
        out["strictly_decreasing"] = r.strictly_decreasing;
        if (r.nesting_violations > 0) return fail("limitset", "circles nest", r.violations.front());
    }
    emit(out);
    return kPass;
}

int run_enumerate(const Options& o) {
    if (o.n < 2) throw InputError("n must be >= 2");
    if (o.g_max < 0) throw InputError("g_max must be >= 0");
    for (const auto& s : enumerate_signatures(o.n, o.g_max)) {
        json j;
        j["n"] = s.n;
        j["g"] = s.g;
        j["a"] = s.a;
        j["b"] = s.b;
        j["c"] = s.c;
        j["d"] = s.d;
        j["m"] = s.m;
        j["n_j"] = s.nj;
        emit(j);
    }
    return kPass;
}

int input_error(const std::string& message, std::optional<int> line = {}, const std::string& field = {}) {
    json j;
    j["status"] = "input-error";
    j["error"] = message;
    if (line) j["line"] = *line;
    if (!field.empty()) j["field"] = field;
    emit(j);
    std::cerr << "error: " << message << '\n';
    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build, verify and inspect virtual Schottky groups"};
    app.require_subcommand(1);
    Options o;
    std::function<int()> action;

    auto with_scene = [&](CLI::App* sub) {
        sub->add_option("scene", o.scene, "Scene file")->required();
        sub->add_option("--depth", o.depth, "Word depth for hypothesis checks (default 6)");
    };
    auto* build = app.add_subcommand("build", "Assemble the scene and print a certificate summary");
    with_scene(build);
    build->callback([&] { action = [&] { return run_build(o, false); }; });

    auto* verify = app.add_subcommand("verify", "Re-run every hypothesis check and print each one");
    with_scene(verify);
    verify->callback([&] { action = [&] { return run_build(o, true); }; });

    auto* signature = app.add_subcommand("signature", "Orbifold signatures of the leaves and the assembly");
    with_scene(signature);
    signature->callback([&] { action = [&] { return run_signature(o); }; });

    auto* rank = app.add_subcommand("rank", "Rank of the kernel of the quotient map");
    with_scene(rank);
    rank->add_flag("--force", o.force, "Accept a quotient map that is not onto");
    rank->callback([&] { action = [&] { return run_rank(o); }; });

    auto* limitset = app.add_subcommand("limitset", "Sample the limit set and write an SVG image");
    with_scene(limitset);
    limitset->add_option("--ls-depth", o.ls_depth, "Word depth for the sample (default 8)");
    limitset->add_option("-o,--output", o.output, "SVG file to write")->required();
    limitset->add_option("--sample", o.sample_output, "Also write the sampled circles as text");
    limitset->add_option("--size", o.size, "Image width and height in pixels")->check(CLI::PositiveNumber);
    limitset->add_option("--window", o.window, "Half-width of the plane window")->check(CLI::PositiveNumber);
    limitset->callback([&] { action = [&] { return run_limitset(o); }; });

    auto* enumerate = app.add_subcommand("enumerate-cyclic", "Admissible signatures with cyclic quotient");
    enumerate->add_option("n", o.n, "Order of the quotient")->required();
    enumerate->add_option("g_max", o.g_max, "Largest genus")->required();
    enumerate->callback([&] { action = [&] { return run_enumerate(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    try {
        return action();
    } catch (const HypothesisFailure& e) {
        const auto* f = e.report().first_failure();
        return fail(app.get_subcommands().front()->get_name(), f ? f->name : "?", f ? f->witness : "", e.what());
    } catch (const SceneError& e) {
        return input_error(o.scene + ": " + e.what(), e.line(), e.field());
    } catch (const InputError& e) {
        return input_error(e.what());
    } catch (const std::invalid_argument& e) {
        return input_error(e.what());
    } catch (const std::exception& e) {
        return fail(app.get_subcommands().front()->get_name(), "construction succeeds", e.what(), e.what());
    }
}
