#include "shapeval/chase.hpp"
#include "shapeval/pipeline.hpp"
#include "shapeval/random.hpp"
#include "shapeval/selftest.hpp"
#include "shapeval/text_format.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace shapeval;

namespace {

struct Inputs {
    std::string tbox, abox, shapes, targets;
};

void add_inputs(CLI::App* app, Inputs& in, bool need_abox, bool need_shapes) {
    app->add_option("--tbox", in.tbox, "TBox file (.tbox)")->required()->check(CLI::ExistingFile);
    auto* a = app->add_option("--abox", in.abox, "ABox file (.abox)")->check(CLI::ExistingFile);
    if (need_abox) a->required();
    if (need_shapes) {
        app->add_option("--shapes", in.shapes, "shapes graph (.shacl)")->required()->check(CLI::ExistingFile);
        app->add_option("--targets", in.targets, "targets (.targets); default: every defined shape at every individual")
            ->check(CLI::ExistingFile);
    }
}

Problem load(const Inputs& in) {
    Problem p;
    p.t = parse_tbox(read_file(in.tbox), p.v, in.tbox);
    if (!in.abox.empty()) p.a = parse_abox(read_file(in.abox), p.v, in.abox);
    if (!in.shapes.empty()) {
        p.shapes = parse_shapes(read_file(in.shapes), p.v, in.shapes);
        if (!in.targets.empty())
            p.shapes.targets = parse_targets(read_file(in.targets), p.v, in.targets);
        else if (p.shapes.targets.empty())
            p.shapes.targets = all_targets(p.shapes, p.v);
    }
    return p;
}

int cmd_validate(const Inputs& in, const RunOptions& opts, const std::string& format) {
    Problem p = load(in);
    Report r = run(p, opts);
    if (format == "json")
        std::cout << report_json(r, p.v).dump(2) << "\n";
    else
        std::cout << report_text(r, p.v);
    if (!r.message.empty() && format == "json") std::cerr << r.message << "\n";
    return r.exit_code;
}

int cmd_rewrite(const Inputs& in, const std::string& pure, bool eager) {
    Problem p = load(in);
    Prepared pre = prepare(p);
    if (pre.completed.inconsistent && !in.abox.empty()) {
        std::cerr << "knowledge base is inconsistent\n";
        return kExitInconsistent;
    }
    compute_stratification(pre.shapes);
    NormalizedShapes ns = normalize(p.v, pre.shapes);
    RewriteResult rw = rewrite(pre.sat, p.v, ns, RewriteOptions{eager, 0});
    if (pure == "alchi")
        std::cout << format_shapes(pure_rewrite_alchi(pre.sat, p.v, rw.graph), p.v);
    else if (pure == "shaclb")
        std::cout << format_shapes(pure_rewrite_shaclb(pre.sat, p.v, rw.graph), p.v);
    else
        std::cout << format_shapes(rw.graph, p.v);
    std::cerr << "# quadruples";
    for (auto q : rw.stats.quadruples) std::cerr << " " << q;
    std::cerr << "; emitted " << rw.stats.emitted << "\n";
    return kExitValid;
}

int cmd_build_model(const Inputs& in, const std::string& model, int depth, int rounds, bool emit) {
    Problem p = load(in);
    Prepared pre = prepare(p);
    if (pre.completed.inconsistent) {
        std::cerr << "knowledge base is inconsistent\n";
        return kExitInconsistent;
    }
    std::vector<std::string> atoms;
    std::string summary;
    if (model == "can" || model == "abox") {
        Interpretation I = model == "can" ? build_can(pre.sat, pre.completed, depth)
                                          : completed_interpretation(pre.completed, pre.sat.role_slots());
        atoms = I.dump(p.v);
        summary = "# nodes " + std::to_string(I.size()) + (I.complete ? " complete" : " truncated");
    } else if (model == "core-chase") {
        try {
            auto res = run_core_chase(pre.t, atoms_of(pre.a, p.v), rounds, 64);
            if (res.clash) {
                std::cerr << "chase derived a clash\n";
                return kExitInconsistent;
            }
            atoms = res.atoms.dump(p.v);
            summary = "# nodes " + std::to_string(res.atoms.size()) + " rounds " + std::to_string(res.rounds);
        } catch (const NotTerminated& e) {
            std::cerr << e.what() << "\n";
            return kExitDepthLimit;
        }
    } else {
        auto res = run_chase(pre.t, atoms_of(pre.a, p.v),
                             model == "restricted" ? ChaseVariant::Restricted : ChaseVariant::Oblivious, rounds, 4096);
        if (res.clash) {
            std::cerr << "chase derived a clash\n";
            return kExitInconsistent;
        }
        atoms = res.atoms.dump(p.v);
        summary = "# nodes " + std::to_string(res.atoms.size()) + " rounds " + std::to_string(res.rounds) +
                  (res.terminated ? " terminated" : " truncated");
    }
    if (emit)
        for (auto& a : atoms) std::cout << a << "\n";
    std::cout << summary << "\n";
    return kExitValid;
}

int cmd_chase(const Inputs& in, const std::string& variant, int rounds) {
    Problem p = load(in);
    Prepared pre = prepare(p);
    AtomSet start = atoms_of(pre.a, p.v);
    std::vector<AtomSet> history;
    bool done = true, clash = false;
    if (variant == "core") {
        try {
            auto res = run_core_chase(pre.t, start, rounds, 64);
            history = res.history;
            clash = res.clash;
        } catch (const NotTerminated& e) {
            std::cerr << e.what() << "\n";
            done = false;
        }
    } else {
        auto res = run_chase(pre.t, start, variant == "restricted" ? ChaseVariant::Restricted : ChaseVariant::Oblivious,
                             rounds, 4096);
        history = res.history;
        clash = res.clash;
        done = res.terminated;
    }
    std::cout << "# round 0 nodes " << start.size() << "\n";
    for (auto& a : start.dump(p.v)) std::cout << a << "\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        std::cout << "# round " << i + 1 << " nodes " << history[i].size() << "\n";
        for (auto& a : history[i].dump(p.v)) std::cout << a << "\n";
    }
    if (clash) {
        std::cerr << "chase derived a clash\n";
        return kExitInconsistent;
    }
    if (!done) return kExitDepthLimit;
    return kExitValid;
}

int cmd_selftest(const SelftestConfig& cfg, const std::string& format) {
    SelftestReport r = selftest(cfg);
    if (format == "json") {
        std::cout << r.to_json().dump(2) << "\n";
    } else {
        std::cout << "cases " << r.cases << " passed " << r.passed << " skipped " << r.skipped << " failed " << r.failed
                  << "\n";
        if (r.first) {
            auto& c = *r.first;
            std::cout << "counterexample case " << c.index << " [" << c.check << "] " << c.detail << "\n";
            std::cout << "--- tbox\n" << c.minimized.tbox << "--- abox\n" << c.minimized.abox << "--- shacl\n"
                      << c.minimized.shapes << "--- targets\n" << c.minimized.targets;
        }
    }
    return r.ok() ? kExitValid : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Validation of recursive shapes under Horn-SHIQ ontologies"};
    app.require_subcommand(1);

    Inputs in;
    RunOptions opts;
    std::string mode = "direct", format = "text";
    auto* validate = app.add_subcommand("validate", "validate targets against (T,A)");
    add_inputs(validate, in, true, true);
    validate->add_option("--mode", mode, "direct | rewrite | pure-alchi | pure-shaclb | chase")
        ->check(CLI::IsMember({"direct", "rewrite", "pure-alchi", "pure-shaclb", "chase"}));
    validate->add_option("--depth", opts.depth, "depth limit for can in direct mode")->check(CLI::NonNegativeNumber);
    validate->add_option("--rounds", opts.chase_rounds, "round limit in chase mode")->check(CLI::PositiveNumber);
    validate->add_flag("--restricted", opts.restricted_chase, "restricted instead of oblivious chase");
    validate->add_flag("--eager", opts.eager, "seed the rewriting with every locally consistent type");
    validate->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

    std::string pure = "none";
    bool eager = false;
    auto* rw = app.add_subcommand("rewrite", "print the rewritten shapes graph C_T");
    add_inputs(rw, in, false, true);
    rw->add_option("--pure", pure, "none | alchi | shaclb")->check(CLI::IsMember({"none", "alchi", "shaclb"}));
    rw->add_flag("--eager", eager, "seed with every locally consistent type");

    std::string model = "can";
    int depth = 32, rounds = 64;
    bool emit = false;
    auto* bm = app.add_subcommand("build-model", "build a model of (T,A)");
    add_inputs(bm, in, true, false);
    bm->add_option("--model", model, "can | abox | oblivious | restricted | core-chase")
        ->check(CLI::IsMember({"can", "abox", "oblivious", "restricted", "core-chase"}));
    bm->add_option("--depth", depth, "depth limit for can")->check(CLI::NonNegativeNumber);
    bm->add_option("--rounds", rounds, "chase round limit")->check(CLI::PositiveNumber);
    bm->add_flag("--emit", emit, "dump the atoms");

    std::string variant = "oblivious";
    int chase_rounds = 16;
    auto* ch = app.add_subcommand("chase", "run a chase and dump every round");
    add_inputs(ch, in, true, false);
    ch->add_option("--variant", variant, "oblivious | restricted | core")
        ->check(CLI::IsMember({"oblivious", "restricted", "core"}));
    ch->add_option("--rounds", chase_rounds, "round limit")->check(CLI::PositiveNumber);

    SelftestConfig st;
    bool no_minimize = false;
    auto* self = app.add_subcommand("selftest", "random cross-checks of the validation routes");
    self->add_option("--seed", st.seed, "rng seed");
    self->add_option("--cases", st.cases, "number of cases")->check(CLI::NonNegativeNumber);
    self->add_flag("--inject-r4-bug", st.inject_r4_bug, "flip the successor subsumption filter");
    self->add_flag("--no-minimize", no_minimize, "report the counterexample as generated");
    self->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    try {
        if (*validate) {
            opts.mode = *parse_mode(mode);
            return cmd_validate(in, opts, format);
        }
        if (*rw) return cmd_rewrite(in, pure, eager);
        if (*bm) return cmd_build_model(in, model, depth, rounds, emit);
        if (*ch) return cmd_chase(in, variant, chase_rounds);
        st.minimize = !no_minimize;
        return cmd_selftest(st, format);
    } catch (const NotStratified& e) {
        std::cerr << e.what() << "\n";
        return kExitNotStratified;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    }
}
