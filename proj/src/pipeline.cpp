#include "shapeval/pipeline.hpp"

#include "shapeval/chase.hpp"

namespace shapeval {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Direct: return "direct";
        case Mode::Rewrite: return "rewrite";
        case Mode::PureAlchi: return "pure-alchi";
        case Mode::PureShaclb: return "pure-shaclb";
        case Mode::Chase: return "chase";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
    for (Mode m : {Mode::Direct, Mode::Rewrite, Mode::PureAlchi, Mode::PureShaclb, Mode::Chase})
        if (mode_name(m) == s) return m;
    return std::nullopt;
}

Prepared prepare(Problem& p) {
    auto [t, ren] = collapse_role_cycles(p.t, p.v.num_roles());
    ABox a = ren.identity() ? p.a : rename_roles(p.a, ren);
    ShapesGraph sg = ren.identity() ? p.shapes : rename_roles(p.shapes, ren);
    SaturatedTBox sat = saturate(t, p.v);
    CompletedABox comp = complete_abox(sat, a, p.v.num_individuals());
    return Prepared{std::move(t), std::move(a), std::move(sg), std::move(sat), std::move(comp)};
}

namespace {

void record(Report& r, const ValidationResult& res) {
    r.targets = res.targets;
    r.stats["strata"] = static_cast<std::int64_t>(res.strata);
    r.stats["shape_atoms"] = static_cast<std::int64_t>(res.atoms);
}

Report run_checked(Problem& p, const RunOptions& opts) {
    Report r;
    r.mode = opts.mode;
    Prepared pre = prepare(p);
    if (pre.completed.inconsistent) {
        r.consistent = false;
        r.exit_code = kExitInconsistent;
        r.message = "knowledge base is inconsistent";
        return r;
    }
    compute_stratification(pre.shapes);  // reports the user-level cycle
    const bool negation = pre.shapes.has_negation();

    switch (opts.mode) {
        case Mode::Direct: {
            Interpretation can = build_can(pre.sat, pre.completed, opts.depth);
            r.stats["model_nodes"] = static_cast<std::int64_t>(can.size());
            r.stats["depth"] = opts.depth;
            if (!can.complete && negation) {
                r.exit_code = kExitDepthLimit;
                r.message = "canonical model is not complete at depth " + std::to_string(opts.depth) +
                            " and the shapes graph uses negation";
                return r;
            }
            r.lower_bound = !can.complete;
            record(r, validate(can, pre.shapes));
            break;
        }
        case Mode::Chase: {
            auto res = run_chase(pre.t, atoms_of(pre.a, p.v),
                                 opts.restricted_chase ? ChaseVariant::Restricted : ChaseVariant::Oblivious,
                                 opts.chase_rounds, opts.chase_nodes);
            r.stats["model_nodes"] = static_cast<std::int64_t>(res.atoms.size());
            r.stats["rounds"] = res.rounds;
            if (res.clash) {
                r.consistent = false;
                r.exit_code = kExitInconsistent;
                r.message = "chase derived a clash";
                return r;
            }
            if (!res.terminated && negation) {
                r.exit_code = kExitDepthLimit;
                r.message = "chase did not terminate within the round limit and the shapes graph uses negation";
                return r;
            }
            r.lower_bound = !res.terminated;
            record(r, validate(interpretation_of(res.atoms), pre.shapes));
            break;
        }
        default: {
            NormalizedShapes ns = normalize(p.v, pre.shapes);
            RewriteResult rw = rewrite(pre.sat, p.v, ns, RewriteOptions{opts.eager, opts.max_quadruples});
            std::int64_t quads = 0;
            for (auto q : rw.stats.quadruples) quads += static_cast<std::int64_t>(q);
            r.stats["quadruples"] = quads;
            r.stats["emitted_constraints"] = static_cast<std::int64_t>(rw.stats.emitted);
            if (opts.mode == Mode::Rewrite) {
                Interpretation at = completed_interpretation(pre.completed, pre.sat.role_slots());
                r.stats["model_nodes"] = static_cast<std::int64_t>(at.size());
                record(r, validate(at, rw.graph));
            } else {
                ShapesGraph pure = opts.mode == Mode::PureAlchi ? pure_rewrite_alchi(pre.sat, p.v, rw.graph)
                                                                : pure_rewrite_shaclb(pre.sat, p.v, rw.graph);
                Interpretation plain = interpretation_of(pre.a, p.v);
                r.stats["model_nodes"] = static_cast<std::int64_t>(plain.size());
                r.stats["pure_constraints"] = static_cast<std::int64_t>(pure.constraints.size() + pure.binary.size());
                record(r, validate(plain, pure));
            }
        }
    }
    r.exit_code = r.valid() ? kExitValid : kExitViolations;
    return r;
}

}  // namespace

Report run(Problem& p, const RunOptions& opts) {
    auto fail = [&](int code, std::string msg) {
        Report r;
        r.mode = opts.mode;
        r.exit_code = code;
        r.message = std::move(msg);
        return r;
    };
    try {
        return run_checked(p, opts);
    } catch (const NotStratified& e) {
        return fail(kExitNotStratified, std::string(e.what()) + ": " + format_dep_cycle(e.cycle(), p.v));
    } catch (const NormalizationError& e) {
        return fail(kExitInputError, e.what());
    } catch (const PureRewriteError& e) {
        return fail(kExitInputError, e.what());
    }
}

nlohmann::json report_json(const Report& r, const Vocabulary& v) {
    nlohmann::json j;
    j["consistent"] = r.consistent;
    j["mode"] = mode_name(r.mode);
    j["targets"] = nlohmann::json::array();
    for (auto& t : r.targets)
        j["targets"].push_back({{"shape", v.shape_name(t.target.shape)},
                                {"node", v.individual_name(t.target.individual)},
                                {"valid", t.valid}});
    nlohmann::json stats = nlohmann::json::object();
    for (auto& [k, x] : r.stats) stats[k] = x;
    if (r.lower_bound) stats["lower_bound"] = true;
    j["stats"] = stats;
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

std::string report_text(const Report& r, const Vocabulary& v) {
    std::string out;
    if (!r.consistent) return "INCONSISTENT " + r.message + "\n";
    if (!r.message.empty() && r.targets.empty()) return "ERROR " + r.message + "\n";
    for (auto& t : r.targets)
        out += std::string(t.valid ? "VALID" : "VIOLATION") + " $" + v.shape_name(t.target.shape) + "(@" +
               v.individual_name(t.target.individual) + ")" + (t.known_shape ? "" : " # no constraint") + "\n";
    if (r.lower_bound) out += "# truncated model: positive verdicts are a lower bound\n";
    return out;
}

}  // namespace shapeval
