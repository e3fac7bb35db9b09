#include "shapeval/selftest.hpp"

#include "shapeval/chase.hpp"
#include "shapeval/text_format.hpp"

#include <iterator>

namespace shapeval {

namespace {

class FaultScope {
public:
    explicit FaultScope(bool on) : prev_(fault_flip_r4()) { set_fault_flip_r4(on); }
    ~FaultScope() { set_fault_flip_r4(prev_); }
    FaultScope(const FaultScope&) = delete;
    FaultScope& operator=(const FaultScope&) = delete;

private:
    bool prev_;
};

Problem problem_of(const RandomCase& c) { return Problem{c.v, c.t, c.a, c.shapes.graph()}; }

std::string verdict_word(bool valid) { return valid ? "VALID" : "VIOLATION"; }

CaseOutcome skip() { return {CaseOutcome::Status::Skip, {}, {}}; }
CaseOutcome fail(std::string check, std::string detail) {
    return {CaseOutcome::Status::Fail, std::move(check), std::move(detail)};
}

std::optional<CaseOutcome> compare_routes(const RandomCase& c, const SelftestConfig& cfg) {
    std::vector<Mode> modes{Mode::Direct, Mode::Rewrite, Mode::PureShaclb};
    if (!c.t.has_at_most()) modes.push_back(Mode::PureAlchi);
    std::optional<Report> base;
    for (Mode m : modes) {
        Problem p = problem_of(c);
        RunOptions opts;
        opts.mode = m;
        opts.max_quadruples = cfg.max_quadruples;
        Report r;
        try {
            r = run(p, opts);
        } catch (const RewriteBudgetExceeded&) {
            return skip();
        }
        if (!base) {
            base = r;
            if (r.exit_code > kExitViolations)
                return fail("routes", "direct exited with " + std::to_string(r.exit_code) + ": " + r.message);
            continue;
        }
        if (r.exit_code != base->exit_code && (r.exit_code > kExitViolations || base->exit_code > kExitViolations))
            return fail("routes", mode_name(m) + " exited with " + std::to_string(r.exit_code) + ": " + r.message);
        if (r.targets.size() != base->targets.size())
            return fail("routes", mode_name(m) + " reported a different number of targets");
        for (std::size_t i = 0; i < r.targets.size(); ++i) {
            if (r.targets[i].valid == base->targets[i].valid) continue;
            const Target& t = r.targets[i].target;
            return fail("routes", "$" + c.v.shape_name(t.shape) + "(@" + c.v.individual_name(t.individual) + "): direct " +
                                      verdict_word(base->targets[i].valid) + ", " + mode_name(m) + " " +
                                      verdict_word(r.targets[i].valid));
        }
    }
    return std::nullopt;
}

}  // namespace

CaseOutcome check_case(const RandomCase& c, const SelftestConfig& cfg) {
    Problem p = problem_of(c);
    Prepared pre = [&] {
        FaultScope off(false);
        return prepare(p);
    }();
    if (pre.completed.inconsistent) return skip();
    {
        FaultScope off(false);
        Interpretation ref = build_can(pre.sat, pre.completed, cfg.params.depth);
        if (!ref.complete || ref.size() > cfg.params.node_bound) return skip();
    }

    FaultScope fault(cfg.inject_r4_bug);
    Interpretation can = build_can(pre.sat, pre.completed, cfg.params.depth);
    if (!is_model(can, pre.sat, pre.a)) return fail("model", "can(T,A) is not a model of (T,A)");
    if (can.size() <= cfg.core_bound && !is_core(atoms_of(can), cfg.core_bound))
        return fail("core", "can(T,A) has a non-injective endomorphism");
    if (auto r = compare_routes(c, cfg)) return *r;
    return {};
}

RandomCase minimize_case(const RandomCase& c, const SelftestConfig& cfg, const std::string& check) {
    RandomCase cur = c;
    auto still_fails = [&](const RandomCase& x) {
        CaseOutcome o = check_case(x, cfg);
        return o.status == CaseOutcome::Status::Fail && o.check == check;
    };
    // Greedy one-element deletions over a vector or set reached through `get`.
    auto shrink = [&](auto get) {
        bool any = false;
        for (std::size_t i = 0; i < get(cur).size();) {
            RandomCase trial = cur;
            auto& xs = get(trial);
            xs.erase(std::next(xs.begin(), static_cast<std::ptrdiff_t>(i)));
            if (still_fails(trial)) {
                cur = std::move(trial);
                any = true;
            } else {
                ++i;
            }
        }
        return any;
    };
    for (bool progress = true; progress;) {
        progress = false;
        progress |= shrink([](RandomCase& x) -> auto& { return x.shapes.constraints; });
        progress |= shrink([](RandomCase& x) -> auto& { return x.shapes.targets; });
        progress |= shrink([](RandomCase& x) -> auto& { return x.t.axioms; });
        progress |= shrink([](RandomCase& x) -> auto& { return x.a.role_atoms; });
        progress |= shrink([](RandomCase& x) -> auto& { return x.a.concept_atoms; });
    }
    return cur;
}

ReproBundle bundle_of(const RandomCase& c) {
    return ReproBundle{format_tbox(c.t, c.v), format_abox(c.a, c.v),
                       format_shapes(to_shapes_graph(c.shapes.constraints, {}), c.v),
                       format_targets(c.shapes.targets, c.v)};
}

nlohmann::json SelftestReport::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["inject_r4_bug"] = inject_r4_bug;
    j["cases"] = cases;
    j["passed"] = passed;
    j["skipped"] = skipped;
    j["failed"] = failed;
    if (first) {
        auto bundle = [](const ReproBundle& b) {
            return nlohmann::json{{"tbox", b.tbox}, {"abox", b.abox}, {"shapes", b.shapes}, {"targets", b.targets}};
        };
        j["counterexample"] = {{"case", first->index},
                               {"check", first->check},
                               {"detail", first->detail},
                               {"original", bundle(first->original)},
                               {"minimized", bundle(first->minimized)}};
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

SelftestReport selftest(const SelftestConfig& cfg) {
    SelftestReport rep;
    rep.seed = cfg.seed;
    rep.inject_r4_bug = cfg.inject_r4_bug;
    rep.cases = cfg.cases;
    for (int i = 0; i < cfg.cases; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        Rng rng(seq);
        std::optional<RandomCase> c;
        {
            FaultScope off(false);
            c = random_case(rng, cfg.params);
        }
        if (!c) {
            ++rep.skipped;
            continue;
        }
        CaseOutcome o = check_case(*c, cfg);
        switch (o.status) {
            case CaseOutcome::Status::Pass: ++rep.passed; break;
            case CaseOutcome::Status::Skip: ++rep.skipped; break;
            case CaseOutcome::Status::Fail:
                ++rep.failed;
                if (!rep.first) {
                    RandomCase small = cfg.minimize ? minimize_case(*c, cfg, o.check) : *c;
                    CaseOutcome so = check_case(small, cfg);
                    rep.first = Counterexample{i, o.check, so.detail.empty() ? o.detail : so.detail, bundle_of(*c),
                                               bundle_of(small)};
                }
                break;
        }
    }
    return rep;
}

}  // namespace shapeval
