#pragma once

#include "shapeval/pipeline.hpp"
#include "shapeval/random.hpp"

namespace shapeval {

struct SelftestConfig {
    std::uint64_t seed = 1;
    int cases = 100;
    bool inject_r4_bug = false;
    CaseParams params;
    std::size_t core_bound = 10;          // core check only on models up to this size
    std::size_t max_quadruples = 40000;   // larger rewritings count as skipped
    bool minimize = true;
};

// Text files that reproduce a failing case.
struct ReproBundle {
    std::string tbox, abox, shapes, targets;
};

struct Counterexample {
    int index = 0;
    std::string check;   // model | core | routes
    std::string detail;
    ReproBundle original, minimized;
};

struct SelftestReport {
    std::uint64_t seed = 0;
    bool inject_r4_bug = false;
    int cases = 0, passed = 0, skipped = 0, failed = 0;
    std::optional<Counterexample> first;

    bool ok() const { return failed == 0; }
    nlohmann::json to_json() const;
};

SelftestReport selftest(const SelftestConfig& cfg);

struct CaseOutcome {
    enum class Status { Pass, Skip, Fail } status = Status::Pass;
    std::string check, detail;
};
// Skip: inconsistent, can not finite within the bounds, or rewriting over budget.
CaseOutcome check_case(const RandomCase& c, const SelftestConfig& cfg);
RandomCase minimize_case(const RandomCase& c, const SelftestConfig& cfg, const std::string& check);

ReproBundle bundle_of(const RandomCase& c);

}  // namespace shapeval
