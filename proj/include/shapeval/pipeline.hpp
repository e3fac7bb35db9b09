#pragma once

#include "shapeval/evaluator.hpp"
#include "shapeval/rewriter.hpp"

#include "json.hpp"

namespace shapeval {

enum class Mode { Direct, Rewrite, PureAlchi, PureShaclb, Chase };

std::string mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

enum ExitCode : int {
    kExitValid = 0,
    kExitViolations = 1,
    kExitInconsistent = 2,
    kExitInputError = 3,
    kExitNotStratified = 4,
    kExitDepthLimit = 5,
};

struct Problem {
    Vocabulary v;
    TBox t;
    ABox a;
    ShapesGraph shapes;  // targets included
};

struct RunOptions {
    Mode mode = Mode::Direct;
    int depth = 32;
    int chase_rounds = 64;
    std::size_t chase_nodes = 4096;
    bool restricted_chase = false;
    bool eager = false;
    std::size_t max_quadruples = 0;
};

struct Report {
    bool consistent = true;
    Mode mode = Mode::Direct;
    std::vector<TargetVerdict> targets;
    std::map<std::string, std::int64_t> stats;
    bool lower_bound = false;  // positive constraints over a truncated model
    int exit_code = kExitValid;
    std::string message;

    bool valid() const {
        return std::all_of(targets.begin(), targets.end(), [](auto& t) { return t.valid; });
    }
};

// Never throws for the documented failure modes; they become exit codes.
Report run(Problem& p, const RunOptions& opts);

nlohmann::json report_json(const Report& r, const Vocabulary& v);
std::string report_text(const Report& r, const Vocabulary& v);

// Shared by run and the self-test: role cycles collapsed in T, A and the shapes.
struct Prepared {
    TBox t;
    ABox a;
    ShapesGraph shapes;
    SaturatedTBox sat;
    CompletedABox completed;
};
Prepared prepare(Problem& p);

}  // namespace shapeval
