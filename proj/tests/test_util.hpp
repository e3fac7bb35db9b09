#pragma once

#include "shapeval/model_builder.hpp"
#include "shapeval/text_format.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace shapeval::testing {

struct Kb {
    Vocabulary v;
    TBox t;
    ABox a;

    Kb(std::string_view tbox, std::string_view abox) {
        t = parse_tbox(tbox, v);
        a = parse_abox(abox, v);
    }
    int c(std::string_view n) { return v.concept_id(n); }
    Role r(std::string_view n) { return Role{v.role_id(n), false}; }
    int i(std::string_view n) { return v.individual_id(n); }

    // Names are interned first so the width covers them.
    Bits cs(std::initializer_list<std::string_view> names) {
        std::vector<int> ids;
        for (auto n : names) ids.push_back(c(n));
        Bits b(v.num_concepts());
        for (int i : ids) b.set(i);
        return b;
    }
    Bits rs(std::initializer_list<std::string_view> names) {
        std::vector<int> ids;
        for (auto n : names) {
            bool inv = n.starts_with("^");
            Role x = r(inv ? n.substr(1) : n);
            ids.push_back((inv ? invert_role(x) : x).index());
        }
        Bits b(v.role_slots());
        for (int i : ids) b.set(i);
        return b;
    }
    SaturatedTBox sat() { return saturate(t, v); }
};

inline std::vector<std::string> sorted(std::vector<std::string> xs) {
    std::sort(xs.begin(), xs.end());
    return xs;
}

}  // namespace shapeval::testing
