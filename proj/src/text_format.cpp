#include "shapeval/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace shapeval {

ParseError::ParseError(const std::string& source, int line, int column, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Scanner {
public:
    Scanner(std::string_view text, std::string source, int line, bool allow_generated = false)
        : s_(text), source_(std::move(source)), line_(line), generated_(allow_generated) {}

    void ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        ws();
        return pos_ >= s_.size();
    }
    char peek() {
        ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(std::string_view tok) {
        ws();
        if (s_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }
    // Keyword followed by something other than a name character.
    bool keyword(std::string_view kw) {
        ws();
        if (s_.substr(pos_, kw.size()) != kw) return false;
        std::size_t end = pos_ + kw.size();
        if (end < s_.size() && ident_char(s_[end])) return false;
        pos_ = end;
        return true;
    }
    std::string ident(const char* what) {
        ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        return std::string(s_.substr(start, pos_ - start));
    }
    // Shape names may carry the reserved generated prefix.
    std::string shape_ident() {
        ws();
        if (pos_ < s_.size() && s_[pos_] == '~') {
            if (!generated_) fail("names starting with '~' are reserved for generated shapes");
            std::size_t start = pos_++;
            while (pos_ < s_.size() && (ident_char(s_[pos_]) || s_[pos_] == '.' || s_[pos_] == '~')) ++pos_;
            return std::string(s_.substr(start, pos_ - start));
        }
        return ident("shape name");
    }
    bool lower_next() {
        char c = peek();
        return std::islower(static_cast<unsigned char>(c)) != 0;
    }
    bool upper_next() {
        char c = peek();
        return std::isupper(static_cast<unsigned char>(c)) != 0;
    }
    Role role(Vocabulary& v) {
        bool inv = eat("^");
        if (!lower_next()) fail("expected role name (lowercase initial)");
        Role r{v.role_id(ident("role name")), false};
        return inv ? invert_role(r) : r;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(source_, line_, static_cast<int>(pos_) + 1, msg);
    }
    void finish() {
        if (!at_end()) fail("unexpected trailing input");
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::string source_;
    int line_;
    bool generated_;
};

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    int line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view l = text.substr(start, end - start);
        ++line;
        if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
        if (l.find_first_not_of(" \t\r") != std::string_view::npos) f(l, line);
        start = end + 1;
    }
}

int concept_or_top(Scanner& sc, Vocabulary& v, bool allow_bot) {
    if (sc.keyword("top")) return kTop;
    if (allow_bot && sc.keyword("bot")) return kBottom;
    if (sc.peek() == '(') sc.fail("not in normal form: complex filler");
    if (!sc.upper_next()) sc.fail("expected concept name (uppercase initial)");
    return v.concept_id(sc.ident("concept name"));
}

Axiom parse_axiom(Scanner& sc, Vocabulary& v) {
    Scanner probe = sc;
    if (sc.peek() == '^' || (sc.lower_next() && !probe.keyword("top"))) {
        Role sub = sc.role(v);
        sc.expect("<=");
        Role sup = sc.role(v);
        return RoleInclusion{sub, sup};
    }
    std::vector<int> lhs{concept_or_top(sc, v, false)};
    while (sc.eat("&")) lhs.push_back(concept_or_top(sc, v, false));
    sc.expect("<=");
    for (const char* q : {"some", "only", "max1"}) {
        if (!sc.keyword(q)) continue;
        if (lhs.size() != 1) sc.fail("not in normal form: quantified inclusion needs a single concept on the left");
        Role r = sc.role(v);
        sc.expect(".");
        int b = concept_or_top(sc, v, std::string_view(q) != "some");
        std::string_view k = q;
        if (k == "some") {
            if (b == kBottom) sc.fail("not in normal form");
            return ExistsInclusion{lhs[0], r, b};
        }
        if (k == "only") return ValueRestriction{lhs[0], r, b};
        return AtMostOne{lhs[0], r, b};
    }
    int rhs = concept_or_top(sc, v, true);
    if (sc.peek() == '&' || sc.peek() == '|') sc.fail("not in normal form: compound right-hand side");
    std::sort(lhs.begin(), lhs.end());
    lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
    return ConjInclusion{lhs, rhs};
}

RegexPtr regex_alt_p(Scanner& sc, Vocabulary& v);

RegexPtr regex_atom(Scanner& sc, Vocabulary& v) {
    RegexPtr e;
    if (sc.eat("(")) {
        e = regex_alt_p(sc, v);
        sc.expect(")");
    } else {
        e = regex_role(sc.role(v));
    }
    while (sc.eat("*")) e = regex_star(e);
    return e;
}

RegexPtr regex_seq_p(Scanner& sc, Vocabulary& v) {
    RegexPtr e = regex_atom(sc, v);
    while (sc.eat("/")) e = regex_seq(e, regex_atom(sc, v));
    return e;
}

RegexPtr regex_alt_p(Scanner& sc, Vocabulary& v) {
    RegexPtr e = regex_seq_p(sc, v);
    while (sc.eat("|")) e = regex_alt(e, regex_seq_p(sc, v));
    return e;
}

RegexPtr bracketed_regex(Scanner& sc, Vocabulary& v) {
    sc.expect("<");
    RegexPtr e = regex_alt_p(sc, v);
    sc.expect(">");
    return e;
}

PathPtr path_union_p(Scanner& sc, Vocabulary& v);

PathPtr path_atom(Scanner& sc, Vocabulary& v) {
    PathPtr p;
    if (sc.eat("(")) {
        p = path_union_p(sc, v);
        sc.expect(")");
    } else if (sc.eat("$")) {
        p = path_test(v.shape_id(sc.shape_ident()));
        sc.expect("?");
    } else if (sc.eat("%")) {
        p = path_binary(v.binary_shape_id(sc.shape_ident()));
    } else if (sc.keyword("inv")) {
        sc.expect("(");
        p = path_inverse(path_union_p(sc, v));
        sc.expect(")");
    } else {
        p = path_role(sc.role(v));
    }
    while (sc.eat("*")) p = path_star(p);
    return p;
}

PathPtr path_seq_p(Scanner& sc, Vocabulary& v) {
    PathPtr p = path_atom(sc, v);
    while (sc.eat("/")) p = path_concat(p, path_atom(sc, v));
    return p;
}

PathPtr path_inter_p(Scanner& sc, Vocabulary& v) {
    PathPtr p = path_seq_p(sc, v);
    while (sc.eat("&")) p = path_inter(p, path_seq_p(sc, v));
    return p;
}

PathPtr path_diff_p(Scanner& sc, Vocabulary& v) {
    PathPtr p = path_inter_p(sc, v);
    while (sc.eat("\\")) p = path_diff(p, path_inter_p(sc, v));
    return p;
}

PathPtr path_union_p(Scanner& sc, Vocabulary& v) {
    PathPtr p = path_diff_p(sc, v);
    while (sc.eat("|")) p = path_union(p, path_diff_p(sc, v));
    return p;
}

ShapeExprPtr body_p(Scanner& sc, Vocabulary& v);

ShapeExprPtr unary_p(Scanner& sc, Vocabulary& v) {
    if (sc.eat("!")) {
        if (!sc.eat("$")) sc.fail("negation applies to shape names only");
        return sx_not(v.shape_id(sc.shape_ident()));
    }
    if (sc.eat("(")) {
        ShapeExprPtr e = body_p(sc, v);
        sc.expect(")");
        return e;
    }
    if (sc.eat("@")) return sx_individual(v.individual_id(sc.ident("individual name")));
    if (sc.eat("$")) return sx_shape(v.shape_id(sc.shape_ident()));
    if (sc.keyword("top")) return sx_top();
    if (sc.keyword("some")) {
        char c = sc.peek();
        if (c == '[') {
            sc.expect("[");
            std::vector<Role> roles{sc.role(v)};
            while (sc.eat(",")) roles.push_back(sc.role(v));
            sc.expect("]");
            sc.expect(".");
            return sx_exists(roles, unary_p(sc, v));
        }
        if (c == '<') {
            RegexPtr e = bracketed_regex(sc, v);
            sc.expect(".");
            return sx_exists_path(e, unary_p(sc, v));
        }
        if (c == '{') {
            sc.expect("{");
            PathPtr p = path_union_p(sc, v);
            sc.expect("}");
            sc.expect(".");
            return sx_exists_binary(p, unary_p(sc, v));
        }
        sc.fail("expected '[', '<' or '{' after 'some'");
    }
    for (bool eq : {true, false}) {
        if (!sc.keyword(eq ? "eq" : "disj")) continue;
        sc.expect("(");
        RegexPtr e1 = bracketed_regex(sc, v);
        sc.expect(",");
        RegexPtr e2 = bracketed_regex(sc, v);
        sc.expect(")");
        return eq ? sx_eq(-1, e1, e2) : sx_disj(-1, e1, e2);
    }
    if (sc.upper_next()) return sx_concept(v.concept_id(sc.ident("concept name")));
    sc.fail("expected shape expression");
}

bool unguarded_compare(const ShapeExprPtr& e) {
    return (e->kind == ShapeExpr::Kind::PathEq || e->kind == ShapeExpr::Kind::PathDisj) && e->id < 0;
}

ShapeExprPtr conj_p(Scanner& sc, Vocabulary& v) {
    std::vector<ShapeExprPtr> parts{unary_p(sc, v)};
    while (sc.eat("&")) parts.push_back(unary_p(sc, v));
    // @c & eq(..) reads as the guarded comparison
    std::vector<ShapeExprPtr> folded;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i + 1 < parts.size() && parts[i]->kind == ShapeExpr::Kind::Individual && unguarded_compare(parts[i + 1])) {
            auto& c = parts[i + 1];
            folded.push_back(c->kind == ShapeExpr::Kind::PathEq ? sx_eq(parts[i]->id, c->e1, c->e2)
                                                                : sx_disj(parts[i]->id, c->e1, c->e2));
            ++i;
        } else {
            folded.push_back(parts[i]);
        }
    }
    return sx_and(folded);
}

ShapeExprPtr body_p(Scanner& sc, Vocabulary& v) {
    ShapeExprPtr e = conj_p(sc, v);
    while (sc.eat("|")) e = sx_or(e, conj_p(sc, v));
    return e;
}

}  // namespace

TBox parse_tbox(std::string_view text, Vocabulary& v, const std::string& source) {
    TBox t;
    for_each_line(text, [&](std::string_view l, int line) {
        Scanner sc(l, source, line);
        t.axioms.push_back(parse_axiom(sc, v));
        sc.finish();
    });
    return t;
}

ABox parse_abox(std::string_view text, Vocabulary& v, const std::string& source) {
    ABox a;
    for_each_line(text, [&](std::string_view l, int line) {
        Scanner sc(l, source, line);
        if (sc.upper_next()) {
            int c = v.concept_id(sc.ident("concept name"));
            sc.expect("(");
            int x = v.individual_id(sc.ident("individual name"));
            sc.expect(")");
            a.add_concept(c, x);
        } else {
            Role r = sc.role(v);
            sc.expect("(");
            int x = v.individual_id(sc.ident("individual name"));
            sc.expect(",");
            int y = v.individual_id(sc.ident("individual name"));
            sc.expect(")");
            a.add_role(r, x, y);
        }
        sc.finish();
    });
    return a;
}

ShapesGraph parse_shapes(std::string_view text, Vocabulary& v, const std::string& source, bool allow_generated) {
    ShapesGraph g;
    for_each_line(text, [&](std::string_view l, int line) {
        Scanner sc(l, source, line, allow_generated);
        if (sc.eat("%")) {
            int head = v.binary_shape_id(sc.shape_ident());
            sc.expect("<-");
            g.binary.push_back({head, path_union_p(sc, v)});
        } else {
            sc.expect("$");
            int head = v.shape_id(sc.shape_ident());
            sc.expect("<-");
            g.constraints.push_back({head, body_p(sc, v)});
        }
        sc.finish();
    });
    return g;
}

std::vector<Target> parse_targets(std::string_view text, Vocabulary& v, const std::string& source) {
    std::vector<Target> out;
    for_each_line(text, [&](std::string_view l, int line) {
        Scanner sc(l, source, line);
        sc.expect("$");
        int s = v.shape_id(sc.shape_ident());
        sc.expect("(");
        sc.eat("@");
        int a = v.individual_id(sc.ident("individual name"));
        sc.expect(")");
        sc.finish();
        out.push_back({s, a});
    });
    return out;
}

ShapeExprPtr parse_shape_expr(std::string_view text, Vocabulary& v, bool allow_generated) {
    Scanner sc(text, "<expr>", 1, allow_generated);
    ShapeExprPtr e = body_p(sc, v);
    sc.finish();
    return e;
}

RegexPtr parse_regex(std::string_view text, Vocabulary& v) {
    Scanner sc(text, "<regex>", 1);
    RegexPtr e = regex_alt_p(sc, v);
    sc.finish();
    return e;
}

PathPtr parse_path(std::string_view text, Vocabulary& v, bool allow_generated) {
    Scanner sc(text, "<path>", 1, allow_generated);
    PathPtr p = path_union_p(sc, v);
    sc.finish();
    return p;
}

std::string format_axiom(const Axiom& ax, const Vocabulary& v) {
    auto quant = [&](const char* q, int a, Role r, int b) {
        return v.concept_label(a) + " <= " + q + " " + v.role_name(r) + "." + v.concept_label(b);
    };
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConjInclusion>) {
                std::string out;
                for (std::size_t i = 0; i < x.lhs.size(); ++i) out += (i ? " & " : "") + v.concept_label(x.lhs[i]);
                return out + " <= " + v.concept_label(x.rhs);
            } else if constexpr (std::is_same_v<T, ExistsInclusion>) {
                return quant("some", x.a, x.r, x.b);
            } else if constexpr (std::is_same_v<T, ValueRestriction>) {
                return quant("only", x.a, x.r, x.b);
            } else if constexpr (std::is_same_v<T, AtMostOne>) {
                return quant("max1", x.a, x.r, x.b);
            } else {
                return v.role_name(x.sub) + " <= " + v.role_name(x.sup);
            }
        },
        ax);
}

std::string format_tbox(const TBox& t, const Vocabulary& v) {
    std::string out;
    for (auto& a : t.axioms) out += format_axiom(a, v) + "\n";
    return out;
}

std::string format_abox(const ABox& a, const Vocabulary& v) {
    std::vector<std::string> lines;
    for (auto& [c, x] : a.concept_atoms) lines.push_back(v.concept_name(c) + "(" + v.individual_name(x) + ")");
    for (auto& [r, x, y] : a.role_atoms)
        lines.push_back(v.role_base_name(r) + "(" + v.individual_name(x) + "," + v.individual_name(y) + ")");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (auto& l : lines) out += l + "\n";
    return out;
}

std::string format_targets(const std::vector<Target>& ts, const Vocabulary& v) {
    std::string out;
    for (auto& t : ts) out += "$" + v.shape_name(t.shape) + "(@" + v.individual_name(t.individual) + ")\n";
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace shapeval
