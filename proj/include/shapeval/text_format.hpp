#pragma once

#include "shapeval/shapes.hpp"

#include <filesystem>
#include <stdexcept>

namespace shapeval {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, int line, int column, const std::string& msg);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

TBox parse_tbox(std::string_view text, Vocabulary& v, const std::string& source = "<tbox>");
ABox parse_abox(std::string_view text, Vocabulary& v, const std::string& source = "<abox>");
// Names under '~' are refused unless allow_generated.
ShapesGraph parse_shapes(std::string_view text, Vocabulary& v, const std::string& source = "<shacl>",
                         bool allow_generated = false);
std::vector<Target> parse_targets(std::string_view text, Vocabulary& v, const std::string& source = "<targets>");

ShapeExprPtr parse_shape_expr(std::string_view text, Vocabulary& v, bool allow_generated = false);
RegexPtr parse_regex(std::string_view text, Vocabulary& v);
PathPtr parse_path(std::string_view text, Vocabulary& v, bool allow_generated = false);

std::string format_axiom(const Axiom& a, const Vocabulary& v);
std::string format_tbox(const TBox& t, const Vocabulary& v);
std::string format_abox(const ABox& a, const Vocabulary& v);
std::string format_targets(const std::vector<Target>& ts, const Vocabulary& v);

std::string read_file(const std::filesystem::path& p);

}  // namespace shapeval
