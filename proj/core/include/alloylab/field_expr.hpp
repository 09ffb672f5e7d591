#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "alloylab/grid.hpp"

namespace alloylab {

/// A scalar closed-form field f(x) over box coordinates.
///
/// Grammar (usual precedence, `^` right-associative):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | 'pi' | x1 | x2 | x3 | x | y | z
///           | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
/// Coordinates outside the grid dimension evaluate to 0.
class FieldExpression {
public:
    static FieldExpression parse(std::string_view text);
    static FieldExpression constant(double value);

    double operator()(const Point& x) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    FieldExpression(std::shared_ptr<const Node> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace alloylab
