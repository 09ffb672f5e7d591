#include "alloylab/field_expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "alloylab/error.hpp"

namespace alloylab {

struct FieldExpression::Node {
    enum class Op { number, coordinate, add, sub, mul, div, pow, neg, sin, cos };
    Op op;
    double value = 0.0;
    int axis = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(const Point& x) const {
        switch (op) {
            case Op::number: return value;
            case Op::coordinate: return x[static_cast<std::size_t>(axis)];
            case Op::add: return lhs->eval(x) + rhs->eval(x);
            case Op::sub: return lhs->eval(x) - rhs->eval(x);
            case Op::mul: return lhs->eval(x) * rhs->eval(x);
            case Op::div: return lhs->eval(x) / rhs->eval(x);
            case Op::pow: return std::pow(lhs->eval(x), rhs->eval(x));
            case Op::neg: return -lhs->eval(x);
            case Op::sin: return std::sin(lhs->eval(x));
            case Op::cos: return std::cos(lhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const FieldExpression::Node>;
using Op = FieldExpression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<FieldExpression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::config_invalid,
                    "field expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::add, lhs, term());
            else if (accept('-')) lhs = make(Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::mul, lhs, unary());
            else if (accept('/')) lhs = make(Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::string rest(text_.substr(pos_));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(rest, &used);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += used;
        auto n = std::make_shared<FieldExpression::Node>();
        n->op = Op::number;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") {
            auto n = std::make_shared<FieldExpression::Node>();
            n->op = Op::number;
            n->value = std::numbers::pi;
            return n;
        }
        int axis = -1;
        if (name == "x1" || name == "x") axis = 0;
        if (name == "x2" || name == "y") axis = 1;
        if (name == "x3" || name == "z") axis = 2;
        if (axis >= 0) {
            auto n = std::make_shared<FieldExpression::Node>();
            n->op = Op::coordinate;
            n->axis = axis;
            return n;
        }
        if (name == "sin" || name == "cos") {
            if (!accept('(')) fail("expected '(' after " + std::string(name));
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make(name == "sin" ? Op::sin : Op::cos, arg);
        }
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

FieldExpression FieldExpression::parse(std::string_view text) {
    return FieldExpression(Parser(text).parse(), std::string(text));
}

FieldExpression FieldExpression::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::number;
    n->value = value;
    return FieldExpression(n, std::to_string(value));
}

double FieldExpression::operator()(const Point& x) const { return root_->eval(x); }

}  // namespace alloylab
