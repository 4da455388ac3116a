#include "pwsmooth/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

namespace {

enum class Func {
    sin, cos, tan, exp, ln, log10, sinh, cosh, tanh, sqrt, abs, floor, sign
};

struct FuncEntry {
    const char* name;
    Func id;
};

constexpr std::array<FuncEntry, 13> kFunctions = {{
    {"sin", Func::sin}, {"cos", Func::cos}, {"tan", Func::tan},
    {"exp", Func::exp}, {"ln", Func::ln}, {"log10", Func::log10},
    {"sinh", Func::sinh}, {"cosh", Func::cosh}, {"tanh", Func::tanh},
    {"sqrt", Func::sqrt}, {"abs", Func::abs}, {"floor", Func::floor},
    {"sign", Func::sign},
}};

const FuncEntry* find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (name == f.name) return &f;
    return nullptr;
}

bool find_constant(std::string_view name, double& out) {
    if (name == "pi") { out = M_PI; return true; }
    if (name == "e") { out = M_E; return true; }
    return false;
}

double apply(Func f, double a) {
    switch (f) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::tan: return std::tan(a);
        case Func::exp: return std::exp(a);
        case Func::ln: return std::log(a);
        case Func::log10: return std::log10(a);
        case Func::sinh: return std::sinh(a);
        case Func::cosh: return std::cosh(a);
        case Func::tanh: return std::tanh(a);
        case Func::sqrt: return std::sqrt(a);
        case Func::abs: return std::fabs(a);
        case Func::floor: return std::floor(a);
        case Func::sign:
            if (std::isnan(a)) return a;
            return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); // sign(0) = 0
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

struct Expression::Node {
    enum class Kind { literal, variable, negate, add, sub, mul, div, pow, call };

    Kind kind;
    double value = 0.0; // literal
    Func func = Func::sin; // call
    NodePtr lhs, rhs;   // rhs unused for negate/call

    static NodePtr literal(double v) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::literal;
        n->value = v;
        return n;
    }
    static NodePtr variable() {
        auto n = std::make_shared<Node>();
        n->kind = Kind::variable;
        return n;
    }
    static NodePtr unary(Kind k, NodePtr child) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(child);
        return n;
    }
    static NodePtr binary(Kind k, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
    static NodePtr call(Func f, NodePtr arg) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::call;
        n->func = f;
        n->lhs = std::move(arg);
        return n;
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Kind = Expression::Node::Kind;

// Recursive-descent parser over the raw byte string.
class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run(std::string& variable_out) {
        if (text_.empty())
            throw SyntaxError(0, "expression", "empty expression");
        NodePtr root = expression();
        skip_ws();
        if (pos_ != text_.size())
            fail("end of input or operator");
        if (!variable_.empty()) variable_out = variable_;
        return root;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::string variable_; // bound on first unknown identifier

    [[noreturn]] void fail(const std::string& expected) {
        throw SyntaxError(pos_, expected,
                          "syntax error at offset " + std::to_string(pos_) +
                              ": expected " + expected);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = Node::binary(Kind::add, std::move(lhs), term());
            else if (eat('-'))
                lhs = Node::binary(Kind::sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = Node::binary(Kind::mul, std::move(lhs), unary());
            else if (eat('/'))
                lhs = Node::binary(Kind::div, std::move(lhs), unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return Node::unary(Kind::negate, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) // right-associative; unary minus allowed in the exponent
            return Node::binary(Kind::pow, std::move(base), unary());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("number, identifier or '('");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!eat(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("number, identifier or '('");
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
            fail("digits");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // 'e' was the constant, not an exponent
            }
        }
        double value = 0.0;
        auto [ptr, ec] =
            std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{} || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("numeric literal");
        }
        return Node::literal(value);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        skip_ws();
        bool is_call = pos_ < text_.size() && text_[pos_] == '(';
        if (is_call) {
            const FuncEntry* f = find_function(name);
            if (!f)
                throw UnknownIdentifier(start, std::string(name),
                                        "unknown function '" + std::string(name) +
                                            "' at offset " + std::to_string(start));
            ++pos_; // '('
            NodePtr arg = expression();
            if (!eat(')')) fail("')'");
            return Node::call(f->id, std::move(arg));
        }

        double cval;
        if (find_constant(name, cval)) return Node::literal(cval);
        if (find_function(name))
            throw SyntaxError(pos_, "'(' after function name",
                              "function '" + std::string(name) +
                                  "' requires an argument list at offset " +
                                  std::to_string(start));
        if (variable_.empty()) {
            variable_ = std::string(name);
            return Node::variable();
        }
        if (name == variable_) return Node::variable();
        throw UnknownIdentifier(start, std::string(name),
                                "unknown identifier '" + std::string(name) +
                                    "'; the variable is already '" + variable_ + "'");
    }
};

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Kind::literal: return n.value;
        case Kind::variable: return x;
        case Kind::negate: return -eval_node(*n.lhs, x);
        case Kind::add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
        case Kind::sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
        case Kind::mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
        case Kind::div: return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
        case Kind::pow: return std::pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
        case Kind::call: return apply(n.func, eval_node(*n.lhs, x));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

const char* func_name(Func f) {
    for (const auto& e : kFunctions)
        if (e.id == f) return e.name;
    return "?";
}

std::string format_literal(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

int precedence(Kind k) {
    switch (k) {
        case Kind::add:
        case Kind::sub: return 1;
        case Kind::mul:
        case Kind::div: return 2;
        case Kind::negate: return 3;
        case Kind::pow: return 4;
        default: return 5; // atoms
    }
}

void print_node(const Node& n, int context, std::string& out,
                const std::string& variable) {
    int prec = precedence(n.kind);
    bool negative_literal = n.kind == Kind::literal && std::signbit(n.value);
    bool parens = prec < context || negative_literal;
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::literal: out += format_literal(n.value); break;
        case Kind::variable: out += variable; break;
        case Kind::negate:
            out += '-';
            print_node(*n.lhs, prec, out, variable);
            break;
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div: {
            char op = n.kind == Kind::add ? '+'
                    : n.kind == Kind::sub ? '-'
                    : n.kind == Kind::mul ? '*'
                                          : '/';
            print_node(*n.lhs, prec, out, variable);
            out += op;
            print_node(*n.rhs, prec + 1, out, variable); // left-associative
            break;
        }
        case Kind::pow:
            print_node(*n.lhs, prec + 1, out, variable);
            out += '^';
            print_node(*n.rhs, prec, out, variable); // right-associative
            break;
        case Kind::call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.lhs, 0, out, variable);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::literal:
            // literal equality is bitwise, so 0.0 and -0.0 differ
            return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
        case Kind::variable: return true;
        case Kind::negate:
        case Kind::call:
            return (a.kind != Kind::call || a.func == b.func) &&
                   nodes_equal(*a.lhs, *b.lhs);
        default:
            return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    }
}

NodePtr substitute_scaled(const NodePtr& n, const NodePtr& replacement) {
    switch (n->kind) {
        case Kind::literal: return n;
        case Kind::variable: return replacement;
        case Kind::negate: return Node::unary(Kind::negate, substitute_scaled(n->lhs, replacement));
        case Kind::call: return Node::call(n->func, substitute_scaled(n->lhs, replacement));
        default:
            return Node::binary(n->kind, substitute_scaled(n->lhs, replacement),
                                substitute_scaled(n->rhs, replacement));
    }
}

} // namespace

Expression Expression::parse(std::string_view text) {
    Parser p(text);
    std::string variable = "x";
    NodePtr root = p.run(variable);
    return Expression(std::move(root), std::move(variable));
}

Expression Expression::constant(double value) {
    NodePtr n = std::signbit(value) ? Node::unary(Node::Kind::negate, Node::literal(-value))
                                    : Node::literal(value);
    return Expression(std::move(n), "x");
}

double Expression::operator()(double x) const {
    return root_ ? eval_node(*root_, x) : std::numeric_limits<double>::quiet_NaN();
}

std::string Expression::str() const {
    std::string out;
    if (root_) print_node(*root_, 0, out, variable_);
    return out;
}

bool Expression::structurally_equal(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return nodes_equal(*root_, *other.root_);
}

Expression Expression::with_scaled_variable(double k) const {
    if (!root_) return *this;
    NodePtr replacement =
        Node::binary(Node::Kind::div, Node::variable(), Node::literal(k));
    return Expression(substitute_scaled(root_, replacement), variable_);
}

} // namespace pwsmooth
