#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stack>
#include <string>
#include <vector>

#include "pwsmooth/errors.hpp"
#include "pwsmooth/expr.hpp"

using pwsmooth::Expression;

namespace {

// Independent reference evaluator: tokenizes and evaluates with the
// shunting-yard algorithm, no AST. Shares nothing with the library path.
class ReferenceEvaluator {
  public:
    explicit ReferenceEvaluator(const std::string& text) : text_(text) {}

    double at(double x) {
        pos_ = 0;
        out_.clear();
        ops_.clear();
        x_ = x;
        bool prefix = true; // next '-' is unary
        while (true) {
            skip();
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            if (isdigit((unsigned char)c) || c == '.') {
                push_value(read_number());
                prefix = false;
            } else if (isalpha((unsigned char)c)) {
                std::string name = read_name();
                skip();
                if (pos_ < text_.size() && text_[pos_] == '(') {
                    ops_.push_back({name, 9, false});
                } else if (name == "pi") {
                    push_value(M_PI);
                    prefix = false;
                } else if (name == "e") {
                    push_value(M_E);
                    prefix = false;
                } else {
                    push_value(x_);
                    prefix = false;
                }
            } else if (c == '(') {
                ops_.push_back({"(", 0, false});
                ++pos_;
                prefix = true;
            } else if (c == ')') {
                while (!ops_.empty() && ops_.back().name != "(") pop_op();
                REQUIRE(!ops_.empty());
                ops_.pop_back();
                if (!ops_.empty() && ops_.back().prec == 9) pop_op(); // function call
                ++pos_;
                prefix = false;
            } else {
                std::string op(1, c);
                ++pos_;
                if (op == "-" && prefix) {
                    ops_.push_back({"neg", 3, true});
                } else {
                    int prec = (op == "+" || op == "-") ? 1
                             : (op == "*" || op == "/") ? 2
                                                        : 4; // ^
                    bool right = op == "^";
                    while (!ops_.empty() && ops_.back().name != "(" &&
                           ops_.back().prec != 9 &&
                           (ops_.back().prec > prec ||
                            (ops_.back().prec == prec && !right)))
                        pop_op();
                    ops_.push_back({op, prec, right});
                }
                prefix = true;
            }
        }
        while (!ops_.empty()) pop_op();
        REQUIRE(out_.size() == 1);
        return out_.back();
    }

  private:
    struct Op {
        std::string name;
        int prec;
        bool right;
    };

    void skip() {
        while (pos_ < text_.size() && isspace((unsigned char)text_[pos_])) ++pos_;
    }

    double read_number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (isdigit((unsigned char)text_[pos_]) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && isdigit((unsigned char)text_[pos_]))
                while (pos_ < text_.size() && isdigit((unsigned char)text_[pos_])) ++pos_;
            else
                pos_ = mark;
        }
        return std::stod(text_.substr(start, pos_ - start));
    }

    std::string read_name() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void push_value(double v) { out_.push_back(v); }

    void pop_op() {
        Op op = ops_.back();
        ops_.pop_back();
        if (op.name == "neg") {
            out_.back() = -out_.back();
        } else if (op.prec == 9) {
            double a = out_.back();
            out_.pop_back();
            if (op.name == "sin") out_.push_back(std::sin(a));
            else if (op.name == "cos") out_.push_back(std::cos(a));
            else if (op.name == "tan") out_.push_back(std::tan(a));
            else if (op.name == "exp") out_.push_back(std::exp(a));
            else if (op.name == "ln") out_.push_back(std::log(a));
            else if (op.name == "log10") out_.push_back(std::log10(a));
            else if (op.name == "sinh") out_.push_back(std::sinh(a));
            else if (op.name == "cosh") out_.push_back(std::cosh(a));
            else if (op.name == "tanh") out_.push_back(std::tanh(a));
            else if (op.name == "sqrt") out_.push_back(std::sqrt(a));
            else if (op.name == "abs") out_.push_back(std::fabs(a));
            else if (op.name == "floor") out_.push_back(std::floor(a));
            else if (op.name == "sign")
                out_.push_back(std::isnan(a) ? a : double((a > 0) - (a < 0)));
            else
                FAIL("unknown function ", op.name);
        } else {
            double b = out_.back();
            out_.pop_back();
            double a = out_.back();
            out_.pop_back();
            if (op.name == "+") out_.push_back(a + b);
            else if (op.name == "-") out_.push_back(a - b);
            else if (op.name == "*") out_.push_back(a * b);
            else if (op.name == "/") out_.push_back(a / b);
            else out_.push_back(std::pow(a, b));
        }
    }

    std::string text_;
    size_t pos_ = 0;
    double x_ = 0.0;
    std::vector<double> out_;
    std::vector<Op> ops_;
};

// Random expression strings of bounded depth for the precedence fuzz.
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    std::uniform_real_distribution<double> lit(0.1, 4.0);
    switch (pick(rng)) {
        case 0: return "x";
        case 1: {
            char buf[32];
            snprintf(buf, sizeof buf, "%.3f", lit(rng));
            return buf;
        }
        case 2: return "pi";
        case 3: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
        case 4: return random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 6: return random_expr(rng, depth - 1) + "/(1+abs(" + random_expr(rng, depth - 1) + "))";
        case 7: return "-" + random_expr(rng, depth - 1);
        case 8: {
            const char* fns[] = {"sin", "cos", "tanh", "abs", "floor", "exp"};
            std::uniform_int_distribution<int> f(0, 5);
            return std::string(fns[f(rng)]) + "(" + random_expr(rng, depth - 1) + ")";
        }
        default: {
            std::uniform_int_distribution<int> e(0, 3);
            return "(1+abs(" + random_expr(rng, depth - 1) + "))^" +
                   std::to_string(e(rng));
        }
    }
}

} // namespace

TEST_CASE("parse: worked values") {
    auto frac = Expression::parse("x - floor(x)");
    CHECK(frac(2.5) == doctest::Approx(0.5).epsilon(1e-15));

    auto psi1 = Expression::parse("ln(1+x^2)");
    CHECK(std::fabs(psi1(-0.3) - 0.086177) < 1e-6); // published partition value

    // stated with the sin(0) = 0 hand oracle: 20 + 0 + 5*1*0
    auto psi2 = Expression::parse("20 + 20*x + 5*exp(-4*x)*sin(6*pi*x/0.6)");
    CHECK(psi2(0.0) == doctest::Approx(20.0).epsilon(1e-15));

    auto th = Expression::parse("tanh(1)");
    CHECK(std::fabs(th(123.0) - 0.761594) < 1e-6);
}

TEST_CASE("parse: errors carry byte offsets") {
    CHECK_THROWS_AS(Expression::parse(""), pwsmooth::SyntaxError);

    try {
        Expression::parse("sin(");
        FAIL("expected SyntaxError");
    } catch (const pwsmooth::SyntaxError& e) {
        CHECK(e.offset == 4);
    }

    try {
        Expression::parse("2*)3");
        FAIL("expected SyntaxError");
    } catch (const pwsmooth::SyntaxError& e) {
        CHECK(e.offset == 2);
    }

    // one variable only; a second distinct identifier is rejected
    CHECK_NOTHROW(Expression::parse("t + t^2"));
    CHECK_THROWS_AS(Expression::parse("x + y"), pwsmooth::UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse("foo(x)"), pwsmooth::UnknownIdentifier);
    try {
        Expression::parse("x + y");
        FAIL("expected UnknownIdentifier");
    } catch (const pwsmooth::UnknownIdentifier& e) {
        CHECK(e.name == "y");
        CHECK(e.offset == 4);
    }
}

TEST_CASE("evaluate: IEEE semantics, in-band specials") {
    auto pole = Expression::parse("0.2/(x-0.5)");
    CHECK(pole(0.5) == std::numeric_limits<double>::infinity());

    auto logx = Expression::parse("ln(x)");
    CHECK(logx(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(logx(-1.0)));

    // stay in the reals: negative base with fractional exponent is undefined
    auto p = Expression::parse("x^0.5");
    CHECK(std::isnan(p(-2.0)));
    auto pint = Expression::parse("x^3");
    CHECK(pint(-2.0) == -8.0);

    auto sgn = Expression::parse("sign(x)");
    CHECK(sgn(0.0) == 0.0);
    CHECK(sgn(-3.0) == -1.0);
    CHECK(sgn(7.0) == 1.0);
}

TEST_CASE("evaluate: precedence rules") {
    CHECK(Expression::parse("2^3^2")(0) == 512.0);     // right-associative
    CHECK(Expression::parse("-2^2")(0) == -4.0);       // unary minus below ^
    CHECK(Expression::parse("2^-1")(0) == 0.5);        // unary minus in exponent
    CHECK(Expression::parse("1-2-3")(0) == -4.0);      // left-associative
    CHECK(Expression::parse("12/4/3")(0) == 1.0);
    CHECK(Expression::parse("1+2*3^2")(0) == 19.0);
}

TEST_CASE("print/reparse idempotence") {
    const char* cases[] = {
        "x - floor(x)",
        "ln(1+x^2)",
        "20 + 20*x + 5*exp(-4*x)*sin(6*pi*x/0.6)",
        "2.770315 + 0.2/(x-0.5) - 0.5",
        "-x^2",
        "(-x)^2",
        "1-(2-3)",
        "x/(2*x)",
        "2^-3",
        "--x",
    };
    for (const char* text : cases) {
        CAPTURE(text);
        Expression first = Expression::parse(text);
        Expression second = Expression::parse(first.str());
        CHECK(first.structurally_equal(second));
        CHECK(first.str() == second.str());
    }

    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::string text = random_expr(rng, 5);
        CAPTURE(text);
        Expression first = Expression::parse(text);
        Expression second = Expression::parse(first.str());
        CHECK(first.structurally_equal(second));
    }
}

TEST_CASE("precedence fuzz against the shunting-yard reference") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        std::string text = random_expr(rng, 6);
        CAPTURE(text);
        Expression ast = Expression::parse(text);
        ReferenceEvaluator ref(text);
        for (int k = 0; k < 100; ++k) {
            double x = xs(rng);
            double got = ast(x);
            double want = ref.at(x);
            if (std::isfinite(want) && std::isfinite(got)) {
                CHECK(std::fabs(got - want) <=
                      1e-14 * std::max(1.0, std::fabs(want)));
            } else {
                CHECK(std::isnan(got) == std::isnan(want));
                if (!std::isnan(want)) CHECK(got == want); // same signed infinity
            }
        }
    }
}

TEST_CASE("evaluation is pure and bit-stable") {
    Expression e = Expression::parse("sin(x)*exp(-x/3) + x^2 - tanh(x)");
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> xs(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        double x = xs(rng);
        double a = e(x), b = e(x);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("variable binding") {
    Expression t = Expression::parse("2*t + 1");
    CHECK(t.variable() == "t");
    CHECK(t(3.0) == 7.0);

    Expression c = Expression::constant(42.0);
    CHECK(c(123.0) == 42.0);
    CHECK(Expression::parse(c.str())(0.0) == 42.0);

    Expression negc = Expression::constant(-2.5);
    CHECK(negc(0.0) == -2.5);
    CHECK(Expression::parse(negc.str())(0.0) == -2.5);
}

TEST_CASE("scaled-variable substitution") {
    Expression e = Expression::parse("x^2 + sin(x)");
    Expression scaled = e.with_scaled_variable(10.0);
    CHECK(scaled(15.0) == doctest::Approx(e(1.5)).epsilon(1e-15));
    // the substitution survives a print/reparse round trip
    Expression reparsed = Expression::parse(scaled.str());
    CHECK(scaled.structurally_equal(reparsed));
}
