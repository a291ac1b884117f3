#include "odospec/expr.hpp"

#include <cctype>

namespace odospec {

namespace {

struct Parser {
    const std::string& text;
    const std::map<std::string, Laurent>& env;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, 1, static_cast<int>(pos) + 1);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    DiffOp parse_expr() {
        DiffOp acc = parse_term();
        while (true) {
            if (eat('+'))
                acc += parse_term();
            else if (eat('-'))
                acc -= parse_term();
            else
                return acc;
        }
    }

    DiffOp parse_term() {
        DiffOp acc = parse_factor();
        while (eat('*')) acc = mul(acc, parse_factor());
        return acc;
    }

    DiffOp parse_factor() {
        DiffOp base = parse_atom();
        if (eat('^')) {
            skip_ws();
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) fail("expected a nonnegative integer exponent");
            long e = std::stol(text.substr(start, pos - start));
            base = base.pow(e);
        }
        return base;
    }

    DiffOp parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            DiffOp inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos;
            return -parse_atom();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos < text.size() && text[pos] == '/') {
                ++pos;
                size_t dstart = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == dstart) fail("expected a denominator");
            }
            Rat r = parse_rat(text.substr(start, pos - start));
            return DiffOp::from_series(Laurent::constant(Scalar(r)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            if (name == "d") return DiffOp::d_power(1);
            if (name == "z") return DiffOp::from_series(Laurent::poly({Scalar(0), Scalar(1)}));
            auto it = env.find(name);
            if (it == env.end()) fail("unbound series '" + name + "'");
            return DiffOp::from_series(it->second);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

DiffOp parse_operator(const std::string& text, const std::map<std::string, Laurent>& env) {
    Parser p{text, env};
    DiffOp result = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return result;
}

}  // namespace odospec
