#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lqt/rational_function.hpp"

namespace lqt
{

class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string &what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position)
    {
    }

    // Zero-based offset into the parsed text.
    std::size_t position() const noexcept
    {
        return position_;
    }

private:
    std::size_t position_;
};

namespace detail
{

//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' uint)?
//   base   := ident | int | '(' expr ')'
class ExprParser
{
public:
    ExprParser(std::string_view text, const Symbols &vars) : s_(text), vars_(vars) {}

    RationalFunction parse()
    {
        skip();
        if (pos_ == s_.size()) {
            throw ParseError("empty expression", pos_);
        }
        RationalFunction r = expr();
        skip();
        if (pos_ != s_.size()) {
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        }
        return r;
    }

private:
    static constexpr std::uint32_t max_exponent = 100000;

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalFunction expr()
    {
        RationalFunction acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    RationalFunction term()
    {
        RationalFunction acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                RationalFunction d = unary();
                if (d.is_zero()) {
                    throw ParseError("division by zero", at);
                }
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    RationalFunction unary()
    {
        if (accept('-')) {
            return -unary();
        }
        return factor();
    }

    RationalFunction factor()
    {
        RationalFunction b = base();
        if (accept('^')) {
            skip();
            const std::size_t at = pos_;
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_++];
            }
            if (digits.empty()) {
                throw ParseError("expected exponent", at);
            }
            if (digits.size() > 6 || std::stoul(digits) > max_exponent) {
                throw ParseError("exponent too large", at);
            }
            return b.pow(static_cast<std::int64_t>(std::stoul(digits)));
        }
        return b;
    }

    RationalFunction base()
    {
        skip();
        if (pos_ == s_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RationalFunction r = expr();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_++];
            }
            return RationalFunction::constant(vars_, Rational(Integer(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t at = pos_;
            std::string name;
            while (pos_ < s_.size()
                   && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                name += s_[pos_++];
            }
            auto idx = vars_.index_of(name);
            if (!idx) {
                throw ParseError("unknown identifier '" + name + "'", at);
            }
            return RationalFunction(Polynomial::variable(vars_, *idx));
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::string_view s_;
    const Symbols &vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline RationalFunction parse_expr(std::string_view text, const Symbols &vars)
{
    return detail::ExprParser(text, vars).parse();
}

inline RationalFunction parse_expr(std::string_view text, const std::vector<std::string> &vars)
{
    return parse_expr(text, Symbols(vars));
}

} // namespace lqt
