#pragma once

#include "gpftk/integer.hpp"
#include "gpftk/polyz.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace gpftk::poly {

// Parses the two polynomial text forms accepted by the CLI:
//   - ascending coefficient list: "16,0,12" -> 12t^2 + 16
//   - expression in one variable: "x^2+1", "-16*(4*t^3+27)"
// Throws usage_error on malformed input.

namespace detail {

constexpr int kMaxExponent = 512;

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    IntPoly parse() {
        IntPoly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    IntPoly expr() {
        IntPoly acc = term();
        for (;;) {
            skip_ws();
            if (match('+')) acc = acc + term();
            else if (match('-')) acc = acc - term();
            else return acc;
        }
    }

    IntPoly term() {
        IntPoly acc = factor();
        for (;;) {
            skip_ws();
            if (match('*')) acc = acc * factor();
            else return acc;
        }
    }

    IntPoly factor() {
        skip_ws();
        if (match('-')) return -factor();
        if (match('+')) return factor();
        return power();
    }

    IntPoly power() {
        IntPoly base = atom();
        skip_ws();
        if (!match('^')) return base;
        skip_ws();
        std::optional<Int> e = integer_literal();
        if (!e || *e < 0) fail("exponent must be a nonnegative integer literal");
        if (*e > kMaxExponent) fail("exponent too large");
        return base.pow_u(e->convert_to<unsigned>());
    }

    IntPoly atom() {
        skip_ws();
        if (match('(')) {
            IntPoly inner = expr();
            skip_ws();
            if (!match(')')) fail("missing closing parenthesis");
            return inner;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
            std::optional<Int> v = integer_literal();
            if (!v) fail("bad integer literal");
            return IntPoly::constant(*v);
        }
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::string name;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                name.push_back(s_[pos_++]);
            if (var_.empty()) var_ = name;
            else if (var_ != name)
                fail("polynomial must use a single variable (saw '" + var_ + "' and '" + name + "')");
            return IntPoly::variable();
        }
        fail("expected integer, variable or parenthesized expression");
    }

    std::optional<Int> integer_literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) return std::nullopt;
        return Int(std::string(s_.substr(start, pos_ - start)));
    }

    bool match(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw usage_error("polynomial parse error at position " + std::to_string(pos_) + ": " + why);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::string var_;
};

inline bool looks_like_coeff_list(std::string_view s) {
    bool has_digit = false;
    for (char ch : s) {
        if (std::isdigit(static_cast<unsigned char>(ch))) has_digit = true;
        else if (ch != ',' && ch != '-' && ch != '+' && !std::isspace(static_cast<unsigned char>(ch)))
            return false;
    }
    return has_digit && s.find(',') != std::string_view::npos;
}

}  // namespace detail

inline IntPoly parse_poly(std::string_view text) {
    if (text.empty()) throw usage_error("empty polynomial");
    if (detail::looks_like_coeff_list(text)) {
        std::vector<Int> coeffs;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            std::size_t b = 0, e = tok.size();
            while (b < e && std::isspace(static_cast<unsigned char>(tok[b]))) ++b;
            while (e > b && std::isspace(static_cast<unsigned char>(tok[e - 1]))) --e;
            if (b == e) throw usage_error("empty coefficient in list");
            try {
                coeffs.emplace_back(std::string(tok.substr(b, e - b)));
            } catch (const std::exception&) {
                throw usage_error("bad coefficient '" + std::string(tok) + "'");
            }
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return IntPoly(std::move(coeffs));
    }
    return detail::ExprParser(text).parse();
}

}  // namespace gpftk::poly
