#ifndef DYNDEG_EXPR_PARSER_HPP
#define DYNDEG_EXPR_PARSER_HPP

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <dyndeg/core.hpp>
#include <dyndeg/polynomial.hpp>

namespace dyndeg
{

// Recursive-descent parser for integer polynomial expressions:
//   list   := expr (',' expr)*
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | name | '(' expr ')'
// Names are looked up in a fixed table. The Unicode minus sign is accepted.
class ExprParser
{
public:
    ExprParser(std::string_view text, std::vector<std::string> names) : m_text(text), m_names(std::move(names)) {}

    std::vector<Poly> parse_list()
    {
        std::vector<Poly> out;
        out.push_back(parse_expr());
        while (peek() == ',') {
            ++m_pos;
            out.push_back(parse_expr());
        }
        skip_space();
        if (m_pos != m_text.size()) {
            fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
        }
        return out;
    }

    Poly parse_single()
    {
        Poly p = parse_expr();
        skip_space();
        if (m_pos != m_text.size()) {
            fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw input_error("syntax error at position " + std::to_string(m_pos) + ": " + what);
    }

    void skip_space()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
    }

    // Next significant character, with the UTF-8 minus sign folded to '-'.
    char peek()
    {
        skip_space();
        if (m_pos >= m_text.size()) {
            return '\0';
        }
        if (m_text.compare(m_pos, 3, "\xE2\x88\x92") == 0) {
            return '-';
        }
        return m_text[m_pos];
    }

    void consume(char c)
    {
        if (c == '-' && m_text.compare(m_pos, 3, "\xE2\x88\x92") == 0) {
            m_pos += 3;
        } else {
            ++m_pos;
        }
    }

    Poly parse_expr()
    {
        Poly acc = parse_term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            consume(c);
            Poly t = parse_term();
            if (c == '+') {
                acc += t;
            } else {
                acc -= t;
            }
        }
        return acc;
    }

    Poly parse_term()
    {
        Poly acc = parse_unary();
        while (peek() == '*') {
            consume('*');
            acc *= parse_unary();
        }
        return acc;
    }

    Poly parse_unary()
    {
        char c = peek();
        if (c == '-' || c == '+') {
            consume(c);
            Poly p = parse_unary();
            return c == '-' ? -p : p;
        }
        return parse_power();
    }

    Poly parse_power()
    {
        Poly base = parse_atom();
        if (peek() == '^') {
            consume('^');
            skip_space();
            std::size_t start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            if (start == m_pos) {
                fail("expected a nonnegative integer exponent");
            }
            std::string digits(m_text.substr(start, m_pos - start));
            if (digits.size() > 9) {
                fail("exponent too large");
            }
            return pow(base, std::stoll(digits));
        }
        return base;
    }

    Poly parse_atom()
    {
        char c = peek();
        const std::size_t n = m_names.size();
        if (c == '(') {
            consume('(');
            Poly p = parse_expr();
            if (peek() != ')') {
                fail("expected ')'");
            }
            consume(')');
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            return Poly::constant(n, integer(std::string(m_text.substr(start, m_pos - start)), 10));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = m_pos;
            while (m_pos < m_text.size()
                   && (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '_')) {
                ++m_pos;
            }
            std::string name(m_text.substr(start, m_pos - start));
            for (std::size_t i = 0; i < n; ++i) {
                if (m_names[i] == name) {
                    return Poly::variable(n, i);
                }
            }
            m_pos = start;
            fail("unknown variable '" + name + "'");
        }
        if (c == '\0') {
            fail("unexpected end of input");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view m_text;
    std::vector<std::string> m_names;
    std::size_t m_pos = 0;
};

inline std::vector<std::string> projective_names(std::size_t k, const std::string &stem = "x")
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i <= k; ++i) {
        names.push_back(stem + std::to_string(i));
    }
    return names;
}

inline std::vector<Poly> parse_poly_list(std::string_view text, std::vector<std::string> names)
{
    return ExprParser(text, std::move(names)).parse_list();
}

inline Poly parse_poly(std::string_view text, std::vector<std::string> names)
{
    return ExprParser(text, std::move(names)).parse_single();
}

} // namespace dyndeg

#endif
