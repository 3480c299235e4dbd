#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/poly.hpp"
#include "tropgrob/valued_field.hpp"

namespace tropgrob {

namespace detail {

// Recursive descent parser for polynomial expressions over a valued field:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ['^' exponent]
//   atom   := INT | 't' | VAR | '(' expr ')'
// '/' requires a single-term divisor (field constant or Laurent monomial).
// 't' admits rational exponents in (1/N)Z; everything else integer ones.
class PolyParser {
public:
    PolyParser(std::string text, const FieldSpec& spec, const std::vector<std::string>& vars)
        : text_(std::move(text)), spec_(spec), vars_(vars) {}

    KPoly parse() {
        KPoly p = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input at '" + text_.substr(pos_) + "'");
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Int integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected integer at '" + text_.substr(start) + "'");
        return Int(text_.substr(start, pos_ - start));
    }

    std::string name() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && (isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            if (start == pos_ && isdigit(static_cast<unsigned char>(text_[pos_]))) break;
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    KPoly constant(const FieldElement& c) {
        KPoly p(static_cast<int>(vars_.size()));
        p.add_term(Monomial::unit(p.arity()), c);
        return p;
    }

    // Signed rational, used for exponents: INT | -INT | INT/INT | -INT/INT.
    Rat signed_rational() {
        bool neg = eat('-');
        Int num = integer();
        Int den = 1;
        if (eat('/')) den = integer();
        if (den == 0) throw ParseError("zero denominator in exponent");
        Rat q(num, den);
        return neg ? -q : q;
    }

    KPoly expr() {
        bool neg = eat('-');
        KPoly acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    KPoly term() {
        KPoly acc = factor();
        while (true) {
            if (eat('*'))
                acc = acc * factor();
            else if (eat('/')) {
                KPoly d = factor();
                if (d.is_zero()) throw ZeroDivision("division by zero in expression");
                if (!d.is_monomial())
                    throw ParseError("division only by single-term expressions");
                const auto& [m, c] = *d.terms().begin();
                KPoly r(acc.arity());
                for (const auto& [ma, ca] : acc.terms()) r.add_term(ma - m, ca / c);
                acc = r;
            } else
                return acc;
        }
    }

    KPoly factor() {
        skip_ws();
        char c = peek();
        // 't' followed by '^' takes rational exponents, handled here so the
        // generic power logic below stays integral.
        if ((isalpha(static_cast<unsigned char>(c)) || c == '_')) {
            size_t save = pos_;
            std::string id = name();
            if (id == "t") {
                if (spec_.kind() != FieldKind::TAdic)
                    throw ParseError("t is not an element of " + spec_.str());
                Rat q(1);
                if (eat('^')) {
                    if (eat('(')) {
                        q = signed_rational();
                        if (!eat(')')) throw ParseError("expected ')' after exponent");
                    } else
                        q = signed_rational();
                }
                return constant(FieldElement::t_power(spec_, q));
            }
            pos_ = save;
        }
        KPoly base = atom();
        if (!eat('^')) return base;
        long k;
        if (eat('(')) {
            Rat q = signed_rational();
            if (!eat(')')) throw ParseError("expected ')' after exponent");
            if (rat_den(q) != 1) throw ParseError("non-integer exponent on a polynomial");
            k = static_cast<long>(rat_num(q));
        } else {
            Rat q = signed_rational();
            if (rat_den(q) != 1) throw ParseError("non-integer exponent on a polynomial");
            k = static_cast<long>(rat_num(q));
        }
        if (k >= 0) {
            KPoly acc = constant(FieldElement::one(spec_));
            for (long i = 0; i < k; ++i) acc = acc * base;
            return acc;
        }
        if (!base.is_monomial())
            throw ParseError("negative exponent only on single-term expressions");
        const auto& [m, coeff] = *base.terms().begin();
        KPoly acc = constant(FieldElement::one(spec_));
        KPoly invp(base.arity());
        Monomial mm = Monomial::unit(base.arity()) - m;
        invp.add_term(mm, FieldElement::one(spec_) / coeff);
        for (long i = 0; i < -k; ++i) acc = acc * invp;
        return acc;
    }

    KPoly atom() {
        skip_ws();
        char c = peek();
        if (isdigit(static_cast<unsigned char>(c)))
            return constant(FieldElement::from_rat(spec_, Rat(integer())));
        if (c == '(') {
            ++pos_;
            KPoly p = expr();
            if (!eat(')')) throw ParseError("expected ')'");
            return p;
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id = name();
            for (size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == id) {
                    KPoly p(static_cast<int>(vars_.size()));
                    std::vector<int> e(vars_.size(), 0);
                    e[i] = 1;
                    p.add_term(Monomial(std::move(e)), FieldElement::one(spec_));
                    return p;
                }
            throw ParseError("unknown variable '" + id + "'");
        }
        throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }

    std::string text_;
    size_t pos_ = 0;
    const FieldSpec& spec_;
    const std::vector<std::string>& vars_;
};

}  // namespace detail

inline KPoly parse_poly(const std::string& text, const FieldSpec& spec,
                        const std::vector<std::string>& vars) {
    return detail::PolyParser(text, spec, vars).parse();
}

inline FieldElement parse_element(const std::string& text, const FieldSpec& spec) {
    KPoly p = parse_poly(text, spec, {});
    if (p.is_zero()) return FieldElement::zero(spec);
    return p.terms().begin()->second;
}

// Canonical printing: terms in descending lexicographic order, '*' separated
// factors, '^' powers, unit coefficients omitted. Round-trips through
// parse_poly.
template <class C>
std::string poly_str(const Polynomial<C>& f, const std::vector<std::string>& vars) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        std::string mono;
        for (int i = 0; i < m.arity(); ++i) {
            if (m.e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[i];
            if (m.e[i] != 1) mono += "^" + std::to_string(m.e[i]);
        }
        std::string cs = c.str();
        bool parens = false;
        for (size_t i = 1; i < cs.size() && !parens; ++i)
            if ((cs[i] == '+' || cs[i] == '-') && cs[i - 1] != '(' && cs[i - 1] != '/')
                parens = true;
        std::string term;
        if (mono.empty())
            term = parens ? "(" + cs + ")" : cs;
        else if (c.is_one())
            term = mono;
        else if (parens)
            term = "(" + cs + ")*" + mono;
        else
            term = cs + "*" + mono;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

inline QVec parse_weight(const std::string& text) {
    QVec w;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) w.push_back(parse_rat(item));
    if (w.empty()) throw ParseError("empty weight vector");
    return w;
}

inline std::string weight_str(const QVec& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += rat_str(w[i]);
    }
    return s;
}

// Options shared by the CLI and problem files.
struct Options {
    std::optional<long> degree_bound;  // D
    long slack = 2;
    std::string mode = "state";  // state | traversal | both
    unsigned long seed = 0;
};

// A parsed problem file: line-oriented, in order
//   field Qp p=<prime> | field Qt N=<int>
//   ring <name>(,<name>)*
//   poly <expr>          (repeatable)
//   weight <q>(,<q>)*    (repeatable)
//   option D=<int> slack=<int> mode=<m> seed=<int>
// Blank lines and lines starting with '#' are ignored.
struct Problem {
    std::optional<FieldSpec> field;
    std::vector<std::string> vars;
    std::vector<KPoly> polys;
    std::vector<QVec> weights;
    Options options;

    const FieldSpec& field_spec() const {
        if (!field) throw ParseError("missing 'field' line");
        return *field;
    }
    int arity() const { return static_cast<int>(vars.size()); }
};

inline Problem parse_problem(std::istream& in) {
    Problem prob;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        size_t b = line.find_first_of(" \t", a);
        std::string kw = line.substr(a, b == std::string::npos ? std::string::npos : b - a);
        std::string rest = b == std::string::npos ? "" : line.substr(b + 1);
        if (kw == "field") {
            std::stringstream ss(rest);
            std::string kind, param;
            ss >> kind >> param;
            if (kind == "Qp") {
                if (param.rfind("p=", 0) != 0) fail("expected p=<prime> after Qp");
                prob.field = FieldSpec::padic(Int(param.substr(2)));
            } else if (kind == "Qt") {
                if (param.rfind("N=", 0) != 0) fail("expected N=<int> after Qt");
                prob.field = FieldSpec::tadic(std::stol(param.substr(2)));
            } else
                fail("unknown field kind '" + kind + "'");
        } else if (kw == "ring") {
            std::string item;
            std::stringstream ss(rest);
            while (std::getline(ss, item, ',')) {
                std::string v;
                for (char c : item)
                    if (!isspace(static_cast<unsigned char>(c))) v += c;
                if (v.empty() || v == "t") fail("bad variable name");
                prob.vars.push_back(v);
            }
            if (prob.vars.empty()) fail("empty ring line");
        } else if (kw == "poly") {
            if (!prob.field) fail("poly before field");
            if (prob.vars.empty()) fail("poly before ring");
            KPoly p = parse_poly(rest, *prob.field, prob.vars);
            if (p.is_zero()) fail("zero polynomial");
            prob.polys.push_back(std::move(p));
        } else if (kw == "weight") {
            QVec w = parse_weight(rest);
            if (w.size() != prob.vars.size()) fail("weight length does not match ring arity");
            prob.weights.push_back(std::move(w));
        } else if (kw == "option") {
            std::stringstream ss(rest);
            std::string item;
            while (ss >> item) {
                auto eq = item.find('=');
                if (eq == std::string::npos) fail("options must look like key=value");
                std::string key = item.substr(0, eq), value = item.substr(eq + 1);
                try {
                    if (key == "D")
                        prob.options.degree_bound = std::stol(value);
                    else if (key == "slack")
                        prob.options.slack = std::stol(value);
                    else if (key == "mode") {
                        if (value != "state" && value != "traversal" && value != "both")
                            fail("mode must be state, traversal or both");
                        prob.options.mode = value;
                    } else if (key == "seed")
                        prob.options.seed = std::stoul(value);
                    else
                        fail("unknown option '" + key + "'");
                } catch (const TropError&) {
                    throw;
                } catch (const std::exception&) {
                    fail("bad value for option '" + key + "'");
                }
            }
        } else
            fail("unknown keyword '" + kw + "'");
    }
    return prob;
}

inline Problem parse_problem_text(const std::string& text) {
    std::stringstream ss(text);
    return parse_problem(ss);
}

}  // namespace tropgrob
