#include "ahltl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ahltl {

namespace {

Expr make(Op op, Expr lhs = nullptr, Expr rhs = nullptr) {
    return std::make_shared<const Node>(Node{op, {}, {}, std::move(lhs), std::move(rhs)});
}

}  // namespace

Expr mk_true() {
    static const Expr t = make(Op::True);
    return t;
}
Expr mk_false() {
    static const Expr f = make(Op::False);
    return f;
}
Expr atom(std::string prop, std::string var) {
    return std::make_shared<const Node>(Node{Op::Atom, std::move(prop), std::move(var), nullptr, nullptr});
}
Expr lnot(Expr a) { return make(Op::Not, std::move(a)); }
Expr land(Expr a, Expr b) { return make(Op::And, std::move(a), std::move(b)); }
Expr lor(Expr a, Expr b) { return make(Op::Or, std::move(a), std::move(b)); }
Expr implies(Expr a, Expr b) { return make(Op::Implies, std::move(a), std::move(b)); }
Expr iff(Expr a, Expr b) { return make(Op::Iff, std::move(a), std::move(b)); }
Expr next(Expr a) { return make(Op::Next, std::move(a)); }
Expr until(Expr a, Expr b) { return make(Op::Until, std::move(a), std::move(b)); }
Expr globally(Expr a) { return make(Op::Globally, std::move(a)); }
Expr finally(Expr a) { return make(Op::Finally, std::move(a)); }

Expr conjunction(const std::vector<Expr>& parts) {
    if (parts.empty()) return mk_true();
    Expr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = land(acc, parts[i]);
    return acc;
}

Expr disjunction(const std::vector<Expr>& parts) {
    if (parts.empty()) return mk_false();
    Expr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = lor(acc, parts[i]);
    return acc;
}

std::vector<std::string> Formula::vars() const {
    std::vector<std::string> out;
    for (const auto& q : prefix) out.push_back(q.var);
    return out;
}

int Formula::var_index(std::string_view v) const {
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (prefix[i].var == v) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, LParen, RParen, LBrack, RBrack, Dot, Bang, Amp, Bar, Arrow, DArrow, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string s, int c) { out.push_back({k, std::move(s), line, c}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            push(Tok::Ident, std::string(text.substr(i, j - i)), col);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (text.substr(i, 3) == "<->") {
            push(Tok::DArrow, "<->", col);
            i += 3;
            col += 3;
            continue;
        }
        if (text.substr(i, 2) == "->") {
            push(Tok::Arrow, "->", col);
            i += 2;
            col += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '[': k = Tok::LBrack; break;
            case ']': k = Tok::RBrack; break;
            case '.': k = Tok::Dot; break;
            case '!': k = Tok::Bang; break;
            case '&': k = Tok::Amp; break;
            case '|': k = Tok::Bar; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        push(k, std::string(1, c), col);
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula formula() {
        Formula f;
        while (is_ident("forall") || is_ident("exists")) {
            Quant q = peek().text == "forall" ? Quant::Forall : Quant::Exists;
            ++pos_;
            Token v = expect(Tok::Ident, "trace variable");
            expect(Tok::Dot, "'.'");
            f.prefix.push_back({q, v.text});
        }
        if (is_modality()) {
            f.modality = peek().text == "E" ? Modality::E : Modality::A;
            ++pos_;
            accept(Tok::Dot);
        }
        f.body = expr();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

    Expr body_only() {
        Expr e = expr();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool is_ident(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Ident && peek(ahead).text == s;
    }
    bool is_modality() const {
        return (is_ident("E") || is_ident("A")) && peek(1).kind != Tok::LBrack;
    }
    bool is_keyword_op(std::string_view s) const { return is_ident(s) && peek(1).kind != Tok::LBrack; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail("expected " + what);
        return toks_[pos_++];
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }

    Expr expr() {
        Expr lhs = implication();
        while (accept(Tok::DArrow)) lhs = iff(lhs, implication());
        return lhs;
    }
    Expr implication() {
        Expr lhs = disj();
        if (accept(Tok::Arrow)) return implies(lhs, implication());
        return lhs;
    }
    Expr disj() {
        Expr lhs = conj();
        while (accept(Tok::Bar)) lhs = lor(lhs, conj());
        return lhs;
    }
    Expr conj() {
        Expr lhs = until_expr();
        while (accept(Tok::Amp)) lhs = land(lhs, until_expr());
        return lhs;
    }
    Expr until_expr() {
        Expr lhs = unary();
        if (is_keyword_op("U")) {
            ++pos_;
            return until(lhs, until_expr());
        }
        return lhs;
    }
    Expr unary() {
        if (accept(Tok::Bang)) return lnot(unary());
        if (is_keyword_op("X")) return ++pos_, next(unary());
        if (is_keyword_op("G")) return ++pos_, globally(unary());
        if (is_keyword_op("F")) return ++pos_, finally(unary());
        return primary();
    }
    Expr primary() {
        if (is_modality())
            throw FormulaError(FormulaErrorKind::NestedModality,
                               "nested trajectory modality at " + std::to_string(peek().line) + ":" +
                                   std::to_string(peek().column));
        if (is_ident("forall") || is_ident("exists"))
            throw FormulaError(FormulaErrorKind::Malformed, "quantifier inside temporal body at " +
                                                                std::to_string(peek().line) + ":" +
                                                                std::to_string(peek().column));
        if (is_keyword_op("true")) return ++pos_, mk_true();
        if (is_keyword_op("false")) return ++pos_, mk_false();
        if (peek().kind == Tok::Ident) {
            std::string prop = toks_[pos_++].text;
            return indexed(std::move(prop));
        }
        if (peek().kind == Tok::LParen) {
            if (std::size_t len = conj_prop_length(); len > 0) {
                std::string prop;
                ++pos_;
                for (std::size_t i = 0; i < len; ++i) {
                    const Token& t = toks_[pos_++];
                    prop += t.kind == Tok::Amp ? "&" : t.text;
                }
                ++pos_;
                return indexed(std::move(prop));
            }
            ++pos_;
            Expr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    }
    Expr indexed(std::string prop) {
        expect(Tok::LBrack, "'[' after proposition '" + prop + "'");
        Token v = expect(Tok::Ident, "trace variable");
        expect(Tok::RBrack, "']'");
        return atom(std::move(prop), v.text);
    }
    // Recognizes "( p & q & ... ) [" and returns the number of tokens between the parentheses.
    std::size_t conj_prop_length() const {
        std::size_t i = 1;
        if (peek(i).kind != Tok::Ident || peek(i + 1).kind != Tok::Amp) return 0;
        while (true) {
            if (peek(i).kind != Tok::Ident || peek(i + 1).kind == Tok::LBrack) return 0;
            ++i;
            if (peek(i).kind == Tok::RParen) return peek(i + 1).kind == Tok::LBrack ? i - 1 : 0;
            if (peek(i).kind != Tok::Amp) return 0;
            ++i;
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
    Formula f = Parser(lex(text)).formula();
    check_well_formed(f);
    return f;
}

Expr parse_body(std::string_view text) { return Parser(lex(text)).body_only(); }

void check_well_formed(const Formula& f) {
    std::set<std::string> bound;
    for (const auto& q : f.prefix)
        if (!bound.insert(q.var).second)
            throw FormulaError(FormulaErrorKind::DuplicateQuantifier, "trace variable '" + q.var + "' quantified twice");
    for (const auto& v : vars_of(f.body))
        if (!bound.count(v))
            throw FormulaError(FormulaErrorKind::UnboundVariable, "trace variable '" + v + "' is not quantified");
    if (f.prefix.size() > 32) throw FormulaError(FormulaErrorKind::Malformed, "more than 32 trace variables");
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(Op op) {
    switch (op) {
        case Op::Iff: return 1;
        case Op::Implies: return 2;
        case Op::Or: return 3;
        case Op::And: return 4;
        case Op::Until: return 5;
        case Op::Not:
        case Op::Next:
        case Op::Globally:
        case Op::Finally: return 6;
        default: return 7;
    }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, int min_prec, std::string& out) {
    if (precedence(e->op) < min_prec) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out) {
    const int p = precedence(e->op);
    switch (e->op) {
        case Op::True: out += "true"; return;
        case Op::False: out += "false"; return;
        case Op::Atom:
            if (e->prop.find('&') != std::string::npos) {
                out += '(';
                for (char c : e->prop) {
                    if (c == '&') out += " & ";
                    else out += c;
                }
                out += ')';
            } else {
                out += e->prop;
            }
            out += '[' + e->var + ']';
            return;
        case Op::Not: out += '!'; print_child(e->lhs, p, out); return;
        case Op::Next: out += "X "; print_child(e->lhs, p, out); return;
        case Op::Globally: out += "G "; print_child(e->lhs, p, out); return;
        case Op::Finally: out += "F "; print_child(e->lhs, p, out); return;
        case Op::And:
        case Op::Or:
        case Op::Iff:
            print_child(e->lhs, p, out);
            out += e->op == Op::And ? " & " : e->op == Op::Or ? " | " : " <-> ";
            print_child(e->rhs, p + 1, out);
            return;
        case Op::Implies:
        case Op::Until:
            print_child(e->lhs, p + 1, out);
            out += e->op == Op::Implies ? " -> " : " U ";
            print_child(e->rhs, p, out);
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

std::string to_string(const Formula& f) {
    std::string out;
    for (const auto& q : f.prefix) out += (q.quant == Quant::Forall ? "forall " : "exists ") + q.var + ". ";
    if (f.modality) out += *f.modality == Modality::E ? "E " : "A ";
    out += to_string(f.body);
    return out;
}

// ---------------------------------------------------------------- queries

bool equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op) return false;
    if (a->op == Op::Atom) return a->prop == b->prop && a->var == b->var;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

bool is_temporal_free(const Expr& e) {
    if (!e) return true;
    switch (e->op) {
        case Op::Next:
        case Op::Until:
        case Op::Globally:
        case Op::Finally: return false;
        default: return is_temporal_free(e->lhs) && is_temporal_free(e->rhs);
    }
}

bool has_next(const Expr& e) {
    if (!e) return false;
    return e->op == Op::Next || has_next(e->lhs) || has_next(e->rhs);
}

namespace {
void collect(const Expr& e, std::set<std::string>& vars, std::set<std::string>& props) {
    if (!e) return;
    if (e->op == Op::Atom) {
        vars.insert(e->var);
        props.insert(e->prop);
    }
    collect(e->lhs, vars, props);
    collect(e->rhs, vars, props);
}
}  // namespace

std::set<std::string> vars_of(const Expr& e) {
    std::set<std::string> v, p;
    collect(e, v, p);
    return v;
}

std::set<std::string> props_of(const Expr& e) {
    std::set<std::string> v, p;
    collect(e, v, p);
    return p;
}

std::size_t count_temporal(const Expr& e) {
    if (!e) return 0;
    const bool temporal = e->op == Op::Next || e->op == Op::Until || e->op == Op::Globally || e->op == Op::Finally;
    return (temporal ? 1 : 0) + count_temporal(e->lhs) + count_temporal(e->rhs);
}

Expr desugar(const Expr& e) {
    switch (e->op) {
        case Op::True:
        case Op::False:
        case Op::Atom: return e;
        case Op::Not: return lnot(desugar(e->lhs));
        case Op::Next: return next(desugar(e->lhs));
        case Op::Or: return lor(desugar(e->lhs), desugar(e->rhs));
        case Op::Until: return until(desugar(e->lhs), desugar(e->rhs));
        case Op::And: return lnot(lor(lnot(desugar(e->lhs)), lnot(desugar(e->rhs))));
        case Op::Implies: return lor(lnot(desugar(e->lhs)), desugar(e->rhs));
        case Op::Iff: {
            Expr a = desugar(e->lhs);
            Expr b = desugar(e->rhs);
            return lor(lnot(lor(lnot(a), lnot(b))), lnot(lor(a, b)));
        }
        case Op::Finally: return until(mk_true(), desugar(e->lhs));
        case Op::Globally: return lnot(until(mk_true(), lnot(desugar(e->lhs))));
    }
    return e;
}

Expr rename_vars(const Expr& e, const std::vector<std::pair<std::string, std::string>>& mapping) {
    if (!e) return e;
    if (e->op == Op::Atom) {
        for (const auto& [from, to] : mapping)
            if (e->var == from) return atom(e->prop, to);
        return e;
    }
    Expr l = rename_vars(e->lhs, mapping);
    Expr r = rename_vars(e->rhs, mapping);
    if (l == e->lhs && r == e->rhs) return e;
    return std::make_shared<const Node>(Node{e->op, {}, {}, l, r});
}

}  // namespace ahltl
