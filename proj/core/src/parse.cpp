#include "zolaw/parse.hpp"

#include <cctype>
#include <sstream>

namespace zolaw {

namespace {

struct Token {
    enum class Kind { LParen, RParen, Pipe, Symbol, End };
    Kind kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::Kind::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') { advance(); return {Token::Kind::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {Token::Kind::RParen, ")", line, col}; }
        if (c == '|') { advance(); return {Token::Kind::Pipe, "|", line, col}; }
        std::string sym;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '|') break;
            sym.push_back(d);
            advance();
        }
        if (sym.empty()) throw ParseError("unexpected character", line, col);
        return {Token::Kind::Symbol, sym, line, col};
    }

private:
    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { bump(); }

    FormulaRef parse_toplevel() {
        FormulaRef f = parse_formula();
        expect_end();
        return f;
    }

private:
    void bump() { tok_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok_.line, tok_.column); }

    void expect_lparen() {
        if (tok_.kind != Token::Kind::LParen) fail("expected '('");
        bump();
    }
    void expect_rparen() {
        if (tok_.kind != Token::Kind::RParen) fail("expected ')'");
        bump();
    }
    void expect_pipe() {
        if (tok_.kind != Token::Kind::Pipe) fail("expected '|'");
        bump();
    }
    void expect_end() {
        if (tok_.kind != Token::Kind::End) fail("trailing input after formula");
    }
    std::string expect_symbol() {
        if (tok_.kind != Token::Kind::Symbol) fail("expected symbol");
        std::string s = tok_.text;
        bump();
        return s;
    }

    Var expect_var() {
        Token at = tok_;
        std::string s = expect_symbol();
        if (!valid_var_name(s)) throw ParseError("invalid variable name '" + s + "'", at.line, at.column);
        return Var(s);
    }

    int expect_int() {
        Token at = tok_;
        std::string s = expect_symbol();
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("expected integer, got '" + s + "'", at.line, at.column);
        return std::stoi(s);
    }

    QuantName expect_qname() {
        Token at = tok_;
        std::string s = expect_symbol();
        if (s == "conn") return QuantName::conn();
        if (s == "ham") return QuantName::ham();
        if (s.rfind("chr", 0) == 0 && s.size() > 3 &&
            std::all_of(s.begin() + 3, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int k = std::stoi(s.substr(3));
            if (k < 1) throw ParseError("chr quantifier needs k >= 1", at.line, at.column);
            return QuantName::chr(k);
        }
        throw ParseError("unknown quantifier name '" + s + "'", at.line, at.column);
    }

    // "(" var+ ")"
    std::vector<Var> parse_var_list(Token at) {
        expect_lparen();
        std::vector<Var> vars;
        while (tok_.kind == Token::Kind::Symbol) vars.push_back(expect_var());
        expect_rparen();
        if (vars.empty()) throw ParseError("empty variable list", at.line, at.column);
        check_duplicates(vars, at);
        return vars;
    }

    // "(" var+ "|" var+ ")" with both halves the same length.
    std::pair<std::vector<Var>, std::vector<Var>> parse_split_list(Token at) {
        expect_lparen();
        std::vector<Var> left, right;
        while (tok_.kind == Token::Kind::Symbol) left.push_back(expect_var());
        expect_pipe();
        while (tok_.kind == Token::Kind::Symbol) right.push_back(expect_var());
        expect_rparen();
        if (left.empty() || right.empty()) throw ParseError("empty variable list", at.line, at.column);
        std::vector<Var> all = left;
        all.insert(all.end(), right.begin(), right.end());
        check_duplicates(all, at);
        return {left, right};
    }

    void check_duplicates(const std::vector<Var>& vars, Token at) {
        std::set<Var> seen;
        for (const Var& v : vars)
            if (!seen.insert(v).second)
                throw ParseError("duplicate bound variable '" + v.name + "'", at.line, at.column);
    }

    FormulaRef parse_formula() {
        Token at = tok_;
        expect_lparen();
        std::string head = expect_symbol();
        using namespace fml;
        FormulaRef out;
        if (head == "true") {
            out = tru();
        } else if (head == "=") {
            Var a = expect_var(), b = expect_var();
            out = equal(a, b);
        } else if (head == "adj") {
            Var a = expect_var(), b = expect_var();
            out = adj(a, b);
        } else if (head == "not") {
            out = nott(parse_formula());
        } else if (head == "and" || head == "or") {
            std::vector<FormulaRef> fs;
            while (tok_.kind == Token::Kind::LParen) fs.push_back(parse_formula());
            if (fs.empty()) throw ParseError("'" + head + "' needs at least one operand", at.line, at.column);
            out = head == "and" ? conj(std::move(fs)) : disj(std::move(fs));
        } else if (head == "implies") {
            FormulaRef a = parse_formula();
            FormulaRef b = parse_formula();
            out = implies(a, b);
        } else if (head == "exists" || head == "forall") {
            std::vector<Var> vars = parse_var_list(at);
            FormulaRef body = parse_formula();
            out = head == "exists" ? exists(std::move(vars), body) : forall(std::move(vars), body);
        } else if (head == "Q") {
            QuantName q = expect_qname();
            std::vector<Var> xy = parse_var_list(at);
            if (xy.size() != 2) throw ParseError("Q binds exactly two variables", at.line, at.column);
            FormulaRef edge = parse_formula();
            out = qweak(q, xy[0], xy[1], edge);
        } else if (head == "Qrl") {
            QuantName q = expect_qname();
            std::vector<Var> vs = parse_var_list(at);
            if (vs.size() != 1) throw ParseError("Qrl domain binds exactly one variable", at.line, at.column);
            FormulaRef dom = parse_formula();
            std::vector<Var> xy = parse_var_list(at);
            if (xy.size() != 2) throw ParseError("Qrl edge binds exactly two variables", at.line, at.column);
            FormulaRef edge = parse_formula();
            out = qrel(q, vs[0], dom, xy[0], xy[1], edge);
        } else if (head == "Qeq") {
            QuantName q = expect_qname();
            std::vector<Var> vs = parse_var_list(at);
            if (vs.size() != 1) throw ParseError("Qeq domain binds exactly one variable", at.line, at.column);
            FormulaRef dom = parse_formula();
            std::vector<Var> uw = parse_var_list(at);
            if (uw.size() != 2) throw ParseError("Qeq equality binds exactly two variables", at.line, at.column);
            FormulaRef eq = parse_formula();
            std::vector<Var> xy = parse_var_list(at);
            if (xy.size() != 2) throw ParseError("Qeq edge binds exactly two variables", at.line, at.column);
            FormulaRef edge = parse_formula();
            out = qeq(q, vs[0], dom, uw[0], uw[1], eq, xy[0], xy[1], edge);
        } else if (head == "Qtu") {
            QuantName q = expect_qname();
            int len = expect_int();
            if (len < 1) throw ParseError("Qtu length must be >= 1", at.line, at.column);
            std::vector<Var> vbar = parse_var_list(at);
            FormulaRef dom = parse_formula();
            auto [ubar, wbar] = parse_split_list(at);
            FormulaRef eq = parse_formula();
            auto [xbar, ybar] = parse_split_list(at);
            FormulaRef edge = parse_formula();
            auto l = static_cast<std::size_t>(len);
            if (vbar.size() != l || ubar.size() != l || wbar.size() != l || xbar.size() != l || ybar.size() != l)
                throw ParseError("Qtu tuple lists must all have length " + std::to_string(len), at.line, at.column);
            out = qtu(q, len, vbar, dom, ubar, wbar, eq, xbar, ybar, edge);
        } else {
            throw ParseError("unknown form '" + head + "'", at.line, at.column);
        }
        expect_rparen();
        return out;
    }

    Lexer lexer_;
    Token tok_;
};

void print_to(const FormulaRef& f, std::ostringstream& out);

void print_vars(const std::vector<Var>& vars, std::ostringstream& out) {
    out << '(';
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out << ' ';
        out << vars[i].name;
    }
    out << ')';
}

void print_split(const std::vector<Var>& a, const std::vector<Var>& b, std::ostringstream& out) {
    out << '(';
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out << ' ';
        out << a[i].name;
    }
    out << " | ";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) out << ' ';
        out << b[i].name;
    }
    out << ')';
}

void print_to(const FormulaRef& f, std::ostringstream& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrueF>) {
                out << "(true)";
            } else if constexpr (std::is_same_v<T, EqualF>) {
                out << "(= " << n.a.name << ' ' << n.b.name << ')';
            } else if constexpr (std::is_same_v<T, AdjF>) {
                out << "(adj " << n.a.name << ' ' << n.b.name << ')';
            } else if constexpr (std::is_same_v<T, NotF>) {
                out << "(not ";
                print_to(n.f, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                out << (std::is_same_v<T, AndF> ? "(and" : "(or");
                for (const auto& s : n.fs) {
                    out << ' ';
                    print_to(s, out);
                }
                out << ')';
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                out << "(implies ";
                print_to(n.a, out);
                out << ' ';
                print_to(n.b, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                out << (std::is_same_v<T, ExistsF> ? "(exists " : "(forall ");
                print_vars(n.vars, out);
                out << ' ';
                print_to(n.body, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                out << "(Q " << n.q.text() << ' ';
                print_vars({n.x, n.y}, out);
                out << ' ';
                print_to(n.edge, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, QRelF>) {
                out << "(Qrl " << n.q.text() << ' ';
                print_vars({n.v}, out);
                out << ' ';
                print_to(n.dom, out);
                out << ' ';
                print_vars({n.x, n.y}, out);
                out << ' ';
                print_to(n.edge, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, QEqF>) {
                out << "(Qeq " << n.q.text() << ' ';
                print_vars({n.v}, out);
                out << ' ';
                print_to(n.dom, out);
                out << ' ';
                print_vars({n.u, n.w}, out);
                out << ' ';
                print_to(n.eq, out);
                out << ' ';
                print_vars({n.x, n.y}, out);
                out << ' ';
                print_to(n.edge, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, QTuF>) {
                out << "(Qtu " << n.q.text() << ' ' << n.len << ' ';
                print_vars(n.vbar, out);
                out << ' ';
                print_to(n.dom, out);
                out << ' ';
                print_split(n.ubar, n.wbar, out);
                out << ' ';
                print_to(n.eq, out);
                out << ' ';
                print_split(n.xbar, n.ybar, out);
                out << ' ';
                print_to(n.edge, out);
                out << ')';
            }
        },
        f->node());
}

} // namespace

FormulaRef parse(const std::string& text) {
    Parser parser(text);
    return parser.parse_toplevel();
}

std::string print(const FormulaRef& f) {
    std::ostringstream out;
    print_to(f, out);
    return out.str();
}

} // namespace zolaw
