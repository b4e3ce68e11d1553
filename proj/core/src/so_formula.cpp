#include "zolaw/so_formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "zolaw/parse.hpp"

namespace zolaw {

namespace sof {

static SORef make(SOFormula::Node n) { return std::make_shared<const SOFormula>(std::move(n)); }

SORef tru() { return make(SOTrue{}); }
SORef equal(Var a, Var b) { return make(SOEqual{std::move(a), std::move(b)}); }
SORef member(Var x, Var set) { return make(SOMember{std::move(x), std::move(set)}); }
SORef rel(Var r, std::vector<Var> args) { return make(SORel{std::move(r), std::move(args)}); }
SORef nott(SORef f) { return make(SONot{std::move(f)}); }
SORef conj(std::vector<SORef> fs) { return make(SOAnd{std::move(fs)}); }
SORef disj(std::vector<SORef> fs) { return make(SOOr{std::move(fs)}); }
SORef implies(SORef a, SORef b) { return make(SOImplies{std::move(a), std::move(b)}); }
SORef iff(SORef a, SORef b) { return conj({implies(a, b), implies(b, a)}); }
SORef exists(std::vector<Var> vars, SORef body) { return make(SOExists{std::move(vars), std::move(body)}); }
SORef forall(std::vector<Var> vars, SORef body) { return make(SOForall{std::move(vars), std::move(body)}); }
SORef exists_set(Var set, SORef body) { return make(SOExistsSet{std::move(set), std::move(body)}); }
SORef exists_rel(Var r, int arity, SORef body) { return make(SOExistsRel{std::move(r), arity, std::move(body)}); }

} // namespace sof

bool so_structurally_equal(const SORef& a, const SORef& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->node().index() != b->node().index()) return false;
    auto eq_list = [](const std::vector<SORef>& x, const std::vector<SORef>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!so_structurally_equal(x[i], y[i])) return false;
        return true;
    };
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const T& nb = *b->as<T>();
            if constexpr (std::is_same_v<T, SOTrue>) {
                return true;
            } else if constexpr (std::is_same_v<T, SOEqual>) {
                return na.a == nb.a && na.b == nb.b;
            } else if constexpr (std::is_same_v<T, SOMember>) {
                return na.x == nb.x && na.set == nb.set;
            } else if constexpr (std::is_same_v<T, SORel>) {
                return na.rel == nb.rel && na.args == nb.args;
            } else if constexpr (std::is_same_v<T, SONot>) {
                return so_structurally_equal(na.f, nb.f);
            } else if constexpr (std::is_same_v<T, SOAnd> || std::is_same_v<T, SOOr>) {
                return eq_list(na.fs, nb.fs);
            } else if constexpr (std::is_same_v<T, SOImplies>) {
                return so_structurally_equal(na.a, nb.a) && so_structurally_equal(na.b, nb.b);
            } else if constexpr (std::is_same_v<T, SOExists> || std::is_same_v<T, SOForall>) {
                return na.vars == nb.vars && so_structurally_equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, SOExistsSet>) {
                return na.set == nb.set && so_structurally_equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, SOExistsRel>) {
                return na.rel == nb.rel && na.arity == nb.arity && so_structurally_equal(na.body, nb.body);
            }
        },
        a->node());
}

namespace {

struct SOToken {
    enum class Kind { LParen, RParen, Symbol, End };
    Kind kind;
    std::string text;
    int line, column;
};

class SOLexer {
public:
    explicit SOLexer(const std::string& text) : text_(text) {}
    SOToken next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {SOToken::Kind::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') { advance(); return {SOToken::Kind::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {SOToken::Kind::RParen, ")", line, col}; }
        std::string sym;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')') break;
            sym.push_back(d);
            advance();
        }
        if (sym.empty()) throw ParseError("unexpected character", line, col);
        return {SOToken::Kind::Symbol, sym, line, col};
    }

private:
    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class SOParser {
public:
    explicit SOParser(const std::string& text) : lexer_(text) { bump(); }

    SORef parse_toplevel() {
        SORef f = parse_formula();
        if (tok_.kind != SOToken::Kind::End) fail("trailing input after formula");
        return f;
    }

private:
    void bump() { tok_ = lexer_.next(); }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok_.line, tok_.column); }

    void expect_lparen() { if (tok_.kind != SOToken::Kind::LParen) fail("expected '('"); bump(); }
    void expect_rparen() { if (tok_.kind != SOToken::Kind::RParen) fail("expected ')'"); bump(); }
    std::string expect_symbol() {
        if (tok_.kind != SOToken::Kind::Symbol) fail("expected symbol");
        std::string s = tok_.text;
        bump();
        return s;
    }
    Var expect_var() {
        SOToken at = tok_;
        std::string s = expect_symbol();
        if (!valid_var_name(s)) throw ParseError("invalid variable name '" + s + "'", at.line, at.column);
        return Var(s);
    }
    int expect_int() {
        SOToken at = tok_;
        std::string s = expect_symbol();
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("expected integer, got '" + s + "'", at.line, at.column);
        return std::stoi(s);
    }

    std::vector<Var> parse_var_list(SOToken at) {
        expect_lparen();
        std::vector<Var> vars;
        while (tok_.kind == SOToken::Kind::Symbol) vars.push_back(expect_var());
        expect_rparen();
        if (vars.empty()) throw ParseError("empty variable list", at.line, at.column);
        std::set<Var> seen;
        for (const Var& v : vars)
            if (!seen.insert(v).second)
                throw ParseError("duplicate bound variable '" + v.name + "'", at.line, at.column);
        return vars;
    }

    SORef parse_formula() {
        SOToken at = tok_;
        expect_lparen();
        std::string head = expect_symbol();
        using namespace sof;
        SORef out;
        if (head == "true") {
            out = tru();
        } else if (head == "=") {
            Var a = expect_var(), b = expect_var();
            out = equal(a, b);
        } else if (head == "member") {
            Var x = expect_var(), a = expect_var();
            out = member(x, a);
        } else if (head == "rel") {
            Var r = expect_var();
            std::vector<Var> args;
            while (tok_.kind == SOToken::Kind::Symbol) args.push_back(expect_var());
            if (args.empty()) throw ParseError("rel needs at least one argument", at.line, at.column);
            out = rel(r, std::move(args));
        } else if (head == "not") {
            out = nott(parse_formula());
        } else if (head == "and" || head == "or") {
            std::vector<SORef> fs;
            while (tok_.kind == SOToken::Kind::LParen) fs.push_back(parse_formula());
            if (fs.empty()) throw ParseError("'" + head + "' needs at least one operand", at.line, at.column);
            out = head == "and" ? conj(std::move(fs)) : disj(std::move(fs));
        } else if (head == "implies") {
            SORef a = parse_formula();
            SORef b = parse_formula();
            out = implies(a, b);
        } else if (head == "exists" || head == "forall") {
            std::vector<Var> vars = parse_var_list(at);
            SORef body = parse_formula();
            out = head == "exists" ? exists(std::move(vars), body) : forall(std::move(vars), body);
        } else if (head == "existsSet") {
            std::vector<Var> vars = parse_var_list(at);
            if (vars.size() != 1) throw ParseError("existsSet binds exactly one set variable", at.line, at.column);
            out = exists_set(vars[0], parse_formula());
        } else if (head == "existsRel") {
            expect_lparen();
            Var r = expect_var();
            int k = expect_int();
            expect_rparen();
            if (k < 1) throw ParseError("relation arity must be >= 1", at.line, at.column);
            out = exists_rel(r, k, parse_formula());
        } else {
            throw ParseError("unknown form '" + head + "'", at.line, at.column);
        }
        expect_rparen();
        return out;
    }

    SOLexer lexer_;
    SOToken tok_;
};

void so_print_to(const SORef& f, std::ostringstream& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SOTrue>) {
                out << "(true)";
            } else if constexpr (std::is_same_v<T, SOEqual>) {
                out << "(= " << n.a.name << ' ' << n.b.name << ')';
            } else if constexpr (std::is_same_v<T, SOMember>) {
                out << "(member " << n.x.name << ' ' << n.set.name << ')';
            } else if constexpr (std::is_same_v<T, SORel>) {
                out << "(rel " << n.rel.name;
                for (const Var& a : n.args) out << ' ' << a.name;
                out << ')';
            } else if constexpr (std::is_same_v<T, SONot>) {
                out << "(not ";
                so_print_to(n.f, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, SOAnd> || std::is_same_v<T, SOOr>) {
                out << (std::is_same_v<T, SOAnd> ? "(and" : "(or");
                for (const auto& s : n.fs) {
                    out << ' ';
                    so_print_to(s, out);
                }
                out << ')';
            } else if constexpr (std::is_same_v<T, SOImplies>) {
                out << "(implies ";
                so_print_to(n.a, out);
                out << ' ';
                so_print_to(n.b, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, SOExists> || std::is_same_v<T, SOForall>) {
                out << (std::is_same_v<T, SOExists> ? "(exists (" : "(forall (");
                for (std::size_t i = 0; i < n.vars.size(); ++i) {
                    if (i) out << ' ';
                    out << n.vars[i].name;
                }
                out << ") ";
                so_print_to(n.body, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, SOExistsSet>) {
                out << "(existsSet (" << n.set.name << ") ";
                so_print_to(n.body, out);
                out << ')';
            } else if constexpr (std::is_same_v<T, SOExistsRel>) {
                out << "(existsRel (" << n.rel.name << ' ' << n.arity << ") ";
                so_print_to(n.body, out);
                out << ')';
            }
        },
        f->node());
}

} // namespace

SORef so_parse(const std::string& text) {
    SOParser parser(text);
    return parser.parse_toplevel();
}

std::string so_print(const SORef& f) {
    std::ostringstream out;
    so_print_to(f, out);
    return out.str();
}

} // namespace zolaw
