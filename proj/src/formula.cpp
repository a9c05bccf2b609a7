#include "teamlogic/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace teamlogic {

ParseError::ParseError(std::size_t off, std::vector<std::string> exp)
    : Error([&] {
          std::ostringstream os;
          os << "parse error at byte " << off << ": expected ";
          for (std::size_t i = 0; i < exp.size(); ++i) {
              if (i)
                  os << (i + 1 == exp.size() ? " or " : ", ");
              os << exp[i];
          }
          return os.str();
      }()),
      offset(off), expected(std::move(exp)) {}

// --- constructors ---------------------------------------------------------

namespace {
FPtr mk(Conn k, std::string n = {}, FPtr a = nullptr, FPtr b = nullptr) {
    return std::make_shared<const Formula>(k, std::move(n), std::move(a), std::move(b));
}
} // namespace

FPtr atom(std::string name) { return mk(Conn::Atom, std::move(name)); }
FPtr ne() {
    static const FPtr f = mk(Conn::Ne);
    return f;
}
FPtr bot() {
    static const FPtr f = mk(Conn::Bot);
    return f;
}
FPtr bot_strong() {
    static const FPtr f = mk(Conn::BotStrong);
    return f;
}
FPtr top() {
    static const FPtr f = mk(Conn::Top);
    return f;
}
FPtr neg(FPtr f) { return mk(Conn::Neg, {}, std::move(f)); }
FPtr dia(FPtr f) { return mk(Conn::Dia, {}, std::move(f)); }
FPtr box(FPtr f) { return mk(Conn::Box, {}, std::move(f)); }
FPtr oslash(FPtr f) { return mk(Conn::Oslash, {}, std::move(f)); }
FPtr conj(FPtr l, FPtr r) { return mk(Conn::And, {}, std::move(l), std::move(r)); }
FPtr tensor(FPtr l, FPtr r) { return mk(Conn::Or, {}, std::move(l), std::move(r)); }
FPtr gdis(FPtr l, FPtr r) { return mk(Conn::GOr, {}, std::move(l), std::move(r)); }

namespace {
FPtr fold_right(const std::vector<FPtr>& fs, FPtr (*op)(FPtr, FPtr), FPtr unit) {
    if (fs.empty())
        return unit;
    FPtr acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;)
        acc = op(fs[i], acc);
    return acc;
}
} // namespace

FPtr big_and(const std::vector<FPtr>& fs) { return fold_right(fs, conj, top()); }
FPtr big_or(const std::vector<FPtr>& fs) { return fold_right(fs, tensor, bot()); }
FPtr big_gor(const std::vector<FPtr>& fs) { return fold_right(fs, gdis, bot_strong()); }

// --- syntax ---------------------------------------------------------------

bool equal(const FPtr& x, const FPtr& y) {
    if (x.get() == y.get())
        return true;
    if (!x || !y || x->kind != y->kind)
        return false;
    switch (x->kind) {
    case Conn::Atom:
        return x->name == y->name;
    case Conn::Ne:
    case Conn::Bot:
    case Conn::BotStrong:
    case Conn::Top:
        return true;
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash:
        return equal(x->a, y->a);
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        return equal(x->a, y->a) && equal(x->b, y->b);
    }
    return false;
}

namespace {

// Precedence levels for printing: higher binds tighter.
int prec(Conn k) {
    switch (k) {
    case Conn::GOr:
        return 1;
    case Conn::Or:
        return 2;
    case Conn::And:
        return 3;
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash:
        return 4;
    default:
        return 5;
    }
}

const char* binop_text(Conn k) {
    switch (k) {
    case Conn::And:
        return " & ";
    case Conn::Or:
        return " | ";
    default:
        return " \\/ ";
    }
}

void print_rec(const FPtr& f, int ctx, bool right_operand, std::string& out) {
    const int p = prec(f->kind);
    const bool parens = p < ctx || (p == ctx && right_operand && p <= 3);
    if (parens)
        out += '(';
    switch (f->kind) {
    case Conn::Atom:
        out += f->name;
        break;
    case Conn::Ne:
        out += "NE";
        break;
    case Conn::Bot:
        out += "bot";
        break;
    case Conn::BotStrong:
        out += "Bot";
        break;
    case Conn::Top:
        out += "Top";
        break;
    case Conn::Neg:
        out += '~';
        print_rec(f->a, 4, false, out);
        break;
    case Conn::Dia:
        out += "<>";
        print_rec(f->a, 4, false, out);
        break;
    case Conn::Box:
        out += "[]";
        print_rec(f->a, 4, false, out);
        break;
    case Conn::Oslash:
        out += '@';
        print_rec(f->a, 4, false, out);
        break;
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        print_rec(f->a, p, false, out);
        out += binop_text(f->kind);
        print_rec(f->b, p, true, out);
        break;
    }
    if (parens)
        out += ')';
}

} // namespace

std::string print_formula(const FPtr& f) {
    std::string out;
    print_rec(f, 0, false, out);
    return out;
}

bool canonical_less(const FPtr& x, const FPtr& y) {
    return print_formula(x) < print_formula(y);
}

std::vector<FPtr> sort_unique(std::vector<FPtr> fs) {
    std::vector<std::pair<std::string, FPtr>> keyed;
    keyed.reserve(fs.size());
    for (auto& f : fs)
        keyed.emplace_back(print_formula(f), std::move(f));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<FPtr> out;
    for (auto& kv : keyed)
        if (out.empty() || kv.first != print_formula(out.back()))
            out.push_back(std::move(kv.second));
    return out;
}

// --- parser -----------------------------------------------------------------

namespace {

enum class Tok { Atom, Ne, Bot, BotStrong, Top, Tilde, Dia, Box, At, Amp, Pipe, GOr, LParen, RParen, End };

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string ident;       // Tok::Atom payload
    std::size_t tok_pos = 0; // byte offset of the current token

    explicit Lexer(std::string_view t) : text(t) { advance(); }

    void advance() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        tok_pos = pos;
        if (pos >= text.size()) {
            tok = Tok::End;
            return;
        }
        const char c = text[pos];
        if (c == '~') {
            tok = Tok::Tilde;
            ++pos;
        } else if (c == '@') {
            tok = Tok::At;
            ++pos;
        } else if (c == '&') {
            tok = Tok::Amp;
            ++pos;
        } else if (c == '|') {
            tok = Tok::Pipe;
            ++pos;
        } else if (c == '(') {
            tok = Tok::LParen;
            ++pos;
        } else if (c == ')') {
            tok = Tok::RParen;
            ++pos;
        } else if (c == '<') {
            if (pos + 1 >= text.size() || text[pos + 1] != '>')
                throw ParseError(pos + 1, {"'>'"});
            tok = Tok::Dia;
            pos += 2;
        } else if (c == '[') {
            if (pos + 1 >= text.size() || text[pos + 1] != ']')
                throw ParseError(pos + 1, {"']'"});
            tok = Tok::Box;
            pos += 2;
        } else if (c == '\\') {
            if (pos + 1 >= text.size() || text[pos + 1] != '/')
                throw ParseError(pos + 1, {"'/'"});
            tok = Tok::GOr;
            pos += 2;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            ident.assign(text.substr(start, pos - start));
            if (ident == "NE")
                tok = Tok::Ne;
            else if (ident == "bot")
                tok = Tok::Bot;
            else if (ident == "Bot")
                tok = Tok::BotStrong;
            else if (ident == "Top")
                tok = Tok::Top;
            else
                tok = Tok::Atom;
        } else {
            throw ParseError(pos, {"a formula"});
        }
    }
};

struct Parser {
    Lexer lx;

    explicit Parser(std::string_view t) : lx(t) {}

    [[noreturn]] void fail_formula() {
        throw ParseError(lx.tok_pos,
                         {"an atom", "'NE'", "'bot'", "'Bot'", "'Top'", "'~'", "'<>'", "'[]'",
                          "'@'", "'('"});
    }

    FPtr parse_primary() {
        switch (lx.tok) {
        case Tok::Atom: {
            FPtr f = atom(lx.ident);
            lx.advance();
            return f;
        }
        case Tok::Ne:
            lx.advance();
            return ne();
        case Tok::Bot:
            lx.advance();
            return bot();
        case Tok::BotStrong:
            lx.advance();
            return bot_strong();
        case Tok::Top:
            lx.advance();
            return top();
        case Tok::LParen: {
            lx.advance();
            FPtr f = parse_gor();
            if (lx.tok != Tok::RParen)
                throw ParseError(lx.tok_pos, {"')'"});
            lx.advance();
            return f;
        }
        default:
            fail_formula();
        }
    }

    FPtr parse_unary() {
        switch (lx.tok) {
        case Tok::Tilde:
            lx.advance();
            return neg(parse_unary());
        case Tok::Dia:
            lx.advance();
            return dia(parse_unary());
        case Tok::Box:
            lx.advance();
            return box(parse_unary());
        case Tok::At:
            lx.advance();
            return oslash(parse_unary());
        default:
            return parse_primary();
        }
    }

    FPtr parse_and() {
        FPtr f = parse_unary();
        while (lx.tok == Tok::Amp) {
            lx.advance();
            f = conj(f, parse_unary());
        }
        return f;
    }

    FPtr parse_or() {
        FPtr f = parse_and();
        while (lx.tok == Tok::Pipe) {
            lx.advance();
            f = tensor(f, parse_and());
        }
        return f;
    }

    FPtr parse_gor() {
        FPtr f = parse_or();
        while (lx.tok == Tok::GOr) {
            lx.advance();
            f = gdis(f, parse_or());
        }
        return f;
    }

    FPtr parse_all() {
        FPtr f = parse_gor();
        if (lx.tok != Tok::End)
            throw ParseError(lx.tok_pos, {"'&'", "'|'", "'\\/'", "end of input"});
        return f;
    }
};

} // namespace

FPtr parse_formula(std::string_view text) { return Parser(text).parse_all(); }

// --- measures and predicates ------------------------------------------------

int modal_depth(const FPtr& f) {
    switch (f->kind) {
    case Conn::Atom:
    case Conn::Ne:
    case Conn::Bot:
    case Conn::BotStrong:
    case Conn::Top:
        return 0;
    case Conn::Neg:
    case Conn::Oslash:
        return modal_depth(f->a);
    case Conn::Dia:
    case Conn::Box:
        return 1 + modal_depth(f->a);
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        return std::max(modal_depth(f->a), modal_depth(f->b));
    }
    return 0;
}

namespace {
void collect_props(const FPtr& f, std::set<std::string>& out) {
    switch (f->kind) {
    case Conn::Atom:
        out.insert(f->name);
        break;
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash:
        collect_props(f->a, out);
        break;
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        collect_props(f->a, out);
        collect_props(f->b, out);
        break;
    default:
        break;
    }
}

bool all_nodes(const FPtr& f, bool (*pred)(Conn)) {
    if (!pred(f->kind))
        return false;
    switch (f->kind) {
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash:
        return all_nodes(f->a, pred);
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        return all_nodes(f->a, pred) && all_nodes(f->b, pred);
    default:
        return true;
    }
}
} // namespace

std::set<std::string> props(const FPtr& f) {
    std::set<std::string> out;
    collect_props(f, out);
    return out;
}

bool is_ne_free(const FPtr& f) {
    return all_nodes(f, [](Conn k) { return k != Conn::Ne && k != Conn::BotStrong; });
}

bool is_gdis_free(const FPtr& f) {
    return all_nodes(f, [](Conn k) { return k != Conn::GOr; });
}

bool is_oslash_free(const FPtr& f) {
    return all_nodes(f, [](Conn k) { return k != Conn::Oslash; });
}

bool is_classical(const FPtr& f) {
    return all_nodes(f, [](Conn k) {
        return k != Conn::Ne && k != Conn::BotStrong && k != Conn::GOr && k != Conn::Oslash;
    });
}

// --- navigation -------------------------------------------------------------

namespace {
int arity(Conn k) {
    switch (k) {
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash:
        return 1;
    case Conn::And:
    case Conn::Or:
    case Conn::GOr:
        return 2;
    default:
        return 0;
    }
}

const FPtr& child(const FPtr& f, int i) { return i == 0 ? f->a : f->b; }
} // namespace

FPtr node_at(const FPtr& f, const Path& path) {
    FPtr cur = f;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const int idx = path[i];
        if (idx < 0 || idx >= arity(cur->kind))
            throw PathError("path step " + std::to_string(i) + " (child " + std::to_string(idx) +
                            ") does not address a subterm of " + print_formula(cur));
        cur = child(cur, idx);
    }
    return cur;
}

FPtr replace_at(const FPtr& f, const Path& path, const FPtr& repl) {
    if (path.empty())
        return repl;
    const int idx = path[0];
    if (idx < 0 || idx >= arity(f->kind))
        throw PathError("path step (child " + std::to_string(idx) +
                        ") does not address a subterm of " + print_formula(f));
    Path rest(path.begin() + 1, path.end());
    FPtr na = f->a, nb = f->b;
    if (idx == 0)
        na = replace_at(f->a, rest, repl);
    else
        nb = replace_at(f->b, rest, repl);
    return std::make_shared<const Formula>(f->kind, f->name, std::move(na), std::move(nb));
}

bool is_distributive(const FPtr& f, const Path& path) {
    node_at(f, path); // validate the full path
    FPtr cur = f;
    for (int idx : path) {
        if (cur->kind == Conn::Neg || cur->kind == Conn::Dia || cur->kind == Conn::Box)
            return false;
        cur = child(cur, idx);
    }
    return true;
}

// --- transforms -------------------------------------------------------------

FPtr substitute_all(const FPtr& f, const std::string& p, const FPtr& repl) {
    switch (f->kind) {
    case Conn::Atom:
        return f->name == p ? repl : f;
    case Conn::Neg:
    case Conn::Dia:
    case Conn::Box:
    case Conn::Oslash: {
        FPtr na = substitute_all(f->a, p, repl);
        return na.get() == f->a.get() ? f : mk(f->kind, {}, std::move(na));
    }
    case Conn::And:
    case Conn::Or:
    case Conn::GOr: {
        FPtr na = substitute_all(f->a, p, repl);
        FPtr nb = substitute_all(f->b, p, repl);
        return (na.get() == f->a.get() && nb.get() == f->b.get())
                   ? f
                   : mk(f->kind, {}, std::move(na), std::move(nb));
    }
    default:
        return f;
    }
}

namespace {
FPtr nnf_pos(const FPtr& f);
FPtr nnf_neg(const FPtr& f);

FPtr nnf_pos(const FPtr& f) {
    switch (f->kind) {
    case Conn::Neg:
        return nnf_neg(f->a);
    case Conn::Dia:
        return dia(nnf_pos(f->a));
    case Conn::Box:
        return box(nnf_pos(f->a));
    case Conn::Oslash:
        return oslash(nnf_pos(f->a));
    case Conn::And:
        return conj(nnf_pos(f->a), nnf_pos(f->b));
    case Conn::Or:
        return tensor(nnf_pos(f->a), nnf_pos(f->b));
    case Conn::GOr:
        return gdis(nnf_pos(f->a), nnf_pos(f->b));
    default:
        return f;
    }
}

// Negation pushed through `f`. Constants rewrite outright: ~bot and ~Top
// swap, and the negated strong contradiction becomes Top | ~NE (supported
// everywhere, anti-supported nowhere, matching ~Bot on both polarities).
FPtr nnf_neg(const FPtr& f) {
    switch (f->kind) {
    case Conn::Atom:
        return neg(f);
    case Conn::Ne:
        return neg(f);
    case Conn::Bot:
        return top();
    case Conn::Top:
        return bot();
    case Conn::BotStrong:
        return tensor(top(), neg(ne()));
    case Conn::Neg:
        return nnf_pos(f->a);
    case Conn::Dia:
        return box(nnf_neg(f->a));
    case Conn::Box:
        return dia(nnf_neg(f->a));
    case Conn::Oslash:
        return nnf_neg(f->a);
    case Conn::And:
        return tensor(nnf_neg(f->a), nnf_neg(f->b));
    case Conn::Or:
        return conj(nnf_neg(f->a), nnf_neg(f->b));
    case Conn::GOr:
        return conj(nnf_neg(f->a), nnf_neg(f->b));
    }
    return neg(f);
}
} // namespace

FPtr nnf(const FPtr& f) { return nnf_pos(f); }

FPtr enrich(const FPtr& f) {
    if (!is_classical(f))
        throw InputError("enrich requires a classical formula, got: " + print_formula(f));
    switch (f->kind) {
    case Conn::Atom:
    case Conn::Bot:
    case Conn::Top:
        return conj(f, ne());
    case Conn::Neg:
        return conj(neg(enrich(f->a)), ne());
    case Conn::Dia:
        return conj(dia(enrich(f->a)), ne());
    case Conn::Box:
        return conj(box(enrich(f->a)), ne());
    case Conn::And:
        return conj(conj(enrich(f->a), enrich(f->b)), ne());
    case Conn::Or:
        return conj(tensor(enrich(f->a), enrich(f->b)), ne());
    default:
        throw InputError("enrich requires a classical formula, got: " + print_formula(f));
    }
}

FPtr expand_defined(const FPtr& f) {
    switch (f->kind) {
    case Conn::Box:
        return neg(dia(neg(expand_defined(f->a))));
    case Conn::Neg:
        return neg(expand_defined(f->a));
    case Conn::Dia:
        return dia(expand_defined(f->a));
    case Conn::Oslash:
        return oslash(expand_defined(f->a));
    case Conn::And:
        return conj(expand_defined(f->a), expand_defined(f->b));
    case Conn::Or:
        return tensor(expand_defined(f->a), expand_defined(f->b));
    case Conn::GOr:
        return gdis(expand_defined(f->a), expand_defined(f->b));
    default:
        return f;
    }
}

} // namespace teamlogic
