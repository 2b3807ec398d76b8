#include "roughpath/vector_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>

namespace roughpath {

Expr Expr::constant(double v) {
    Expr e;
    e.kind = Kind::constant;
    e.value = v;
    return e;
}

Expr Expr::variable(int idx0) {
    Expr e;
    e.kind = Kind::variable;
    e.index = idx0;
    return e;
}

namespace {

struct Token {
    enum class Type { number, variable, func, lparen, rparen, plus, minus, star, caret, end };
    Type type = Type::end;
    double num = 0.0;
    std::string text;
    int var_index = 0;
    std::size_t pos = 0;
};

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    auto is_lower = [](char c) { return c >= 'a' && c <= 'z'; };
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
        const std::size_t start = i;
        Token t;
        t.pos = start;
        if (is_digit(c)) {
            std::size_t j = i;
            while (j < n && is_digit(src[j])) ++j;
            if (j < n && src[j] == '.') {
                ++j;
                while (j < n && is_digit(src[j])) ++j;
            }
            if (j < n && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
                if (k >= n || !is_digit(src[k]))
                    throw ExprParseError("malformed exponent in number literal", j);
                while (k < n && is_digit(src[k])) ++k;
                j = k;
            }
            t.type = Token::Type::number;
            t.text = src.substr(start, j - start);
            const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.num);
            if (res.ec != std::errc())
                throw ExprParseError("unreadable number literal", start);
            i = j;
        } else if (is_lower(c)) {
            std::size_t j = i;
            while (j < n && is_lower(src[j])) ++j;
            std::string letters = src.substr(i, j - i);
            std::size_t k = j;
            while (k < n && is_digit(src[k])) ++k;
            std::string digits = src.substr(j, k - j);
            if (letters == "x") {
                if (digits.empty())
                    throw ExprParseError("variable needs an index (x1, x2, ...)", start);
                long idx = std::strtol(digits.c_str(), nullptr, 10);
                if (idx < 1) throw ExprParseError("variable index must be >= 1", start);
                t.type = Token::Type::variable;
                t.var_index = static_cast<int>(idx - 1);
            } else if ((letters == "sin" || letters == "cos" || letters == "exp") && digits.empty()) {
                t.type = Token::Type::func;
                t.text = letters;
            } else {
                throw ExprParseError("unknown identifier '" + letters + digits + "'", start);
            }
            i = k;
        } else {
            switch (c) {
                case '+': t.type = Token::Type::plus; break;
                case '-': t.type = Token::Type::minus; break;
                case '*': t.type = Token::Type::star; break;
                case '^': t.type = Token::Type::caret; break;
                case '(': t.type = Token::Type::lparen; break;
                case ')': t.type = Token::Type::rparen; break;
                default:
                    throw ExprParseError(std::string("unexpected character '") + c + "'", start);
            }
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.type = Token::Type::end;
    end.pos = n;
    out.push_back(std::move(end));
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Expr parse() {
        Expr e = expr();
        if (peek().type != Token::Type::end)
            throw ExprParseError("unexpected trailing input", peek().pos);
        return e;
    }

private:
    const Token& peek() const { return toks_[k_]; }
    const Token& take() { return toks_[k_++]; }

    Expr expr() {
        Expr e = term();
        while (peek().type == Token::Type::plus || peek().type == Token::Type::minus) {
            const bool plus = take().type == Token::Type::plus;
            Expr parent;
            parent.kind = plus ? Expr::Kind::add : Expr::Kind::sub;
            parent.kids.push_back(std::move(e));
            parent.kids.push_back(term());
            e = std::move(parent);
        }
        return e;
    }

    Expr term() {
        Expr e = factor();
        while (peek().type == Token::Type::star) {
            take();
            Expr parent;
            parent.kind = Expr::Kind::mul;
            parent.kids.push_back(std::move(e));
            parent.kids.push_back(factor());
            e = std::move(parent);
        }
        return e;
    }

    Expr factor() {
        Expr b = base();
        if (peek().type == Token::Type::caret) {
            take();
            const Token& t = peek();
            if (t.type != Token::Type::number || !all_digits(t.text))
                throw ExprParseError("exponent must be a nonnegative integer literal", t.pos);
            take();
            Expr p;
            p.kind = Expr::Kind::pow;
            p.index = static_cast<int>(t.num);
            p.kids.push_back(std::move(b));
            return p;
        }
        return b;
    }

    Expr base() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Type::number: {
                take();
                return Expr::constant(t.num);
            }
            case Token::Type::variable: {
                take();
                return Expr::variable(t.var_index);
            }
            case Token::Type::func: {
                const std::string name = take().text;
                if (peek().type != Token::Type::lparen)
                    throw ExprParseError("expected '(' after function name", peek().pos);
                take();
                Expr arg = expr();
                if (peek().type != Token::Type::rparen)
                    throw ExprParseError("expected ')'", peek().pos);
                take();
                Expr f;
                f.kind = name == "sin" ? Expr::Kind::sin_fn
                       : name == "cos" ? Expr::Kind::cos_fn
                                       : Expr::Kind::exp_fn;
                f.kids.push_back(std::move(arg));
                return f;
            }
            case Token::Type::lparen: {
                take();
                Expr e = expr();
                if (peek().type != Token::Type::rparen)
                    throw ExprParseError("expected ')'", peek().pos);
                take();
                return e;
            }
            default:
                throw ExprParseError("expected a number, variable, function or '('", t.pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t k_ = 0;
};

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// (text, precedence): add/sub 1, mul 2, pow 3, atoms 4.
std::pair<std::string, int> print_rec(const Expr& e) {
    auto paren = [](const std::string& s) { return "(" + s + ")"; };
    switch (e.kind) {
        case Expr::Kind::constant:
            if (e.value < 0.0) return {"0 - " + fmt_double(-e.value), 1};
            return {fmt_double(e.value), 4};
        case Expr::Kind::variable:
            return {"x" + std::to_string(e.index + 1), 4};
        case Expr::Kind::add: {
            const auto l = print_rec(e.kids[0]);
            const auto r = print_rec(e.kids[1]);
            return {l.first + " + " + r.first, 1};
        }
        case Expr::Kind::sub: {
            const auto l = print_rec(e.kids[0]);
            const auto r = print_rec(e.kids[1]);
            return {l.first + " - " + (r.second <= 1 ? paren(r.first) : r.first), 1};
        }
        case Expr::Kind::mul: {
            const auto l = print_rec(e.kids[0]);
            const auto r = print_rec(e.kids[1]);
            return {(l.second < 2 ? paren(l.first) : l.first) + " * " +
                        (r.second < 2 ? paren(r.first) : r.first),
                    2};
        }
        case Expr::Kind::pow: {
            const auto b = print_rec(e.kids[0]);
            return {(b.second < 4 ? paren(b.first) : b.first) + "^" + std::to_string(e.index), 3};
        }
        case Expr::Kind::sin_fn:
            return {"sin(" + print_rec(e.kids[0]).first + ")", 4};
        case Expr::Kind::cos_fn:
            return {"cos(" + print_rec(e.kids[0]).first + ")", 4};
        case Expr::Kind::exp_fn:
            return {"exp(" + print_rec(e.kids[0]).first + ")", 4};
    }
    return {"0", 4};
}

double pow_int(double base, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}

Expr make_node(Expr::Kind kind, Expr a, Expr b) {
    Expr e;
    e.kind = kind;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

Expr make_fn(Expr::Kind kind, Expr a) {
    Expr e;
    e.kind = kind;
    e.kids.push_back(std::move(a));
    return e;
}

Expr make_pow(Expr base, int n) {
    Expr e;
    e.kind = Expr::Kind::pow;
    e.index = n;
    e.kids.push_back(std::move(base));
    return e;
}

Expr diff_raw(const Expr& e, int var) {
    switch (e.kind) {
        case Expr::Kind::constant:
            return Expr::constant(0.0);
        case Expr::Kind::variable:
            return Expr::constant(e.index == var ? 1.0 : 0.0);
        case Expr::Kind::add:
            return make_node(Expr::Kind::add, diff_raw(e.kids[0], var), diff_raw(e.kids[1], var));
        case Expr::Kind::sub:
            return make_node(Expr::Kind::sub, diff_raw(e.kids[0], var), diff_raw(e.kids[1], var));
        case Expr::Kind::mul:
            return make_node(Expr::Kind::add,
                             make_node(Expr::Kind::mul, diff_raw(e.kids[0], var), e.kids[1]),
                             make_node(Expr::Kind::mul, e.kids[0], diff_raw(e.kids[1], var)));
        case Expr::Kind::pow: {
            if (e.index == 0) return Expr::constant(0.0);
            Expr scaled = make_node(Expr::Kind::mul, Expr::constant(static_cast<double>(e.index)),
                                    make_pow(e.kids[0], e.index - 1));
            return make_node(Expr::Kind::mul, std::move(scaled), diff_raw(e.kids[0], var));
        }
        case Expr::Kind::sin_fn:
            return make_node(Expr::Kind::mul, make_fn(Expr::Kind::cos_fn, e.kids[0]),
                             diff_raw(e.kids[0], var));
        case Expr::Kind::cos_fn: {
            Expr neg_sin = make_node(Expr::Kind::sub, Expr::constant(0.0),
                                     make_fn(Expr::Kind::sin_fn, e.kids[0]));
            return make_node(Expr::Kind::mul, std::move(neg_sin), diff_raw(e.kids[0], var));
        }
        case Expr::Kind::exp_fn:
            return make_node(Expr::Kind::mul, make_fn(Expr::Kind::exp_fn, e.kids[0]),
                             diff_raw(e.kids[0], var));
    }
    return Expr::constant(0.0);
}

bool is_const(const Expr& e, double v) {
    return e.kind == Expr::Kind::constant && e.value == v;
}

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) { return print_rec(e).first; }

double eval(const Expr& e, const std::vector<double>& x) {
    switch (e.kind) {
        case Expr::Kind::constant: return e.value;
        case Expr::Kind::variable:
            if (static_cast<std::size_t>(e.index) >= x.size())
                throw std::out_of_range("eval: expression references x" + std::to_string(e.index + 1) +
                                        " but the state has dimension " + std::to_string(x.size()));
            return x[static_cast<std::size_t>(e.index)];
        case Expr::Kind::add: return eval(e.kids[0], x) + eval(e.kids[1], x);
        case Expr::Kind::sub: return eval(e.kids[0], x) - eval(e.kids[1], x);
        case Expr::Kind::mul: return eval(e.kids[0], x) * eval(e.kids[1], x);
        case Expr::Kind::pow: return pow_int(eval(e.kids[0], x), e.index);
        case Expr::Kind::sin_fn: return std::sin(eval(e.kids[0], x));
        case Expr::Kind::cos_fn: return std::cos(eval(e.kids[0], x));
        case Expr::Kind::exp_fn: return std::exp(eval(e.kids[0], x));
    }
    return 0.0;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::constant:
            if (a.value != b.value) return false;
            break;
        case Expr::Kind::variable:
            if (a.index != b.index) return false;
            break;
        case Expr::Kind::pow:
            if (a.index != b.index) return false;
            break;
        default:
            break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!expr_equal(a.kids[i], b.kids[i])) return false;
    return true;
}

Expr simplify(const Expr& e) {
    Expr s;
    s.kind = e.kind;
    s.value = e.value;
    s.index = e.index;
    s.kids.reserve(e.kids.size());
    for (const auto& k : e.kids) s.kids.push_back(simplify(k));

    switch (s.kind) {
        case Expr::Kind::add: {
            const Expr& l = s.kids[0];
            const Expr& r = s.kids[1];
            if (l.kind == Expr::Kind::constant && r.kind == Expr::Kind::constant) {
                const double v = l.value + r.value;
                if (std::isfinite(v)) return Expr::constant(v);
            }
            if (is_const(l, 0.0)) return r;
            if (is_const(r, 0.0)) return l;
            break;
        }
        case Expr::Kind::sub: {
            const Expr& l = s.kids[0];
            const Expr& r = s.kids[1];
            if (l.kind == Expr::Kind::constant && r.kind == Expr::Kind::constant) {
                const double v = l.value - r.value;
                if (std::isfinite(v)) return Expr::constant(v);
            }
            if (is_const(r, 0.0)) return l;
            if (expr_equal(l, r)) return Expr::constant(0.0);
            break;
        }
        case Expr::Kind::mul: {
            const Expr& l = s.kids[0];
            const Expr& r = s.kids[1];
            if (l.kind == Expr::Kind::constant && r.kind == Expr::Kind::constant) {
                const double v = l.value * r.value;
                if (std::isfinite(v)) return Expr::constant(v);
            }
            if (is_const(l, 0.0) || is_const(r, 0.0)) return Expr::constant(0.0);
            if (is_const(l, 1.0)) return r;
            if (is_const(r, 1.0)) return l;
            break;
        }
        case Expr::Kind::pow: {
            if (s.index == 0) return Expr::constant(1.0);
            if (s.index == 1) return s.kids[0];
            if (s.kids[0].kind == Expr::Kind::constant) {
                const double v = pow_int(s.kids[0].value, s.index);
                if (std::isfinite(v)) return Expr::constant(v);
            }
            break;
        }
        case Expr::Kind::sin_fn:
            if (s.kids[0].kind == Expr::Kind::constant) return Expr::constant(std::sin(s.kids[0].value));
            break;
        case Expr::Kind::cos_fn:
            if (s.kids[0].kind == Expr::Kind::constant) return Expr::constant(std::cos(s.kids[0].value));
            break;
        case Expr::Kind::exp_fn:
            if (s.kids[0].kind == Expr::Kind::constant) {
                const double v = std::exp(s.kids[0].value);
                if (std::isfinite(v)) return Expr::constant(v);
            }
            break;
        default:
            break;
    }
    return s;
}

Expr differentiate(const Expr& e, int var) { return simplify(diff_raw(e, var)); }

std::vector<Expr> directional_derivative(const std::vector<Expr>& V, const std::vector<Expr>& W) {
    if (V.size() != W.size() || V.empty())
        throw std::invalid_argument("directional_derivative: fields must share the state dimension");
    const int d = static_cast<int>(V.size());
    std::vector<Expr> out;
    out.reserve(V.size());
    for (int k = 0; k < d; ++k) {
        Expr acc = make_node(Expr::Kind::mul, V[0], diff_raw(W[static_cast<std::size_t>(k)], 0));
        for (int j = 1; j < d; ++j)
            acc = make_node(Expr::Kind::add, std::move(acc),
                            make_node(Expr::Kind::mul, V[static_cast<std::size_t>(j)],
                                      diff_raw(W[static_cast<std::size_t>(k)], j)));
        out.push_back(simplify(acc));
    }
    return out;
}

std::vector<Expr> lie_bracket(const std::vector<Expr>& V, const std::vector<Expr>& W) {
    const std::vector<Expr> vw = directional_derivative(V, W);
    const std::vector<Expr> wv = directional_derivative(W, V);
    std::vector<Expr> out;
    out.reserve(vw.size());
    for (std::size_t k = 0; k < vw.size(); ++k)
        out.push_back(simplify(make_node(Expr::Kind::sub, vw[k], wv[k])));
    return out;
}

namespace {

bool is_lyndon(const std::vector<int>& w) {
    if (w.empty()) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end()))
            return false;
    return true;
}

int max_variable_index(const Expr& e) {
    int m = -1;
    if (e.kind == Expr::Kind::variable) m = e.index;
    for (const auto& k : e.kids) m = std::max(m, max_variable_index(k));
    return m;
}

}  // namespace

std::vector<std::vector<int>> lyndon_words(int alphabet_size, int min_len, int max_len) {
    if (alphabet_size < 1) throw std::invalid_argument("lyndon_words: empty alphabet");
    if (min_len < 1 || max_len < min_len)
        throw std::invalid_argument("lyndon_words: bad length range");
    std::vector<std::vector<int>> out;
    for (int len = min_len; len <= max_len; ++len) {
        std::vector<int> w(static_cast<std::size_t>(len), 0);
        while (true) {
            if (is_lyndon(w)) out.push_back(w);
            int k = len - 1;
            while (k >= 0 && w[static_cast<std::size_t>(k)] == alphabet_size - 1) {
                w[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
            ++w[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

std::size_t standard_factorization_split(const std::vector<int>& w) {
    if (w.size() < 2) throw std::invalid_argument("standard_factorization_split: word too short");
    if (!is_lyndon(w)) throw std::invalid_argument("standard_factorization_split: word is not Lyndon");
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::vector<int> suffix(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
        if (is_lyndon(suffix)) return i;
    }
    throw std::logic_error("standard_factorization_split: no Lyndon suffix found");
}

VectorFieldSet::VectorFieldSet(int state_dim_, std::vector<std::vector<Expr>> fields_,
                               std::optional<std::vector<Expr>> drift_, int bracket_depth)
    : state_dim(state_dim_), fields(std::move(fields_)), drift(std::move(drift_)) {
    if (state_dim < 1) throw std::invalid_argument("VectorFieldSet: state_dim must be >= 1");
    if (fields.empty()) throw std::invalid_argument("VectorFieldSet: need at least one driving field");
    driver_dim = static_cast<int>(fields.size());
    if (bracket_depth < 2 || bracket_depth > 3)
        throw std::invalid_argument("VectorFieldSet: bracket_depth must be 2 or 3");

    auto check_field = [this](const std::vector<Expr>& f, const std::string& name) {
        if (f.size() != static_cast<std::size_t>(state_dim))
            throw std::invalid_argument("VectorFieldSet: " + name + " must have state_dim components");
        for (std::size_t c = 0; c < f.size(); ++c) {
            const int mi = max_variable_index(f[c]);
            if (mi >= state_dim)
                throw std::invalid_argument("VectorFieldSet: component " + std::to_string(c + 1) +
                                            " of " + name + " references x" + std::to_string(mi + 1) +
                                            " beyond state_dim " + std::to_string(state_dim));
        }
    };
    for (int j = 0; j < driver_dim; ++j)
        check_field(fields[static_cast<std::size_t>(j)], "V" + std::to_string(j + 1));
    if (drift) check_field(*drift, "the drift");

    jets.resize(static_cast<std::size_t>(driver_dim));
    for (int j = 0; j < driver_dim; ++j) {
        jets[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(driver_dim));
        for (int k = 0; k < driver_dim; ++k)
            jets[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                directional_derivative(fields[static_cast<std::size_t>(j)],
                                       fields[static_cast<std::size_t>(k)]);
    }

    // Length-2 brackets from the jets; length-3 by the standard factorization.
    for (const auto& w : lyndon_words(driver_dim, 2, bracket_depth)) {
        if (w.size() == 2) {
            const auto& ab = jets[static_cast<std::size_t>(w[0])][static_cast<std::size_t>(w[1])];
            const auto& ba = jets[static_cast<std::size_t>(w[1])][static_cast<std::size_t>(w[0])];
            std::vector<Expr> comps;
            comps.reserve(ab.size());
            for (std::size_t c = 0; c < ab.size(); ++c) {
                Expr d;
                d.kind = Expr::Kind::sub;
                d.kids.push_back(ab[c]);
                d.kids.push_back(ba[c]);
                comps.push_back(simplify(d));
            }
            bracket_table[w] = std::move(comps);
        } else {
            const std::size_t split = standard_factorization_split(w);
            const std::vector<int> u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(split));
            const std::vector<int> v(w.begin() + static_cast<std::ptrdiff_t>(split), w.end());
            bracket_table[w] = lie_bracket(bracket_field(u), bracket_field(v));
        }
    }
}

const std::vector<Expr>& VectorFieldSet::bracket_field(const std::vector<int>& word) const {
    if (word.size() == 1) {
        if (word[0] < 0 || word[0] >= driver_dim)
            throw std::invalid_argument("bracket_field: letter out of range");
        return fields[static_cast<std::size_t>(word[0])];
    }
    const auto it = bracket_table.find(word);
    if (it == bracket_table.end())
        throw std::invalid_argument("bracket_field: word is not a stored Lyndon word");
    return it->second;
}

std::vector<double> VectorFieldSet::eval_field(const std::vector<Expr>& comps,
                                               const std::vector<double>& x) const {
    std::vector<double> out(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) out[c] = eval(comps[c], x);
    return out;
}

}  // namespace roughpath
