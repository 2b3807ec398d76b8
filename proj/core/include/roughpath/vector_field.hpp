#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughpath {

/// Expression tree over state variables x1, x2, ... (1-based in the surface
/// syntax, 0-based in `index`).  The grammar has +, -, *, integer powers via
/// ^, the functions sin/cos/exp, unsigned number literals, and parentheses;
/// there is no unary minus (write "0 - x1").
struct Expr {
    enum class Kind { constant, variable, add, sub, mul, pow, sin_fn, cos_fn, exp_fn };
    Kind kind = Kind::constant;
    double value = 0.0;   // constant
    int index = 0;        // variable (0-based) or pow exponent
    std::vector<Expr> kids;

    static Expr constant(double v);
    static Expr variable(int idx0);
};

struct ExprParseError : std::runtime_error {
    std::size_t position;
    ExprParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), position(pos) {}
};

/// Parse the expression grammar; reports the offending position on failure.
Expr parse_expr(const std::string& text);

/// Canonical printer: parse(print(e)) prints back to the same string.
std::string to_string(const Expr& e);

double eval(const Expr& e, const std::vector<double>& x);

/// Structural equality (exact constants, same shapes).
bool expr_equal(const Expr& a, const Expr& b);

/// Partial derivative with respect to x_{var+1}, simplified.
Expr differentiate(const Expr& e, int var);

/// Constant folding plus the 0/1 identities and a - a = 0.
Expr simplify(const Expr& e);

/// Components of (V . grad) W for vector fields given component-wise.
std::vector<Expr> directional_derivative(const std::vector<Expr>& V, const std::vector<Expr>& W);

/// Lie bracket [V, W] = (V . grad) W - (W . grad) V, simplified component-wise.
std::vector<Expr> lie_bracket(const std::vector<Expr>& V, const std::vector<Expr>& W);

/// All Lyndon words over {0,...,alphabet_size-1} with lengths in [min_len, max_len],
/// in length-then-lexicographic order.
std::vector<std::vector<int>> lyndon_words(int alphabet_size, int min_len, int max_len);

/// Index of the standard factorization split of a Lyndon word w = u v:
/// v is the longest proper suffix of w that is itself Lyndon.
std::size_t standard_factorization_split(const std::vector<int>& w);

/// Driving vector fields V_1..V_ell on R^d, an optional drift V_0, their
/// first-order jets (V_j . grad) V_k and the bracket fields for Lyndon words
/// up to the requested depth (2 or 3).
struct VectorFieldSet {
    int state_dim = 0;
    int driver_dim = 0;
    std::vector<std::vector<Expr>> fields;           // fields[j] = components of V_{j+1}
    std::optional<std::vector<Expr>> drift;
    std::vector<std::vector<std::vector<Expr>>> jets;  // jets[j][k] = (V_j . grad) V_k
    std::map<std::vector<int>, std::vector<Expr>> bracket_table;  // Lyndon words, len >= 2

    VectorFieldSet(int state_dim, std::vector<std::vector<Expr>> fields,
                   std::optional<std::vector<Expr>> drift = std::nullopt,
                   int bracket_depth = 3);

    /// Field for a bracket word: length 1 gives V_{w[0]+1}, longer words are
    /// looked up in the bracket table (must be Lyndon).
    const std::vector<Expr>& bracket_field(const std::vector<int>& word) const;

    std::vector<double> eval_field(const std::vector<Expr>& comps, const std::vector<double>& x) const;
};

}  // namespace roughpath
