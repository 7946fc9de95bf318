#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "bidisc/geometry.hpp"

namespace bidisc {

enum class ExprOp { Const, VarX, VarY, Add, Sub, Mul, Div, IntPow };

struct DualValue {
    Cx value{};
    Cx deriv{};
};

// Immutable rational expression tree in the variables x and y.
class MapExpr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        ExprOp op = ExprOp::Const;
        Cx value{};       // Const
        int exponent = 0; // IntPow
        NodePtr a, b;
    };

    MapExpr() : root_(std::make_shared<Node>()) {}
    explicit MapExpr(NodePtr root) : root_(std::move(root)) {}

    static MapExpr constant(Cx v);
    static MapExpr var_x();
    static MapExpr var_y();
    static MapExpr add(const MapExpr& a, const MapExpr& b);
    static MapExpr sub(const MapExpr& a, const MapExpr& b);
    static MapExpr mul(const MapExpr& a, const MapExpr& b);
    static MapExpr div(const MapExpr& a, const MapExpr& b);
    static MapExpr int_pow(const MapExpr& a, int n);

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }

    // Arithmetic value of the tree. Throws PoleError when a denominator
    // modulus drops below 1e-14.
    Cx eval(Cx x, Cx y) const;

    // Value together with the directional derivative along (dx, dy),
    // propagated through the tree as dual numbers.
    DualValue eval_dual(Cx x, Cx y, Cx dx, Cx dy) const;

    // Printable form; parsing it back evaluates identically.
    std::string str() const;

private:
    NodePtr root_;
};

// Recursive-descent parser for the map DSL: complex literals (0.5, 2i, 1+2i),
// variables x and y, operators + - * / ^ and parentheses. '^' takes a
// nonnegative integer exponent and binds tighter than unary minus.
MapExpr parse_map_dsl(std::string_view text);

struct BidiscMap {
    MapExpr f1, f2;
};

struct AuditReport {
    std::size_t samples_checked = 0;
    double max_modulus_seen = 0.0;
    std::size_t schwarz_pick_violations = 0;
    std::size_t pole_hits = 0;
    bool pass = false;
};

// Samples the map on seeded quasi-random interior points plus radial
// near-boundary probes, checking |f_i| < 1 and the Schwarz-Pick inequality
// k(f(p), f(q)) <= k(p, q) + 1e-9 on sample pairs. Pole hits are recorded,
// not thrown. Deterministic for a given seed.
AuditReport self_map_audit(const BidiscMap& f, std::size_t n_samples, std::uint64_t seed);

} // namespace bidisc
