#include "bidisc/map_expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "bidisc/rng.hpp"

namespace bidisc {

namespace {
constexpr double kPoleThreshold = 1e-14;
constexpr int kMaxExponent = 4096;

MapExpr::NodePtr make_node(ExprOp op, MapExpr::NodePtr a = nullptr, MapExpr::NodePtr b = nullptr) {
    auto n = std::make_shared<MapExpr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
} // namespace

MapExpr MapExpr::constant(Cx v) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Const;
    n->value = v;
    return MapExpr(n);
}
MapExpr MapExpr::var_x() { return MapExpr(make_node(ExprOp::VarX)); }
MapExpr MapExpr::var_y() { return MapExpr(make_node(ExprOp::VarY)); }
MapExpr MapExpr::add(const MapExpr& a, const MapExpr& b) {
    return MapExpr(make_node(ExprOp::Add, a.root_, b.root_));
}
MapExpr MapExpr::sub(const MapExpr& a, const MapExpr& b) {
    return MapExpr(make_node(ExprOp::Sub, a.root_, b.root_));
}
MapExpr MapExpr::mul(const MapExpr& a, const MapExpr& b) {
    return MapExpr(make_node(ExprOp::Mul, a.root_, b.root_));
}
MapExpr MapExpr::div(const MapExpr& a, const MapExpr& b) {
    if (b.root().op == ExprOp::Const && b.root().value == Cx{0.0, 0.0})
        throw RangeError("division by the zero constant");
    return MapExpr(make_node(ExprOp::Div, a.root_, b.root_));
}
MapExpr MapExpr::int_pow(const MapExpr& a, int n) {
    if (n < 0 || n > kMaxExponent) throw RangeError("exponent out of range");
    auto node = std::make_shared<Node>();
    node->op = ExprOp::IntPow;
    node->a = a.root_;
    node->exponent = n;
    return MapExpr(node);
}

namespace {

Cx int_pow_value(Cx base, int n) {
    Cx result{1.0, 0.0};
    Cx acc = base;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) result *= acc;
        if (e > 1) acc *= acc;
    }
    return result;
}

Cx eval_node(const MapExpr::Node& n, Cx x, Cx y) {
    switch (n.op) {
    case ExprOp::Const: return n.value;
    case ExprOp::VarX: return x;
    case ExprOp::VarY: return y;
    case ExprOp::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
    case ExprOp::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
    case ExprOp::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
    case ExprOp::Div: {
        const Cx num = eval_node(*n.a, x, y);
        const Cx den = eval_node(*n.b, x, y);
        if (std::abs(den) < kPoleThreshold) throw PoleError("denominator below pole threshold");
        return num / den;
    }
    case ExprOp::IntPow: return int_pow_value(eval_node(*n.a, x, y), n.exponent);
    }
    throw std::logic_error("unreachable expression op");
}

DualValue eval_dual_node(const MapExpr::Node& n, Cx x, Cx y, Cx dx, Cx dy) {
    switch (n.op) {
    case ExprOp::Const: return {n.value, {0.0, 0.0}};
    case ExprOp::VarX: return {x, dx};
    case ExprOp::VarY: return {y, dy};
    case ExprOp::Add: {
        const DualValue a = eval_dual_node(*n.a, x, y, dx, dy);
        const DualValue b = eval_dual_node(*n.b, x, y, dx, dy);
        return {a.value + b.value, a.deriv + b.deriv};
    }
    case ExprOp::Sub: {
        const DualValue a = eval_dual_node(*n.a, x, y, dx, dy);
        const DualValue b = eval_dual_node(*n.b, x, y, dx, dy);
        return {a.value - b.value, a.deriv - b.deriv};
    }
    case ExprOp::Mul: {
        const DualValue a = eval_dual_node(*n.a, x, y, dx, dy);
        const DualValue b = eval_dual_node(*n.b, x, y, dx, dy);
        return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
    }
    case ExprOp::Div: {
        const DualValue a = eval_dual_node(*n.a, x, y, dx, dy);
        const DualValue b = eval_dual_node(*n.b, x, y, dx, dy);
        if (std::abs(b.value) < kPoleThreshold) throw PoleError("denominator below pole threshold");
        const Cx v = a.value / b.value;
        return {v, (a.deriv - v * b.deriv) / b.value};
    }
    case ExprOp::IntPow: {
        const DualValue a = eval_dual_node(*n.a, x, y, dx, dy);
        if (n.exponent == 0) return {{1.0, 0.0}, {0.0, 0.0}};
        const Cx pm1 = int_pow_value(a.value, n.exponent - 1);
        return {pm1 * a.value, static_cast<double>(n.exponent) * pm1 * a.deriv};
    }
    }
    throw std::logic_error("unreachable expression op");
}

} // namespace

Cx MapExpr::eval(Cx x, Cx y) const { return eval_node(*root_, x, y); }

DualValue MapExpr::eval_dual(Cx x, Cx y, Cx dx, Cx dy) const {
    return eval_dual_node(*root_, x, y, dx, dy);
}

// ── printing ────────────────────────────────────────────────────────────────

namespace {

std::string format_double(double d) {
    std::array<char, 40> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), d);
    return std::string(buf.data(), res.ptr);
}

std::string format_complex(Cx v) {
    const double re = v.real(), im = v.imag();
    if (im == 0.0) {
        if (re < 0.0) return "(0 - " + format_double(-re) + ")";
        return format_double(re);
    }
    if (re == 0.0) {
        if (im < 0.0) return "(0 - " + format_double(-im) + "i)";
        return format_double(im) + "i";
    }
    std::string s = "(" + format_double(re);
    s += (im < 0.0) ? " - " + format_double(-im) : " + " + format_double(im);
    s += "i)";
    return s;
}

int precedence(const MapExpr::Node& n) {
    switch (n.op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::IntPow: return 3;
    default: return 4;
    }
}

void print_node(const MapExpr::Node& n, std::string& out) {
    const auto child = [&](const MapExpr::Node& c, bool needs_paren) {
        if (needs_paren) out += '(';
        print_node(c, out);
        if (needs_paren) out += ')';
    };
    switch (n.op) {
    case ExprOp::Const: out += format_complex(n.value); return;
    case ExprOp::VarX: out += 'x'; return;
    case ExprOp::VarY: out += 'y'; return;
    case ExprOp::Add:
        child(*n.a, precedence(*n.a) < 1);
        out += " + ";
        child(*n.b, precedence(*n.b) <= 1);
        return;
    case ExprOp::Sub:
        child(*n.a, precedence(*n.a) < 1);
        out += " - ";
        child(*n.b, precedence(*n.b) <= 1);
        return;
    case ExprOp::Mul:
        child(*n.a, precedence(*n.a) < 2);
        out += "*";
        child(*n.b, precedence(*n.b) <= 2);
        return;
    case ExprOp::Div:
        child(*n.a, precedence(*n.a) < 2);
        out += "/";
        child(*n.b, precedence(*n.b) <= 2);
        return;
    case ExprOp::IntPow:
        child(*n.a, precedence(*n.a) < 4);
        out += '^';
        out += std::to_string(n.exponent);
        return;
    }
}

} // namespace

std::string MapExpr::str() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

// ── parser ──────────────────────────────────────────────────────────────────

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    MapExpr parse() {
        MapExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    MapExpr expr() {
        MapExpr lhs = term();
        for (;;) {
            if (eat('+')) lhs = MapExpr::add(lhs, term());
            else if (eat('-')) lhs = MapExpr::sub(lhs, term());
            else return lhs;
        }
    }

    MapExpr term() {
        MapExpr lhs = unary();
        for (;;) {
            if (eat('*')) {
                lhs = MapExpr::mul(lhs, unary());
            } else if (eat('/')) {
                const std::size_t at = pos_;
                try {
                    lhs = MapExpr::div(lhs, unary());
                } catch (const RangeError& e) {
                    throw ParseError(e.what(), at);
                }
            } else {
                return lhs;
            }
        }
    }

    MapExpr unary() {
        if (eat('-')) return MapExpr::sub(MapExpr::constant({0.0, 0.0}), unary());
        return power();
    }

    MapExpr power() {
        MapExpr base = atom();
        while (eat('^')) base = MapExpr::int_pow(base, exponent_literal());
        return base;
    }

    int exponent_literal() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
            throw ParseError("exponent must be a nonnegative integer", pos_);
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer exponent after '^'", pos_);
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw ParseError("exponent must be an integer", pos_);
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{} || value > kMaxExponent)
            throw ParseError("exponent out of range", start);
        return value;
    }

    MapExpr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MapExpr e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (c == 'x') {
            ++pos_;
            return MapExpr::var_x();
        }
        if (c == 'y') {
            ++pos_;
            return MapExpr::var_y();
        }
        if (c == 'i') {
            ++pos_;
            return MapExpr::constant({0.0, 1.0});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    MapExpr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // bare 'e' is not part of the literal
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_)
            throw ParseError("malformed numeric literal", start);
        if (pos_ < text_.size() && text_[pos_] == 'i') {
            ++pos_;
            return MapExpr::constant({0.0, value});
        }
        return MapExpr::constant({value, 0.0});
    }
};

} // namespace

MapExpr parse_map_dsl(std::string_view text) { return Parser(text).parse(); }

// ── self-map audit ──────────────────────────────────────────────────────────

namespace {

// Distance gap check is only meaningful where 1 - |z|^2 is comfortably above
// the double-precision floor; deeper probes are checked for modulus only.
constexpr double kPairDepth = 1e-6;

bool deep(Cx z) { return 1.0 - std::norm(z) < kPairDepth; }

} // namespace

AuditReport self_map_audit(const BidiscMap& f, std::size_t n_samples, std::uint64_t seed) {
    AuditReport report;
    SplitMix64 rng(seed);

    std::vector<std::pair<Cx, Cx>> points;
    points.reserve(n_samples + 64);
    for (std::size_t i = 0; i < n_samples; ++i)
        points.emplace_back(rng.unit_disc(0.999), rng.unit_disc(0.999));
    // radial probes toward the Shilov boundary
    for (int j = 0; j < 4; ++j) {
        const double t1 = normalize_angle(2.0 * M_PI * j / 4.0 + 0.31);
        const double t2 = normalize_angle(2.0 * M_PI * j / 4.0 - 0.57);
        for (int k = 6; k <= 30; k += 4) {
            const double r = 1.0 - std::ldexp(1.0, -k);
            points.emplace_back(std::polar(r, t1), std::polar(r, t2));
        }
    }

    std::vector<std::pair<Cx, Cx>> images;
    std::vector<bool> ok(points.size(), false);
    images.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        ++report.samples_checked;
        try {
            const Cx w1 = f.f1.eval(points[i].first, points[i].second);
            const Cx w2 = f.f2.eval(points[i].first, points[i].second);
            images[i] = {w1, w2};
            ok[i] = true;
            report.max_modulus_seen =
                std::max({report.max_modulus_seen, std::abs(w1), std::abs(w2)});
        } catch (const PoleError&) {
            ++report.pole_hits;
        }
    }

    const auto gap = [](Cx a, Cx b) {
        const double s = std::abs(1.0 - std::conj(a) * b) + std::abs(a - b);
        return std::log(s) - 0.5 * std::log(1.0 - std::norm(a)) - 0.5 * std::log(1.0 - std::norm(b));
    };
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!ok[i] || !ok[i + 1]) continue;
        const auto& [p1, p2] = points[i];
        const auto& [q1, q2] = points[i + 1];
        const auto& [fp1, fp2] = images[i];
        const auto& [fq1, fq2] = images[i + 1];
        if (deep(p1) || deep(p2) || deep(q1) || deep(q2)) continue;
        if (std::abs(fp1) >= 1.0 || std::abs(fp2) >= 1.0 || std::abs(fq1) >= 1.0 ||
            std::abs(fq2) >= 1.0)
            continue; // already a modulus violation
        if (deep(fp1) || deep(fp2) || deep(fq1) || deep(fq2)) continue;
        const double dist_before = std::max(gap(p1, q1), gap(p2, q2));
        const double dist_after = std::max(gap(fp1, fq1), gap(fp2, fq2));
        if (dist_after > dist_before + 1e-9) ++report.schwarz_pick_violations;
    }

    report.pass = report.schwarz_pick_violations == 0 && report.pole_hits == 0 &&
                  report.max_modulus_seen < 1.0;
    return report;
}

} // namespace bidisc
