#pragma once

#include <string>

#include "bidisc/map_expr.hpp"

// Shared test maps. The five numbered ones are the standing fixtures for the
// fixed-point-free theory; the rest exercise the interior-fixed-point cases.
namespace fixtures {

inline bidisc::BidiscMap make(const std::string& f1, const std::string& f2) {
    return {bidisc::parse_map_dsl(f1), bidisc::parse_map_dsl(f2)};
}

// first type, lambda1 = 2, lambda2 = 1/2, no Wolff points
inline bidisc::BidiscMap example_i() {
    return make("(x + y^2)/2", "(y + (3*x+1)/(x+3))/2");
}

// first type, lambda1 = 1/4, lambda2 = 1/2, Wolff set = corner (1,1)
inline bidisc::BidiscMap example_ii() {
    return make("(x + (5*y+3)/(3*y+5))/2", "(y + (3*x+1)/(x+3))/2");
}

// second type, lambda2 = 1/4, Wolff set = {1} x disc plus corner (1,1)
inline bidisc::BidiscMap example_iii() {
    return make("(3*x+1)/(x+3)", "(y + (5*x+3)/(3*x+5))/2");
}

// second type, lambda2 = 2, Wolff set = {1} x disc only
inline bidisc::BidiscMap example_iv() {
    return make("(3*x+1)/(x+3)", "(y + x^2)/2");
}

// third type, Wolff set = both flats through (1,1) plus the corner
inline bidisc::BidiscMap example_v() {
    return make("(3*x+1)/(x+3)", "(5*y+3)/(3*y+5)");
}

// isolated interior fixed point at the origin
inline bidisc::BidiscMap contraction() { return make("x/2", "y/2"); }

// fixed-point curve = diagonal, parametrized by the identity
inline bidisc::BidiscMap diagonal_mean() { return make("(x + y)/2", "(x + y)/2"); }

// fixed-point curve x = (1-y)/2 with a non-proper parametrizing map
inline bidisc::BidiscMap shifted_projection() {
    return make("(x + (1 - y)/2)/2", "y");
}

// f1 = pi1; the second component is Wolff-independent with angle 0
inline bidisc::BidiscMap first_factor_identity() {
    return make("x", "(3*y+1)/(y+3)");
}

inline std::string fixture_path(const std::string& name) {
    return std::string(BIDISC_FIXTURE_DIR) + "/" + name;
}

} // namespace fixtures
