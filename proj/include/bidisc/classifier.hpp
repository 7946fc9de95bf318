#pragma once

#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bidisc/disc_dynamics.hpp"

namespace bidisc {

// Which variable the slice map moves: SliceInX analyzes x -> f(x, t),
// SliceInY analyzes y -> f(t, y); t is the slice parameter.
enum class SliceAxis { SliceInX, SliceInY };

// On-demand solver for a fixed-point curve t -> F(t): the interior fixed
// point of the slice map at parameter t. Memoized per parameter; derivative
// obtained by implicit differentiation of f(F(t), t) = F(t).
class SliceCurve {
public:
    SliceCurve() = default;
    SliceCurve(MapExpr component, SliceAxis axis, Cx anchor_param, Cx anchor_value);

    Cx operator()(Cx t) const;
    DualValue dual(Cx t) const;
    OneVarMap as_map() const;
    SliceAxis axis() const { return state_->axis; }

private:
    struct State {
        MapExpr component;
        SliceAxis axis = SliceAxis::SliceInX;
        Cx anchor_param{}, anchor_value{};
        mutable bool has_last = false;
        mutable Cx last_param{}, last_value{};
        mutable std::unordered_map<std::uint64_t, Cx> cache;
    };
    std::shared_ptr<State> state_;
};

struct HerveComponentResult {
    enum class Kind { WolffIndependent, FixedPointCurve };
    Kind kind = Kind::WolffIndependent;
    // WolffIndependent
    double theta = 0.0;
    double spread = 0.0;
    // FixedPointCurve
    std::optional<SliceCurve> curve;
    std::vector<std::pair<Cx, Cx>> samples; // (parameter, fixed point)
};

// Default probe grid: radii {0.2, 0.5, 0.8} x angles {0, pi/2, pi, 3pi/2}.
std::vector<Cx> default_slice_grid();
std::vector<Cx> slice_grid(std::span<const double> radii, std::size_t n_angles);

// Decides which branch of the Herve dichotomy a component family is in:
// either every slice has an interior fixed point (a fixed-point curve), or
// every slice has the same boundary Wolff point. Mixed outcomes throw
// InconsistentSlices.
HerveComponentResult slice_analysis(const MapExpr& component, SliceAxis axis,
                                    std::span<const Cx> grid);

// Interior fixed point of x -> f1(x, y), or nullopt when that slice has a
// boundary Denjoy-Wolff point. Throws IndeterminateError on an identity slice.
std::optional<DiscPoint> solve_slice_fixed_point(const MapExpr& f1, DiscPoint y);

struct ComposedDynamics {
    double theta1 = 0.0, theta2 = 0.0;        // Wolff angles of F1.F2 and F2.F1
    double lambda1 = 0.0, lambda2 = 0.0;      // dilatations of F1, F2 at the opposite angles
    double lambda12 = 0.0, lambda21 = 0.0;    // dilatations of the compositions
    std::optional<Cx> interior_fixed_of_f1f2; // set when F1.F2 has an interior fixed point
};

// Wolff angles and boundary dilatation coefficients of the compositions of
// two fixed-point curves; asserts lambda12 = lambda21 = lambda1 * lambda2
// within 2% (ProductIdentityViolation otherwise).
ComposedDynamics composed_dynamics(const SliceCurve& F1, const SliceCurve& F2);

// Parametrization of a one-dimensional fixed-point locus. Non-transposed:
// z -> (g(z), z); transposed: z -> (z, g(z)). operator() returns g(z), solved
// per call from the full fixed-point system.
class FixCurve {
public:
    FixCurve() = default;
    FixCurve(BidiscMap f, bool transposed, Cx anchor_param, Cx anchor_value);

    Cx operator()(Cx t) const;
    OneVarMap as_map() const;
    bool transposed() const { return state_->transposed; }

private:
    struct State {
        BidiscMap f;
        bool transposed = false;
        Cx anchor_param{}, anchor_value{};
        mutable bool has_last = false;
        mutable Cx last_param{}, last_value{};
    };
    std::shared_ptr<State> state_;
};

struct FixAnalysis {
    enum class GClass { None, AutomorphismOrIdentity, ProperNotAut, NotProper };

    int dim = 0;
    BidiscPoint base;              // the fixed point the analysis grew from
    std::optional<FixCurve> curve; // dim == 1
    GClass g_class = GClass::None;
    double not_proper_theta = 0.0;
    Cx not_proper_c{};
    std::vector<std::pair<Cx, Cx>> curve_samples; // (parameter, dependent coordinate)
};

// Dimension and structure of the fixed-point set through p0: the identity map
// (dim 2), a curve with its parametrizing map classified (dim 1), or an
// isolated point (dim 0).
FixAnalysis fix_locus(const BidiscMap& f, const BidiscPoint& p0);

struct FirstType {
    SliceCurve F1, F2;
    double theta1 = 0.0, theta2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0, lambda12 = 0.0, lambda21 = 0.0;
    bool lambda_flag = false; // a deciding dilatation sits in the 1 +- 1e-3 band
};

struct SecondType {
    double theta1 = 0.0; // Wolff angle of the slice-independent component
    SliceCurve F2;       // fixed-point curve of the other component
    std::optional<double> theta2; // boundary limit angle of F2 at e^{i theta1}
    double lambda2 = 0.0;         // +inf when F2 stays interior along the ray
    bool transposed = false;      // true when f2 was the Wolff-independent one
    bool lambda_flag = false;
};

struct ThirdType {
    double theta1 = 0.0, theta2 = 0.0;
};

struct InteriorFixed {
    FixAnalysis fix;
};

struct ProjectionDegenerate {
    bool f1_is_pi1 = true;      // otherwise f2 == pi2
    double other_wolff_theta = 0.0;
};

using MapTypeClassification =
    std::variant<FirstType, SecondType, ThirdType, InteriorFixed, ProjectionDegenerate>;

struct ClassifyOptions {
    std::size_t audit_samples = 384;
    std::uint64_t seed = 1729;
    std::size_t projection_probes = 50;
    double lambda_band = 1e-3;
};

// Full classification pipeline: audit, projection/identity probes, interior
// fixed-point search, then slice analysis of both components. `audit` may
// pass in a precomputed report to avoid re-sampling.
MapTypeClassification classify(const BidiscMap& f, const ClassifyOptions& opt = {},
                               const AuditReport* audit = nullptr);

// Damped two-dimensional Newton iteration for f(p) = p.
std::optional<BidiscPoint> newton2d_fixed_point(const BidiscMap& f, Cx x0, Cx y0,
                                                double tol = 1e-13, int max_steps = 60);

const char* classification_kind_name(const MapTypeClassification& c);

} // namespace bidisc
