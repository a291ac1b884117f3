#pragma once

#include "odospec/families.hpp"

namespace odospec {

enum class CurveKind { Smooth, Nodal, Cuspidal };

const char* curve_kind_name(CurveKind k);

/// Weierstrass cubic y^2 = 4x^3 - g2 x - g3 with its singularity data.
struct CurveInfo {
    Scalar g2, g3;
    Scalar delta;  ///< g2^3 - 27 g3^2
    CurveKind kind = CurveKind::Smooth;
    std::optional<std::pair<Scalar, Scalar>> singular_point;  ///< (xi, 0) when singular
};

CurveInfo curve_info(const Scalar& g2, const Scalar& g3);

struct SupportPoint {
    Scalar lambda, mu;
    bool is_singular = false;  ///< equals the singular point of the curve
    int multiplicity = 1;      ///< 2 for a double root of a(lambda) / mu = 0
};

/// Support of the Fourier-Mukai torsion sheaf, from the closed formulas:
/// generic family: a(lambda) = 0, mu = -b(lambda); self-adjoint family:
/// lambda0 = -f(0)/2, mu^2 = h(lambda0).  May open the context extension.
std::vector<SupportPoint> support_of_T(const FamilyParams& params, FieldContext& ctx,
                                       const Settings& s = {});

struct GcdAtPoint {
    DiffOp R;        ///< monic generator of <L - lambda, M - mu>
    long order = 0;  ///< order of R
    bool c1_pole = false;  ///< the d^(m-1) coefficient has a pole at z = 0
    bool e_checked = false;  ///< generic family: e0/e1 closed forms verified
};

/// Two-step division gcd at a character on the spectral curve; checks the
/// point lies on the curve, and for generic-family pairs verifies the
/// closed forms of the two leading coefficients of the order-2 remainder.
GcdAtPoint gcd_at_point(const OperatorPair& pair, const Scalar& lambda, const Scalar& mu,
                        const Settings& s = {});

struct ExponentData {
    std::optional<long> nu;  ///< -res0(c1) - 1; only for order-two inputs
    std::vector<Scalar> exponents;
    IndicialData ind;
};

/// Indicial exponents plus the nu invariant; asserts rho1 + rho2 = nu + 2
/// on order-two inputs.
ExponentData exponents_nu(const DiffOp& R, FieldContext& ctx);

struct Point {
    Scalar x, y;
};

/// Ideal ((x + shift)^2, y - slope (x + shift)) in the completed local
/// ring at the singular point; the pencil parameter is (1 : slope).
struct TorsionDescriptor {
    Rat shift;  ///< K12 / 2
    Rat slope;  ///< K11
};

struct SheafClass {
    enum class Tag {
        LineSum,       ///< O([q1]) + O([q2])
        LineSquare,    ///< O([q]) + O([q])
        AtiyahTwist,   ///< A (x) O([q])
        BBundle,       ///< B_qbar (qbar may be the infinite point)
        UCuspidal,     ///< the cuspidal indecomposable non-locally-free U
        UPlus,         ///< nodal U+
        UMinus,        ///< nodal U-
        SPlusLine,     ///< S + O([q])
        SPlusS,        ///< S + S
        Rank3Ep,       ///< indecomposable rank-three bundle E_p on the cusp
        Rank3LineSum,  ///< O([q1]) + O([q2]) + O([q3]), q_i = (lambda_i, 0), lambda_i^3 = kappa
    };
    Tag tag;
    std::vector<Point> points;       ///< the q data attached to the tag
    bool point_at_infinity = false;  ///< BBundle at qbar = p
    std::optional<TorsionDescriptor> torsion_descriptor;
    std::optional<Rat> rank3_cube;  ///< kappa for Rank3LineSum
};

const char* sheaf_tag_name(SheafClass::Tag t);

/// One support point of the independent verification pipeline.
struct SupportCheck {
    SupportPoint point;
    long gcd_order = 0;
    bool c1_pole = false;
    std::optional<ExponentData> exponents;
};

struct Classification {
    SheafClass cls;
    CurveInfo curve;
    std::vector<SupportPoint> support;
    std::vector<SupportCheck> checks;
    std::vector<std::string> branch_log;  ///< the inequality/equation behind each decision
    PairReport certificates;
    GcdAtPoint gcd;     ///< gcd at the first support point (reported)
    OperatorPair pair;  ///< the operators the verdict was computed from
};

/// The full decision tree for the rank-two families, cross-checked against
/// the gcd/exponent pipeline (disagreement raises ConsistencyError).
Classification classify_sheaf(const FamilyParams& params, const Settings& s = {});

/// Rank-three classification of the Fourier transform of the Dixmier pair:
/// kappa = 0 gives E_p, otherwise three line bundles at (lambda, 0) with
/// lambda^3 = kappa.
Classification classify_fourier_dixmier(const Rat& kappa, const Settings& s = {});

struct NodalBranch {
    SheafClass::Tag label;  ///< UPlus or UMinus
    Scalar principal_root;  ///< the chosen sqrt of -6 K12
    std::pair<Rat, Rat> pencil;  ///< Hilbert-scheme parameter (1 : K11)
    long certified_prec = 0;
};

/// Decide U+ versus U- on a nodal curve (Delta = 0, K12 != 0) by branch
/// expansion of the torsion descriptor at the node.
NodalBranch nodal_branch(const Rat& K11, const Rat& K12, const Settings& s = {});

}  // namespace odospec
