#include "odospec/spectral.hpp"

#include <algorithm>
#include <sstream>

namespace odospec {

namespace {

Scalar cubic_eval(const Scalar& g2, const Scalar& g3, const Scalar& x) {
    return Scalar(4) * x.pow(3) - g2 * x - g3;
}

std::string pt(const Scalar& x, const Scalar& y) { return "(" + x.str() + ", " + y.str() + ")"; }

/// Uniform view of the generic-family parameters; the not-locally-free
/// family is the slice (0, rho, -rho^2/6, 0).
struct GenericView {
    Rat K10, K11, K12, K14;
    Laurent f;
};

GenericView generic_view(const GenericParams& p) { return {p.K10, p.K11, p.K12, p.K14, p.f}; }
GenericView generic_view(const NotLocallyFreeParams& p) {
    return {Rat(0), p.rho, -p.rho * p.rho / 6, Rat(0), p.f};
}

Scalar b_of(const GenericView& v, const Scalar& lambda) {
    return (lambda + Scalar(v.K12 / 2)) * Scalar(v.K11) - Scalar(v.K10 / 2);
}

long vanishing_order(const Laurent& a) {
    if (a.is_zero_known())
        throw InconclusivePrecision("vanishing order undecidable: series is zero up to its precision",
                                    a.prec());
    return a.val();
}

}  // namespace

const char* curve_kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::Smooth: return "smooth";
        case CurveKind::Nodal: return "nodal";
        case CurveKind::Cuspidal: return "cuspidal";
    }
    return "?";
}

const char* sheaf_tag_name(SheafClass::Tag t) {
    using Tag = SheafClass::Tag;
    switch (t) {
        case Tag::LineSum: return "line_sum";
        case Tag::LineSquare: return "line_square";
        case Tag::AtiyahTwist: return "atiyah_twist";
        case Tag::BBundle: return "b_bundle";
        case Tag::UCuspidal: return "u_cuspidal";
        case Tag::UPlus: return "u_plus";
        case Tag::UMinus: return "u_minus";
        case Tag::SPlusLine: return "s_plus_line";
        case Tag::SPlusS: return "s_plus_s";
        case Tag::Rank3Ep: return "rank3_e_p";
        case Tag::Rank3LineSum: return "rank3_line_sum";
    }
    return "?";
}

CurveInfo curve_info(const Scalar& g2, const Scalar& g3) {
    CurveInfo info;
    info.g2 = g2;
    info.g3 = g3;
    info.delta = g2.pow(3) - Scalar(27) * g3 * g3;
    if (!info.delta.is_zero()) {
        info.kind = CurveKind::Smooth;
        return info;
    }
    if (g2.is_zero()) {
        // delta = 0 and g2 = 0 force g3 = 0: the cuspidal cubic y^2 = 4x^3.
        info.kind = CurveKind::Cuspidal;
        info.singular_point = {{Scalar(0), Scalar(0)}};
        return info;
    }
    info.kind = CurveKind::Nodal;
    // The double root of 4x^3 - g2 x - g3: eliminating between h(xi) = 0 and
    // h'(xi) = 0 gives xi = -3 g3 / (2 g2).
    Scalar xi = Scalar(-3) * g3 / (Scalar(2) * g2);
    if (!cubic_eval(g2, g3, xi).is_zero())
        throw ConsistencyError("nodal singular point is not on the curve");
    info.singular_point = {{xi, Scalar(0)}};
    return info;
}

std::vector<SupportPoint> support_of_T(const FamilyParams& params, FieldContext& ctx, const Settings&) {
    std::vector<SupportPoint> out;
    CurveInfo curve;
    if (const auto* sa = std::get_if<SelfAdjointParams>(&params)) {
        curve = curve_info(Scalar(-2 * sa->K3), Scalar(sa->K2 / 2));
        Scalar lambda0 = -sa->f.coeff(0) * Scalar(Rat(1, 2));
        Scalar h = cubic_eval(curve.g2, curve.g3, lambda0);
        Scalar mu0 = ctx.sqrt(h);
        if (mu0.is_zero()) {
            out.push_back({lambda0, Scalar(0), false, 2});
        } else {
            out.push_back({lambda0, mu0, false, 1});
            out.push_back({lambda0, -mu0, false, 1});
        }
    } else if (const auto* dg = std::get_if<DegenerateSelfAdjointParams>(&params)) {
        curve = curve_info(Scalar(3 * dg->gamma * dg->gamma), Scalar(dg->gamma * dg->gamma * dg->gamma));
        out.push_back({Scalar(-dg->gamma / 2), Scalar(0), false, 2});
    } else {
        GenericView v = std::holds_alternative<GenericParams>(params)
                            ? generic_view(std::get<GenericParams>(params))
                            : generic_view(std::get<NotLocallyFreeParams>(params));
        Rat g2 = 3 * v.K12 * v.K12 + v.K10 * v.K11 - v.K14;
        Rat g3 = (2 * v.K10 * v.K11 * v.K12 + 4 * v.K12 * v.K12 * v.K12 +
                  v.K14 * (v.K11 * v.K11 + 4 * v.K12) - v.K10 * v.K10) /
                 4;
        curve = curve_info(Scalar(g2), Scalar(g3));
        if (v.K14 == 0) {
            Scalar lambda0(-v.K12 / 2);
            out.push_back({lambda0, -b_of(v, lambda0), false, 2});
        } else {
            // a(lambda) = (lambda + K12/2)^2 + K14/4
            Scalar root = ctx.sqrt(Rat(-v.K14) / 4);
            for (const Scalar& lambda : {Scalar(-v.K12 / 2) + root, Scalar(-v.K12 / 2) - root})
                out.push_back({lambda, -b_of(v, lambda), false, 1});
        }
    }
    for (auto& q : out) {
        if (q.mu * q.mu != cubic_eval(curve.g2, curve.g3, q.lambda))
            throw ConsistencyError("support point " + pt(q.lambda, q.mu) + " is not on the curve");
        if (curve.singular_point)
            q.is_singular =
                (q.lambda == curve.singular_point->first && q.mu == curve.singular_point->second);
    }
    return out;
}

GcdAtPoint gcd_at_point(const OperatorPair& pair, const Scalar& lambda, const Scalar& mu,
                        const Settings& s) {
    if (!pair.relation.on_curve(lambda, mu))
        throw ValidationError("character " + pt(lambda, mu) + " is not on the spectral curve");
    DiffOp A = pair.L.shifted_sub(lambda);
    DiffOp B = pair.M.shifted_sub(mu);
    GcdAtPoint result;

    // Two-step division scheme: remainder of M - mu by L - lambda, then of
    // L - lambda by that remainder; the Euclid loop continues from there.
    auto [q1, Rt] = right_divide(B, A, s);
    (void)q1;
    DiffOp x = A, y = Rt;
    if (Rt.effective_order(s.tau) >= 0) {
        auto [q2, Rh] = right_divide(A, Rt, s);
        (void)q2;
        const GenericView* gv = nullptr;
        GenericView view;
        if (pair.provenance) {
            if (const auto* g = std::get_if<GenericParams>(&*pair.provenance)) {
                view = generic_view(*g);
                gv = &view;
            } else if (const auto* n = std::get_if<NotLocallyFreeParams>(&*pair.provenance)) {
                view = generic_view(*n);
                gv = &view;
            }
        }
        if (gv != nullptr && Rt.order() == 3) {
            // e0 = a + b f + c f^2 and e1 = (b - mu) f'/2 + c f f' are the
            // closed forms of the top of the order-two remainder in its
            // denominator-cleared scaling: f'^2 Rhat = e0 d^2 - e1 d + e2.
            Scalar a = (lambda + Scalar(gv->K12 / 2)).pow(2) + Scalar(Rat(gv->K14) / 4);
            Scalar b = b_of(*gv, lambda);
            Scalar c = -lambda + Scalar(gv->K12) + Scalar(gv->K11 * gv->K11 / 4);
            const Laurent& f = gv->f;
            Laurent fp = f.derivative();
            Laurent fp2 = fp * fp;
            Laurent e0 = Laurent::constant(a) + f.scaled(b) + (f * f).scaled(c);
            Laurent e1 = fp.scaled((b - mu) * Scalar(Rat(1, 2))) + (f * fp).scaled(c);
            if (!(Rh.coeff(2) * fp2).agrees_with(e0) || !(Rh.coeff(1) * fp2).agrees_with(-e1))
                throw ConsistencyError("order-two remainder disagrees with the closed e0/e1 forms at " +
                                       pt(lambda, mu));
            result.e_checked = true;
        }
        x = Rt;
        y = Rh;
    }
    while (true) {
        long ord_y = y.effective_order(s.tau);
        if (ord_y < 0) break;
        auto [q, r] = right_divide(x, y, s);
        (void)q;
        x = y;
        y = r;
    }
    result.R = monic(x, s);
    result.order = result.R.order();
    if (result.order >= 1) {
        const Laurent& c1 = result.R.coeff(static_cast<size_t>(result.order - 1));
        result.c1_pole = !c1.is_zero_known() && c1.val() < 0;
    }
    return result;
}

ExponentData exponents_nu(const DiffOp& R, FieldContext& ctx) {
    ExponentData data;
    data.ind = indicial(R, ctx);
    data.exponents = data.ind.exponents;
    if (R.order() == 2) {
        Scalar res = R.coeff(1).residue();
        Scalar nu_scalar = -res - Scalar(1);
        if (!nu_scalar.is_rational() || nu_scalar.rat().get_den() != 1)
            throw ConsistencyError("nu = -res(c1) - 1 is not an integer: " + nu_scalar.str());
        data.nu = nu_scalar.rat().get_num().get_si();
        if (data.exponents.size() == 2 && !data.ind.irrational_exponents) {
            Scalar sum = data.exponents[0] + data.exponents[1];
            if (sum != Scalar(Rat(*data.nu + 2)))
                throw ConsistencyError("exponent sum " + sum.str() + " differs from nu + 2 = " +
                                       std::to_string(*data.nu + 2));
        }
    }
    return data;
}

namespace {

bool in_five_set(const std::vector<Scalar>& e) {
    if (e.size() != 2) return false;
    static const long table[5][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& row : table)
        if (e[0] == Scalar(Rat(row[0])) && e[1] == Scalar(Rat(row[1]))) return true;
    return false;
}

long expected_gcd_order(const SheafClass& cls, const SupportPoint& q) {
    using Tag = SheafClass::Tag;
    switch (cls.tag) {
        case Tag::SPlusS: return 4;
        case Tag::UCuspidal:
        case Tag::UPlus:
        case Tag::UMinus: return 3;
        case Tag::SPlusLine: return q.is_singular ? 3 : 2;
        default: return 2;
    }
}

/// The independent pipeline: gcd order (local freeness), the c1 pole
/// (support membership) and the exponent pattern must all agree with the
/// parameter-based verdict.
void cross_check(Classification& out, const OperatorPair& pair, FieldContext& ctx, const Settings& s) {
    using Tag = SheafClass::Tag;
    bool first = true;
    for (const SupportPoint& q : out.support) {
        SupportCheck check;
        check.point = q;
        GcdAtPoint g = gcd_at_point(pair, q.lambda, q.mu, s);
        check.gcd_order = g.order;
        check.c1_pole = g.c1_pole;
        long expected = expected_gcd_order(out.cls, q);
        if (g.order != expected)
            throw ConsistencyError("gcd order " + std::to_string(g.order) + " at " + pt(q.lambda, q.mu) +
                                   " contradicts the verdict " + sheaf_tag_name(out.cls.tag) +
                                   " (expected " + std::to_string(expected) + ")");
        if (g.order == 2) {
            if (!g.c1_pole)
                throw ConsistencyError("predicted support point " + pt(q.lambda, q.mu) +
                                       " has no pole in c1");
            ExponentData exps = exponents_nu(g.R, ctx);
            if (!exps.ind.irrational_exponents && exps.exponents.size() == 2) {
                if (!in_five_set(exps.exponents))
                    throw ConsistencyError("exponents at " + pt(q.lambda, q.mu) +
                                           " fall outside the admissible five patterns");
                bool two_three = exps.exponents[0] == Scalar(2) && exps.exponents[1] == Scalar(3);
                if (two_three != (out.cls.tag == Tag::LineSquare))
                    throw ConsistencyError(
                        "exponent pattern (2,3) must occur exactly for the square of a line bundle");
            }
            check.exponents = std::move(exps);
        }
        if (first) {
            out.gcd = g;
            first = false;
        }
        out.checks.push_back(std::move(check));
    }
}

}  // namespace

NodalBranch nodal_branch(const Rat& K11, const Rat& K12, const Settings& s) {
    if (K12 == 0) throw ValidationError("nodal branch needs K12 != 0 (otherwise the curve is cuspidal)");
    if (6 * K12 + K11 * K11 != 0)
        throw ValidationError("nodal branch needs Delta = 6 K12 + K11^2 = 0");
    FieldContext ctx;
    // Translate x = w - K12/2: the curve reads y^2 = w^2 (4w - 6 K12) with
    // the node at w = 0.  The branches are y = +-W for
    // W = w sqrt(-6 K12 + 4w); the principal root of -6 K12 is positive.
    NodalBranch result;
    result.principal_root = ctx.sqrt(-6 * K12);
    Laurent W = Laurent::poly({Scalar(-6 * K12), Scalar(4)}).sqrt(ctx, s.prec).shifted(1);
    Laurent w = Laurent::poly({Scalar(0), Scalar(1)});
    // Restrict the deciding descriptor generator y - K11 w to both branches.
    // (The other generator w^2 has order two along each branch and lies in
    // both candidate ideals.)
    Laurent g_plus = W - w.scaled(Scalar(K11));
    Laurent g_minus = -W - w.scaled(Scalar(K11));
    long ord_plus = vanishing_order(g_plus);
    long ord_minus = vanishing_order(g_minus);
    // u+ = y + W vanishes along y = -W, so membership in (u+, u-^2) needs
    // branch orders >= 1 along y = +W and >= 2 along y = -W; the mirror
    // ideal (u-, u+^2) swaps the bounds.
    bool is_u_plus = ord_plus >= 1 && ord_minus >= 2;
    bool is_u_minus = ord_minus >= 1 && ord_plus >= 2;
    if (is_u_plus == is_u_minus)
        throw ConsistencyError("torsion descriptor matches neither nodal ideal uniquely");
    result.label = is_u_plus ? SheafClass::Tag::UPlus : SheafClass::Tag::UMinus;
    result.pencil = {Rat(1), K11};
    result.certified_prec = std::min(g_plus.prec(), g_minus.prec());
    return result;
}

Classification classify_sheaf(const FamilyParams& params, const Settings& s) {
    using Tag = SheafClass::Tag;
    Classification out;
    OperatorPair pair = build_pair(params, s);
    out.curve = curve_info(pair.g2, pair.g3);
    FieldContext ctx;
    out.support = support_of_T(params, ctx, s);
    out.certificates = verify_pair(pair, s);
    auto log = [&](std::string line) { out.branch_log.push_back(std::move(line)); };

    if (std::holds_alternative<DegenerateSelfAdjointParams>(params)) {
        log("c1 = 0 and c0 is the constant " +
            rat_to_string(std::get<DegenerateSelfAdjointParams>(params).gamma) + ": S + S");
        out.cls.tag = Tag::SPlusS;
    } else if (const auto* sa = std::get_if<SelfAdjointParams>(&params)) {
        long nu = vanishing_order(sa->f.derivative());
        log("self-adjoint with nu = ord f' = " + std::to_string(nu));
        if (out.support.size() == 2) {
            log("mu0 != 0: two support points swapped by the involution");
            out.cls.tag = Tag::LineSum;
            out.cls.points = {{out.support[0].lambda, out.support[0].mu},
                              {out.support[1].lambda, out.support[1].mu}};
        } else if (out.support[0].is_singular) {
            log("Z = {s}: locally free with determinant O(2[p]), B at the infinite point");
            out.cls.tag = Tag::BBundle;
            out.cls.point_at_infinity = true;
        } else if (nu == 3) {
            log("double smooth point with nu = 3: square of a line bundle");
            out.cls.tag = Tag::LineSquare;
            out.cls.points = {{out.support[0].lambda, out.support[0].mu}};
        } else {
            log("double smooth point with nu = " + std::to_string(nu) + ": Atiyah twist");
            out.cls.tag = Tag::AtiyahTwist;
            out.cls.points = {{out.support[0].lambda, out.support[0].mu}};
        }
    } else {
        GenericView v = std::holds_alternative<GenericParams>(params)
                            ? generic_view(std::get<GenericParams>(params))
                            : generic_view(std::get<NotLocallyFreeParams>(params));
        Rat delta = 6 * v.K12 + v.K11 * v.K11;
        if (v.K14 != 0) {
            log("K14 = " + rat_to_string(v.K14) + " != 0: two distinct support abscissae");
            const SupportPoint* sing = nullptr;
            const SupportPoint* smooth = nullptr;
            for (const auto& q : out.support) (q.is_singular ? sing : smooth) = &q;
            if (sing != nullptr) {
                Rat half_delta = 3 * v.K12 + v.K11 * v.K11 / 2;
                if (v.K10 != half_delta * v.K11 || v.K14 != -half_delta * half_delta)
                    throw ConsistencyError(
                        "singular support point without the not-locally-free parameter constraints");
                log("one support point is the singular point: S + O([q])");
                out.cls.tag = Tag::SPlusLine;
                out.cls.points = {{smooth->lambda, smooth->mu}};
            } else {
                log("both support points are smooth: sum of two line bundles");
                out.cls.tag = Tag::LineSum;
                out.cls.points = {{out.support[0].lambda, out.support[0].mu},
                                  {out.support[1].lambda, out.support[1].mu}};
            }
        } else if (v.K10 == 0) {
            log("K10 = K14 = 0: torsion supported at the singular point");
            out.cls.torsion_descriptor = TorsionDescriptor{v.K12 / 2, v.K11};
            if (delta != 0) {
                log("Delta = " + rat_to_string(delta) + " != 0: locally free, B at qbar");
                out.cls.tag = Tag::BBundle;
                Rat qx = v.K11 * v.K11 / 4 + v.K12;
                Rat qy = v.K11 * (6 * v.K12 + v.K11 * v.K11) / 4;
                out.cls.points = {{Scalar(qx), Scalar(qy)}};
            } else if (v.K12 == 0) {
                log("Delta = 0 on the cuspidal curve: U");
                out.cls.tag = Tag::UCuspidal;
            } else {
                NodalBranch branch = nodal_branch(v.K11, v.K12, s);
                log(std::string("Delta = 0 on the nodal curve: ") + sheaf_tag_name(branch.label) +
                    " via branch orders at the node");
                out.cls.tag = branch.label;
            }
        } else {
            long fval = vanishing_order(v.f);
            log("K14 = 0 with K10 = " + rat_to_string(v.K10) + " != 0: double smooth support point");
            if (fval == 4) {
                log("f vanishes to order four: square of a line bundle");
                out.cls.tag = Tag::LineSquare;
            } else {
                log("f vanishes to order " + std::to_string(fval) + ": Atiyah twist");
                out.cls.tag = Tag::AtiyahTwist;
            }
            out.cls.points = {{out.support[0].lambda, out.support[0].mu}};
        }
    }

    cross_check(out, pair, ctx, s);
    out.pair = std::move(pair);
    return out;
}

Classification classify_fourier_dixmier(const Rat& kappa, const Settings& s) {
    using Tag = SheafClass::Tag;
    Classification out;
    OperatorPair pair = build_fourier_dixmier(kappa);
    out.curve = curve_info(pair.g2, pair.g3);
    out.certificates = verify_pair(pair, s);
    auto log = [&](std::string line) { out.branch_log.push_back(std::move(line)); };
    log("rank three; support = {(lambda, 0) : lambda^3 = kappa}");
    if (kappa == 0) {
        out.support.push_back({Scalar(0), Scalar(0), true, 3});
        log("kappa = 0: cuspidal support at the cusp, indecomposable E at the infinite point");
        out.cls.tag = Tag::Rank3Ep;
    } else {
        out.cls.tag = Tag::Rank3LineSum;
        out.cls.rank3_cube = kappa;
        Int rn, rd;
        bool exact_n = mpz_root(rn.get_mpz_t(), kappa.get_num().get_mpz_t(), 3) != 0;
        bool exact_d = mpz_root(rd.get_mpz_t(), kappa.get_den().get_mpz_t(), 3) != 0;
        if (exact_n && exact_d) {
            Rat lambda1(rn, rd);
            lambda1.canonicalize();
            out.support.push_back({Scalar(lambda1), Scalar(0), false, 1});
            out.cls.points = {{Scalar(lambda1), Scalar(0)}};
            log("rational cube root lambda = " + rat_to_string(lambda1) +
                "; the remaining two roots are conjugate");
        } else {
            log("kappa has no rational cube root; the three points stay symbolic");
        }
    }
    bool first = true;
    for (const auto& q : out.support) {
        SupportCheck check;
        check.point = q;
        GcdAtPoint g = gcd_at_point(pair, q.lambda, q.mu, s);
        check.gcd_order = g.order;
        check.c1_pole = g.c1_pole;
        if (g.order != 3)
            throw ConsistencyError("rank-three gcd order " + std::to_string(g.order) + " at " +
                                   pt(q.lambda, q.mu));
        if (!g.c1_pole)
            throw ConsistencyError("rank-three support point without a pole of c1");
        if (first) {
            out.gcd = g;
            first = false;
        }
        out.checks.push_back(std::move(check));
    }
    out.pair = std::move(pair);
    return out;
}

}  // namespace odospec
