#include "odospec/families.hpp"

#include <numeric>

namespace odospec {

namespace {

Laurent var_z() { return Laurent::poly({Scalar(0), Scalar(1)}); }

/// (d^2 + c2/2)^2 + (c1 d + d c1) + c0
DiffOp grunbaum_operator(const Laurent& c0, const Laurent& c1, const Laurent& c2) {
    DiffOp A({c2.scaled(Scalar(Rat(1, 2))), Laurent::zero(), Laurent::constant(Scalar(1))});
    DiffOp L = mul(A, A);
    if (!c1.is_zero()) {
        // c1 d + d c1 = 2 c1 d + c1'
        L += DiffOp({c1.derivative(), c1.scaled(Scalar(2))});
    }
    L += DiffOp::from_series(c0);
    return L;
}

void require_regular_c2(const Laurent& c2) {
    if (!c2.is_zero_known() && c2.val() < 0)
        throw IrregularC2("c2 has a pole of order " + std::to_string(-c2.val()) + " at z = 0");
}

Scalar coeff_or_throw(const Laurent& f, long n, const char* who) {
    try {
        return f.coeff(n);
    } catch (const InconclusivePrecision&) {
        throw InconclusivePrecision(std::string(who) + " needs the coefficient of z^" + std::to_string(n),
                                    f.prec());
    }
}

}  // namespace

bool CurveRelation::on_curve(const Scalar& lambda, const Scalar& mu) const {
    Scalar rhs = Scalar(c3) * lambda.pow(3) + Scalar(c1) * lambda + Scalar(c0);
    return mu * mu == rhs;
}

OperatorPair build_self_adjoint(const Rat& K2, const Rat& K3, const Laurent& f, const Settings& s) {
    Laurent fp = f.derivative();
    if (fp.is_zero_known())
        throw ValidationError("f is constant; use the degenerate self-adjoint family");
    Laurent fpp = fp.derivative();
    Laurent fppp = fpp.derivative();
    Laurent num = Laurent::constant(Scalar(K2)) + f.scaled(Scalar(2 * K3)) + f * f * f - fppp * fp +
                  (fpp * fpp).scaled(Scalar(Rat(1, 2)));
    Laurent c2 = num * (fp * fp).inverse(s.prec);
    require_regular_c2(c2);
    OperatorPair pair;
    pair.L = grunbaum_operator(f, Laurent::zero(), c2);
    pair.M = build_M(pair.L, s);
    pair.g2 = Scalar(Rat(-2) * K3);
    pair.g3 = Scalar(K2 / 2);
    pair.rank = 2;
    pair.relation = {Rat(4), -pair.g2.rat(), -pair.g3.rat()};
    pair.provenance = SelfAdjointParams{K2, K3, f};
    return pair;
}

OperatorPair build_generic(const Rat& K10, const Rat& K11, const Rat& K12, const Rat& K14,
                           const Laurent& f, const Settings& s) {
    if (!f.is_zero_known() && f.val() < 1)
        throw ValidationError("the generic family needs f(0) = 0");
    Laurent fp = f.derivative();
    if (fp.is_zero_known()) throw ValidationError("the generic family needs a non-constant f");
    Laurent fpp = fp.derivative();
    Laurent fppp = fpp.derivative();
    Laurent f2 = f * f;
    Laurent c0 = -f2 + f.scaled(Scalar(K11)) + Laurent::constant(Scalar(K12));
    Laurent num = Laurent::constant(Scalar(K14)) - f.scaled(Scalar(2 * K10)) + f2.scaled(Scalar(6 * K12)) +
                  (f2 * f).scaled(Scalar(2 * K11)) - f2 * f2 + fpp * fpp -
                  (fp * fppp).scaled(Scalar(2));
    Laurent c2 = num * (fp * fp).scaled(Scalar(2)).inverse(s.prec);
    require_regular_c2(c2);
    OperatorPair pair;
    pair.L = grunbaum_operator(c0, fp, c2);
    pair.M = build_M(pair.L, s);
    Rat g2 = 3 * K12 * K12 + K10 * K11 - K14;
    Rat g3 = (2 * K10 * K11 * K12 + 4 * K12 * K12 * K12 + K14 * (K11 * K11 + 4 * K12) - K10 * K10) / 4;
    pair.g2 = Scalar(g2);
    pair.g3 = Scalar(g3);
    pair.rank = 2;
    pair.relation = {Rat(4), -g2, -g3};
    pair.provenance = GenericParams{K10, K11, K12, K14, f};
    return pair;
}

OperatorPair build_not_locally_free(const Rat& rho, const Laurent& f, const Settings& s) {
    if (!f.is_zero_known() && f.val() < 1) throw ValidationError("the family needs f(0) = 0");
    Scalar f1 = coeff_or_throw(f, 1, "the vanishing-pattern check");
    if (f1.is_zero()) {
        Scalar f2 = coeff_or_throw(f, 2, "the vanishing-pattern check");
        Scalar f3 = coeff_or_throw(f, 3, "the vanishing-pattern check");
        Scalar f4 = coeff_or_throw(f, 4, "the vanishing-pattern check");
        if (!f2.is_zero() || !f4.is_zero() || f3.is_zero())
            throw ValidationError(
                "f must satisfy f'(0) != 0, or f'(0) = f''(0) = f''''(0) = 0 with f'''(0) != 0");
    }
    Rat K12 = -rho * rho / 6;
    OperatorPair pair = build_generic(Rat(0), rho, K12, Rat(0), f, s);
    pair.provenance = NotLocallyFreeParams{rho, f};
    return pair;
}

OperatorPair build_degenerate_self_adjoint(const Laurent& c2, const Rat& gamma, const Settings& s) {
    require_regular_c2(c2);
    OperatorPair pair;
    pair.L = grunbaum_operator(Laurent::constant(Scalar(gamma)), Laurent::zero(), c2);
    pair.M = build_M(pair.L, s);
    Rat g2 = 3 * gamma * gamma;
    Rat g3 = gamma * gamma * gamma;
    pair.g2 = Scalar(g2);
    pair.g3 = Scalar(g3);
    pair.rank = 2;
    pair.relation = {Rat(4), -g2, -g3};
    pair.provenance = DegenerateSelfAdjointParams{c2, gamma};
    return pair;
}

OperatorPair build_pair(const FamilyParams& params, const Settings& s) {
    return std::visit(
        [&](const auto& p) -> OperatorPair {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SelfAdjointParams>)
                return build_self_adjoint(p.K2, p.K3, p.f, s);
            else if constexpr (std::is_same_v<T, GenericParams>)
                return build_generic(p.K10, p.K11, p.K12, p.K14, p.f, s);
            else if constexpr (std::is_same_v<T, DegenerateSelfAdjointParams>)
                return build_degenerate_self_adjoint(p.c2, p.gamma, s);
            else
                return build_not_locally_free(p.rho, p.f, s);
        },
        params);
}

namespace {

/// The polynomial pairs are exact, so their defining relation is checked
/// right in the constructor.
void require_exact_relation(const OperatorPair& pair, const char* who) {
    DiffOp rhs = pair.L.pow(3).scaled(Scalar(pair.relation.c3)) + pair.L.scaled(Scalar(pair.relation.c1)) +
                 DiffOp::from_series(Laurent::constant(Scalar(pair.relation.c0)));
    if (!op_zero_certificate(mul(pair.M, pair.M) - rhs).zero)
        throw ConsistencyError(std::string(who) + ": the defining relation failed");
    if (!op_zero_certificate(commutator(pair.L, pair.M)).zero)
        throw ConsistencyError(std::string(who) + ": the generators do not commute");
}

}  // namespace

OperatorPair build_dixmier(const Rat& kappa) {
    Laurent z = var_z();
    Laurent z3k = Laurent::poly({Scalar(kappa), Scalar(0), Scalar(0), Scalar(1)});
    DiffOp D({z3k, Laurent::zero(), Laurent::constant(Scalar(1))});
    DiffOp Zop = DiffOp::from_series(z);
    OperatorPair pair;
    pair.L = mul(D, D) + DiffOp::from_series(z.scaled(Scalar(2)));
    pair.M = mul(mul(D, D), D) + (mul(Zop, D) + mul(D, Zop)).scaled(Scalar(Rat(3, 2)));
    pair.g2 = Scalar(0);
    pair.g3 = Scalar(4 * kappa);  // (2Q)^2 = 4P^3 - 4kappa
    pair.rank = 2;
    pair.relation = {Rat(1), Rat(0), -kappa};
    pair.provenance = SelfAdjointParams{8 * kappa, Rat(0), z.scaled(Scalar(2))};
    require_exact_relation(pair, "Dixmier pair");
    return pair;
}

OperatorPair build_fourier_dixmier(const Rat& kappa) {
    Laurent z2k = Laurent::poly({Scalar(kappa), Scalar(0), Scalar(1)});
    DiffOp D({z2k, Laurent::zero(), Laurent::zero(), Laurent::constant(Scalar(1))});
    DiffOp d = DiffOp::d_power(1);
    OperatorPair pair;
    pair.L = mul(D, D) + d.scaled(Scalar(2));
    pair.M = mul(mul(D, D), D) + (mul(d, D) + mul(D, d)).scaled(Scalar(Rat(3, 2)));
    pair.g2 = Scalar(0);
    pair.g3 = Scalar(4 * kappa);
    pair.rank = 3;
    pair.relation = {Rat(1), Rat(0), -kappa};
    pair.provenance = std::nullopt;
    require_exact_relation(pair, "Fourier-transformed Dixmier pair");
    return pair;
}

OperatorPair build_wallenberg(const Rat& g2, const Rat& g3, const Rat& x0, const Rat& y0,
                              const Settings& s) {
    if (y0 == 0) throw ValidationError("the seed needs y0 != 0");
    if (y0 * y0 != 4 * x0 * x0 * x0 - g2 * x0 - g3)
        throw ValidationError("seed (x0, y0) is not on the curve y^2 = 4x^3 - g2 x - g3");
    // u'' = 6u^2 - g2/2, u(0) = x0, u'(0) = y0.
    long n = s.prec;
    std::vector<Scalar> u(static_cast<size_t>(n), Scalar(0));
    u[0] = Scalar(x0);
    if (n > 1) u[1] = Scalar(y0);
    for (long m = 0; m + 2 < n; ++m) {
        Scalar conv(0);
        for (long i = 0; i <= m; ++i) conv += u[static_cast<size_t>(i)] * u[static_cast<size_t>(m - i)];
        Scalar rhs = Scalar(6) * conv;
        if (m == 0) rhs -= Scalar(g2 / 2);
        u[static_cast<size_t>(m + 2)] = rhs / Scalar(Rat((m + 1) * (m + 2)));
    }
    Laurent useries(0, std::move(u), n);
    OperatorPair pair;
    pair.L = DiffOp({-useries.scaled(Scalar(2)), Laurent::zero(), Laurent::constant(Scalar(1))});
    pair.M = DiffOp({-useries.derivative().scaled(Scalar(3)), -useries.scaled(Scalar(6)),
                     Laurent::zero(), Laurent::constant(Scalar(2))});
    pair.g2 = Scalar(g2);
    pair.g3 = Scalar(g3);
    pair.rank = 1;
    pair.relation = {Rat(4), -g2, -g3};
    pair.provenance = std::nullopt;
    return pair;
}

ZeroCertificate op_zero_certificate(const DiffOp& op) {
    ZeroCertificate cert;
    for (const auto& c : op.coeffs()) {
        if (!c.is_zero_known()) {
            cert.zero = false;
            continue;
        }
        if (!c.is_exact()) cert.prec = std::min(cert.prec, c.prec());
    }
    return cert;
}

PairReport verify_pair(const OperatorPair& pair, const Settings& s) {
    PairReport report;
    report.declared_rank = pair.rank;
    report.computed_rank =
        static_cast<int>(std::gcd(pair.L.effective_order(s.tau), pair.M.effective_order(s.tau)));
    report.commutator = op_zero_certificate(commutator(pair.L, pair.M));
    DiffOp rhs = pair.L.pow(3).scaled(Scalar(pair.relation.c3)) + pair.L.scaled(Scalar(pair.relation.c1)) +
                 DiffOp::from_series(Laurent::constant(Scalar(pair.relation.c0)));
    report.relation = op_zero_certificate(mul(pair.M, pair.M) - rhs);
    return report;
}

}  // namespace odospec
