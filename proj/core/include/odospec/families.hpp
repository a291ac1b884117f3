#pragma once

#include <optional>
#include <variant>

#include "odospec/psdo.hpp"

namespace odospec {

/// Parameter records for the rank-two genus-one families.
struct SelfAdjointParams {
    Rat K2, K3;
    Laurent f;  // c0 = f, non-constant
};

struct GenericParams {
    Rat K10, K11, K12, K14;
    Laurent f;  // f(0) = 0
};

struct DegenerateSelfAdjointParams {
    Laurent c2;
    Rat gamma;  // constant c0
};

struct NotLocallyFreeParams {
    Rat rho;
    Laurent f;
};

using FamilyParams =
    std::variant<SelfAdjointParams, GenericParams, DegenerateSelfAdjointParams, NotLocallyFreeParams>;

/// Relation mu^2 = c3 lambda^3 + c1 lambda + c0 satisfied by the characters
/// of the stored generators.
struct CurveRelation {
    Rat c3 = 4, c1 = 0, c0 = 0;
    bool on_curve(const Scalar& lambda, const Scalar& mu) const;
};

struct OperatorPair {
    DiffOp L;
    DiffOp M;
    Scalar g2, g3;  ///< Weierstrass parameters of the spectral curve
    int rank = 2;
    CurveRelation relation;
    std::optional<FamilyParams> provenance;
};

OperatorPair build_self_adjoint(const Rat& K2, const Rat& K3, const Laurent& f, const Settings& s = {});
OperatorPair build_generic(const Rat& K10, const Rat& K11, const Rat& K12, const Rat& K14,
                           const Laurent& f, const Settings& s = {});
OperatorPair build_not_locally_free(const Rat& rho, const Laurent& f, const Settings& s = {});
OperatorPair build_degenerate_self_adjoint(const Laurent& c2, const Rat& gamma, const Settings& s = {});
OperatorPair build_pair(const FamilyParams& params, const Settings& s = {});

/// D = d^2 + z^3 + kappa, P = D^2 + 2z, Q = D^3 + (3/2)(zD + Dz);
/// Q^2 = P^3 - kappa, rank two.  Exact polynomial coefficients.
OperatorPair build_dixmier(const Rat& kappa);

/// Fourier transform of the Dixmier pair: D = d^3 + z^2 + kappa,
/// P = D^2 + 2d, Q = D^3 + (3/2)(dD + Dd); rank three.
OperatorPair build_fourier_dixmier(const Rat& kappa);

/// Rank-one pair P = d^2 - 2u, Q = 2d^3 - 6ud - 3u' with u the series
/// solution of u'' = 6u^2 - g2/2 seeded by a rational curve point
/// (x0, y0), y0 != 0.
OperatorPair build_wallenberg(const Rat& g2, const Rat& g3, const Rat& x0, const Rat& y0,
                              const Settings& s = {});

/// Certificate that an operator is zero: every coefficient vanishes on its
/// known window; `prec` is the smallest certification exponent over the
/// coefficients (Laurent::EXACT when all data is exact).
struct ZeroCertificate {
    bool zero = true;
    long prec = Laurent::EXACT;
};

ZeroCertificate op_zero_certificate(const DiffOp& op);

struct PairReport {
    ZeroCertificate commutator;
    ZeroCertificate relation;
    int declared_rank = 0;
    int computed_rank = 0;
    bool ok() const {
        return commutator.zero && relation.zero && declared_rank == computed_rank;
    }
};

/// Checks [L, M] = 0, the curve relation, and rank = gcd of orders.
PairReport verify_pair(const OperatorPair& pair, const Settings& s = {});

}  // namespace odospec
