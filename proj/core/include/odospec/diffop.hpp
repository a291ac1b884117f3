#pragma once

#include <utility>
#include <vector>

#include "odospec/laurent.hpp"
#include "odospec/settings.hpp"

namespace odospec {

/// Dense polynomial over the scalar field, coefficients low to high.
using SPoly = std::vector<Scalar>;

Scalar spoly_eval(const SPoly& p, const Scalar& x);
SPoly spoly_mul(const SPoly& a, const SPoly& b);
/// Synthetic division of p by (x - r); p must vanish at r.
SPoly spoly_deflate(const SPoly& p, const Scalar& r);

struct RootSearch {
    std::vector<Scalar> roots;  ///< roots found in the field context (with multiplicity)
    bool complete = true;       ///< false when some roots lie outside the context
};

/// Roots of a monic-or-not polynomial of degree <= 3 (radical formulas for
/// degree <= 2, rational/integer screening plus deflation for degree 3).
RootSearch spoly_roots(SPoly p, FieldContext& ctx);

/// An ordinary differential operator sum a_i(z) d^i with Laurent series
/// coefficients; element of Q((z))[d] with d z - z d = 1.
class DiffOp {
public:
    DiffOp() = default;
    explicit DiffOp(std::vector<Laurent> coeffs);

    static DiffOp zero() { return DiffOp(); }
    static DiffOp from_series(const Laurent& a);  ///< order-zero operator
    static DiffOp d_power(long k);                ///< the operator d^k
    /// Polynomial in d with scalar coefficients, low to high.
    static DiffOp from_d_poly(const SPoly& p);

    /// Order = largest stored power (exact-zero leading coefficients are
    /// trimmed; a leading coefficient that merely vanishes up to its
    /// precision is kept, see effective_order).
    long order() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Laurent& coeff(size_t i) const;
    const std::vector<Laurent>& coeffs() const { return c_; }

    /// Largest power whose coefficient is not confidently zero at
    /// threshold tau; -1 for the (confidently) zero operator.
    long effective_order(long tau) const;

    bool is_monic() const;  ///< leading coefficient is the exact constant 1

    DiffOp operator-() const;
    friend DiffOp operator+(const DiffOp& x, const DiffOp& y);
    friend DiffOp operator-(const DiffOp& x, const DiffOp& y);
    DiffOp& operator+=(const DiffOp& y) { return *this = *this + y; }
    DiffOp& operator-=(const DiffOp& y) { return *this = *this - y; }

    DiffOp scaled(const Scalar& c) const;
    DiffOp scaled(const Laurent& a) const;  ///< left multiplication by a(z)
    DiffOp shifted_sub(const Scalar& lambda) const;  ///< this - lambda

    friend DiffOp mul(const DiffOp& A, const DiffOp& B);
    friend DiffOp operator*(const DiffOp& A, const DiffOp& B) { return mul(A, B); }
    DiffOp pow(long e) const;

    /// Left action on a series: sum a_i f^(i).
    Laurent apply(const Laurent& f) const;

    /// Commutator AB - BA.
    friend DiffOp commutator(const DiffOp& A, const DiffOp& B);

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const DiffOp& op);

private:
    void trim();
    std::vector<Laurent> c_;  // c_[i] = coefficient of d^i
};

/// Right Euclidean division: A = Q*B + R with ord R < ord B.  The leading
/// coefficient of B must be invertible up to precision; tau drives the
/// confident-zero decisions, window the series inversions.
std::pair<DiffOp, DiffOp> right_divide(const DiffOp& A, const DiffOp& B, const Settings& s = {});

/// Monic normalization (1/lead)*P.
DiffOp monic(const DiffOp& P, const Settings& s = {});

/// Monic generator of the left ideal <A, B>, computed by the right-division
/// Euclid loop.  Remainders are declared zero only when every coefficient
/// is known to vanish through z^tau.
DiffOp op_gcd(const DiffOp& A, const DiffOp& B, const Settings& s = {});

/// Frobenius data of a monic operator at the regular singular point z = 0.
struct IndicialData {
    bool regular_singular = false;
    std::vector<Scalar> gammas;         ///< gamma_1 .. gamma_r
    SPoly indicial_poly;                ///< [x]_r + gamma_1 [x]_{r-1} + ... + gamma_r
    std::vector<Scalar> exponents;      ///< roots found in the field context
    bool irrational_exponents = false;  ///< some exponents lie outside the context
};

IndicialData indicial(const DiffOp& R, FieldContext& ctx);

/// Conjugation by the inner automorphism d -> d + v with v = -a_{n-1}/n,
/// killing the sub-leading coefficient.  Returns the conjugated operator
/// and the substitution series v.
std::pair<DiffOp, Laurent> normalize_subleading(const DiffOp& P);

/// The right action of the generators on a polynomial p(d) with scalar
/// coefficients: p(d) <| z = p'(d), p(d) <| d = d*p(d).
SPoly act_right_z(const SPoly& p);
SPoly act_right_d(const SPoly& p);

}  // namespace odospec
