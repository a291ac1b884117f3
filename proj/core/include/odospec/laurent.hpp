#pragma once

#include <limits>
#include <vector>

#include "odospec/scalar.hpp"

namespace odospec {

/// Truncated formal Laurent series over the exact field.
///
/// A series carries an interval of knowledge: coefficients are stored for
/// exponents val .. prec-1 and are *unknown* (not zero) from prec on.  An
/// exact series (finite support, everything beyond known to vanish) uses
/// the sentinel prec = EXACT.  Coefficients below val are known to vanish.
///
/// Precision algebra: sums take min(prec), products take
/// min(prec(a)+val(b), prec(b)+val(a)), d/dz maps (val, prec) to
/// (val-1, prec-1).
class Laurent {
public:
    static constexpr long EXACT = std::numeric_limits<long>::max();
    static constexpr long POLE_CAP = -64;

    Laurent() : val_(0), prec_(EXACT) {}  ///< the exact zero series

    /// Series with the given coefficients for exponents val, val+1, ...
    /// and precision prec (EXACT for polynomial data).
    Laurent(long val, std::vector<Scalar> coeffs, long prec = EXACT);

    static Laurent zero() { return Laurent(); }
    /// Unknown-beyond-prec zero: all coefficients below prec vanish.
    static Laurent zero_up_to(long prec);
    static Laurent constant(const Scalar& c);
    static Laurent monomial(const Scalar& c, long exp);
    /// Power series c0 + c1 z + ... with exact tail.
    static Laurent poly(std::vector<Scalar> coeffs);

    long val() const { return val_; }
    long prec() const { return prec_; }
    bool is_exact() const { return prec_ == EXACT; }
    /// True exact zero.
    bool is_zero() const { return c_.empty() && is_exact(); }
    /// All stored coefficients vanish (zero as far as we know).
    bool is_zero_known() const { return c_.empty(); }
    /// Tri-state confident zero test: true if exactly zero or known zero
    /// through the exponent threshold tau; false if some stored coefficient
    /// is nonzero; throws InconclusivePrecision otherwise.
    bool definitely_zero(long tau) const;

    /// Coefficient of z^n; throws if n >= prec (unknowable).
    Scalar coeff(long n) const;
    /// Number of stored coefficients.
    size_t terms() const { return c_.size(); }

    Laurent operator-() const;
    friend Laurent operator+(const Laurent& x, const Laurent& y);
    friend Laurent operator-(const Laurent& x, const Laurent& y);
    friend Laurent operator*(const Laurent& x, const Laurent& y);
    Laurent& operator+=(const Laurent& y) { return *this = *this + y; }
    Laurent& operator-=(const Laurent& y) { return *this = *this - y; }
    Laurent& operator*=(const Laurent& y) { return *this = *this * y; }

    Laurent scaled(const Scalar& c) const;
    Laurent shifted(long k) const;  ///< multiply by z^k
    Laurent derivative() const;

    /// Multiplicative inverse.  `window` bounds the number of computed
    /// terms when the input is exact and the inverse does not terminate.
    Laurent inverse(long window = 48) const;

    /// Square root with principal leading root taken in the context.
    /// Requires even valuation and a rational leading coefficient.
    Laurent sqrt(FieldContext& ctx, long window = 48) const;

    /// Coefficient of z^-1.  Throws InconclusivePrecision if prec <= -1.
    Scalar residue() const;

    /// Drop knowledge beyond new_prec.
    Laurent truncated(long new_prec) const;

    /// Equality of all coefficients below min(prec, other.prec).
    bool agrees_with(const Laurent& other) const;
    /// Equality of all coefficients below upto (must be known by both).
    bool agrees_with(const Laurent& other, long upto) const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Laurent& s);

private:
    void normalize();

    long val_;
    long prec_;
    std::vector<Scalar> c_;  // exponents val_ .. val_+c_.size()-1
};

}  // namespace odospec
