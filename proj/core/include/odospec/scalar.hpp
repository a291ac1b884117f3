#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>

#include "odospec/errors.hpp"

namespace odospec {

using Rat = mpq_class;
using Int = mpz_class;

/// Parse "p", "p/q" or a decimal-free signed integer string into an exact
/// rational.  Rejects zero denominators.
Rat parse_rat(const std::string& text);

/// Render a rational as "p" or "p/q" in lowest terms, q > 0.
std::string rat_to_string(const Rat& r);

/// Exact square root of a rational if it is a perfect square.
std::optional<Rat> rat_sqrt(const Rat& r);

/// Split |n| = s^2 * d with d free of square factors up to the trial-division
/// bound (any remaining square part is still detected when it is a full
/// square).  Returns {s, d} with sign carried by d.
std::pair<Int, Int> split_square(const Int& n);

class FieldContext;

/// An element a + b*sqrt(d) of Q or of one real/imaginary quadratic
/// extension Q(sqrt(d)).  d = 0 encodes a plain rational (then b = 0).
/// Scalars from different extensions must not be mixed.
class Scalar {
public:
    Scalar() : a_(0), b_(0), d_(0) {}
    Scalar(const Rat& a) : a_(a), b_(0), d_(0) {}  // NOLINT: implicit by design
    Scalar(long a) : a_(a), b_(0), d_(0) {}        // NOLINT
    Scalar(const Rat& a, const Rat& b, const Int& d);

    const Rat& rat() const;  ///< value as a rational; throws if b != 0
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Int& radicand() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
    friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }
    friend bool operator==(const Scalar& x, const Scalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || y.b_ == 0 || x.d_ == y.d_);
    }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

    Scalar inverse() const;
    Scalar conjugate() const;  ///< a - b*sqrt(d)
    /// Field norm a^2 - d b^2; zero only for the zero element.
    Rat norm() const;
    Scalar pow(long e) const;

    /// "p/q" or "p/q+r/s*sqrt(d)" (minus sign absorbed into r/s).
    std::string str() const;
    static Scalar parse(const std::string& text);

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s);

private:
    static Int check_same_context(const Scalar& x, const Scalar& y);

    Rat a_, b_;
    Int d_;
};

/// Owns the (at most one) quadratic extension of a computation.  The
/// extension is opened lazily by the first square root that needs it;
/// a second incompatible radicand raises IrrationalSupport.
class FieldContext {
public:
    FieldContext() = default;

    bool has_extension() const { return d_.has_value(); }
    const Int& radicand() const;

    /// Principal square root of a rational r in the context field:
    /// the result is t or t*sqrt(d) with t >= 0 (for d < 0 the principal
    /// choice is the one with non-negative coefficient).
    Scalar sqrt(const Rat& r);

    /// Square root of a scalar.  Only rational inputs are supported; a
    /// non-rational radicand would need a degree-four extension.
    Scalar sqrt(const Scalar& s);

    /// Both roots of x^2 + p x + q = 0, opening the extension if needed.
    std::pair<Scalar, Scalar> quadratic_roots(const Scalar& p, const Scalar& q);

private:
    std::optional<Int> d_;
};

}  // namespace odospec
