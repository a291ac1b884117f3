#pragma once

#include "odospec/diffop.hpp"

namespace odospec {

/// Truncated pseudo-differential operator: the terms a_top d^top down to
/// d^(top-depth) are kept, everything further below is unknown.
class PsdOp {
public:
    PsdOp() : top_(0), c_{Laurent::zero()} {}
    PsdOp(long top, std::vector<Laurent> coeffs);

    /// Embed a differential operator, keeping `depth` terms below its top.
    /// The missing low powers are exactly zero, so the embedding is exact.
    static PsdOp embed(const DiffOp& op, long depth);

    long top() const { return top_; }
    long depth() const { return static_cast<long>(c_.size()) - 1; }
    /// Coefficient of d^(top-k).
    const Laurent& coeff_at_depth(size_t k) const { return c_[k]; }
    /// Coefficient of d^e for any exponent e (zero above top, throws below
    /// the kept depth).
    Laurent coeff_of_power(long e) const;

    friend PsdOp operator+(const PsdOp& x, const PsdOp& y);
    friend PsdOp operator-(const PsdOp& x, const PsdOp& y);
    PsdOp operator-() const;
    PsdOp scaled(const Scalar& c) const;

    /// Product with the rule d^n a = sum_k C(n,k) a^(k) d^(n-k); the kept
    /// depth of the result is min of the operand depths.
    friend PsdOp mul(const PsdOp& A, const PsdOp& B);
    PsdOp pow(long e) const;

    /// Projection onto nonnegative powers of d.  Throws DepthExhausted when
    /// some nonnegative coefficient is not kept.
    DiffOp plus_part() const;

    /// Round-trip to DiffOp for operators with no kept negative part.
    DiffOp to_diffop() const { return plus_part(); }

    std::string str() const;

private:
    long top_;
    std::vector<Laurent> c_;  // c_[k] = coefficient of d^(top_-k)
};

/// The unique monic r-th root S of a normalized operator L of order r*k:
/// S = d^k + s_2 d^(k-2) + ..., solved coefficient by coefficient down to
/// the requested depth (each step is one linear equation).
PsdOp rth_root(const DiffOp& L, long r, const Settings& s = {});

/// M = 2 * (L^{3/2})_+ for a normalized even-order operator L, computed via
/// the square root cubed.
DiffOp build_M(const DiffOp& L, const Settings& s = {});

/// The same projection through the 4th root raised to the 6th power;
/// kept as an independent route for cross-checks (order-4 input only).
DiffOp build_M_via_fourth_root(const DiffOp& L, const Settings& s = {});

}  // namespace odospec
