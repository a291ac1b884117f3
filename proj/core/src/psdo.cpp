#include "odospec/psdo.hpp"

#include <sstream>

namespace odospec {

namespace {

/// Generalized binomial coefficient C(n, t) for integer n (possibly
/// negative), rational exact.
Rat gen_binom(long n, long t) {
    Rat acc(1);
    for (long i = 1; i <= t; ++i) {
        acc *= Rat(n - i + 1);
        acc /= Rat(i);
    }
    return acc;
}

}  // namespace

PsdOp::PsdOp(long top, std::vector<Laurent> coeffs) : top_(top), c_(std::move(coeffs)) {
    if (c_.empty()) throw ValidationError("pseudo-differential operator needs a kept window");
}

PsdOp PsdOp::embed(const DiffOp& op, long depth) {
    long top = op.order();
    if (top < 0) top = 0;
    std::vector<Laurent> c(static_cast<size_t>(depth) + 1, Laurent::zero());
    for (long k = 0; k <= depth; ++k) {
        long e = top - k;
        if (e >= 0 && e <= op.order()) c[static_cast<size_t>(k)] = op.coeff(static_cast<size_t>(e));
    }
    return PsdOp(top, std::move(c));
}

Laurent PsdOp::coeff_of_power(long e) const {
    if (e > top_) return Laurent::zero();
    long k = top_ - e;
    if (k > depth())
        throw DepthExhausted("coefficient of d^" + std::to_string(e) + " below the kept depth");
    return c_[static_cast<size_t>(k)];
}

PsdOp operator+(const PsdOp& x, const PsdOp& y) {
    long rtop = std::max(x.top_, y.top_);
    long rbot = std::max(x.top_ - x.depth(), y.top_ - y.depth());
    std::vector<Laurent> out;
    out.reserve(static_cast<size_t>(rtop - rbot) + 1);
    for (long e = rtop; e >= rbot; --e) out.push_back(x.coeff_of_power(e) + y.coeff_of_power(e));
    return PsdOp(rtop, std::move(out));
}

PsdOp PsdOp::operator-() const {
    PsdOp r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

PsdOp operator-(const PsdOp& x, const PsdOp& y) { return x + (-y); }

PsdOp PsdOp::scaled(const Scalar& c) const {
    PsdOp r = *this;
    for (auto& x : r.c_) x = x.scaled(c);
    return r;
}

PsdOp mul(const PsdOp& A, const PsdOp& B) {
    long rtop = A.top_ + B.top_;
    long rdepth = std::min(A.depth(), B.depth());
    std::vector<Laurent> out(static_cast<size_t>(rdepth) + 1, Laurent::zero());
    // Precompute the derivatives of B's kept coefficients.
    std::vector<std::vector<Laurent>> db(B.c_.size());
    for (size_t kb = 0; kb < B.c_.size(); ++kb) {
        long tmax = rdepth - static_cast<long>(kb);
        db[kb].reserve(static_cast<size_t>(std::max<long>(tmax + 1, 1)));
        db[kb].push_back(B.c_[kb]);
        for (long t = 1; t <= tmax; ++t) db[kb].push_back(db[kb].back().derivative());
    }
    for (size_t ka = 0; ka < A.c_.size() && static_cast<long>(ka) <= rdepth; ++ka) {
        if (A.c_[ka].is_zero()) continue;
        long i = A.top_ - static_cast<long>(ka);
        for (size_t kb = 0; kb < B.c_.size(); ++kb) {
            long tmax = rdepth - static_cast<long>(ka) - static_cast<long>(kb);
            if (tmax < 0) break;
            if (B.c_[kb].is_zero()) continue;
            for (long t = 0; t <= tmax; ++t) {
                Rat binom = gen_binom(i, t);
                if (binom == 0) continue;
                size_t kr = ka + kb + static_cast<size_t>(t);
                out[kr] += (A.c_[ka] * db[kb][static_cast<size_t>(t)]).scaled(Scalar(binom));
            }
        }
    }
    return PsdOp(rtop, std::move(out));
}

PsdOp PsdOp::pow(long e) const {
    if (e < 1) throw ValidationError("pseudo-differential power needs e >= 1");
    PsdOp acc = *this;
    for (long i = 1; i < e; ++i) acc = mul(acc, *this);
    return acc;
}

DiffOp PsdOp::plus_part() const {
    if (top_ < 0) return DiffOp::zero();
    if (depth() < top_)
        throw DepthExhausted("plus part needs the kept depth to reach d^0 (top " + std::to_string(top_) +
                             ", depth " + std::to_string(depth()) + ")");
    std::vector<Laurent> c(static_cast<size_t>(top_) + 1, Laurent::zero());
    for (long e = 0; e <= top_; ++e) c[static_cast<size_t>(e)] = c_[static_cast<size_t>(top_ - e)];
    return DiffOp(std::move(c));
}

std::string PsdOp::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[k] << ")*d^" << (top_ - static_cast<long>(k));
    }
    if (first) os << "0";
    os << " + [d^<" << (top_ - depth()) << "]";
    return os.str();
}

PsdOp rth_root(const DiffOp& L, long r, const Settings& s) {
    if (r < 1) throw ValidationError("root index must be positive");
    if (!L.is_monic()) throw ValidationError("rth root needs a monic operator");
    long n = L.order();
    if (n <= 0 || n % r != 0) throw ValidationError("operator order is not divisible by the root index");
    long k = n / r;
    if (n >= 2 && !L.coeff(static_cast<size_t>(n - 1)).definitely_zero(s.tau))
        throw ValidationError("rth root needs a normalized operator (vanishing sub-leading coefficient)");
    long depth = s.depth;
    std::vector<Laurent> sc(static_cast<size_t>(depth) + 1, Laurent::zero());
    sc[0] = Laurent::constant(Scalar(1));
    PsdOp Lp = PsdOp::embed(L, depth);
    Rat inv_r(1, r);
    for (long m = 2; m <= depth; ++m) {
        // Power of the partial sum, kept just deep enough to read d^(n-m).
        std::vector<Laurent> partial(sc.begin(), sc.begin() + m + 1);
        PsdOp Sm(k, std::move(partial));
        PsdOp P = Sm.pow(r);
        Laurent err = Lp.coeff_of_power(n - m) - P.coeff_of_power(n - m);
        sc[static_cast<size_t>(m)] = err.scaled(Scalar(inv_r));
    }
    return PsdOp(k, std::move(sc));
}

DiffOp build_M(const DiffOp& L, const Settings& s) {
    long n = L.order();
    if (n % 2 != 0 || n <= 0) throw ValidationError("M needs an even-order operator");
    long half = n / 2;
    if (s.depth < 3 * half)
        throw DepthExhausted("building M of order " + std::to_string(3 * half) + " needs depth >= " +
                             std::to_string(3 * half));
    PsdOp S = rth_root(L, 2, s);
    PsdOp C = S.pow(3);
    return C.plus_part().scaled(Scalar(2));
}

DiffOp build_M_via_fourth_root(const DiffOp& L, const Settings& s) {
    if (L.order() != 4) throw ValidationError("the fourth-root route needs an order-four operator");
    PsdOp T = rth_root(L, 4, s);
    PsdOp C = T.pow(6);
    return C.plus_part().scaled(Scalar(2));
}

}  // namespace odospec
