#include "odospec/laurent.hpp"

#include <ostream>
#include <sstream>

namespace odospec {

namespace {

long sat_add(long a, long b) {
    if (a == Laurent::EXACT || b == Laurent::EXACT) return Laurent::EXACT;
    return a + b;
}

long min_prec(long a, long b) { return a < b ? a : b; }

}  // namespace

Laurent::Laurent(long val, std::vector<Scalar> coeffs, long prec)
    : val_(val), prec_(prec), c_(std::move(coeffs)) {
    if (prec_ != EXACT && prec_ != val_ + static_cast<long>(c_.size()))
        throw ValidationError("laurent window does not match prec");
    normalize();
}

Laurent Laurent::zero_up_to(long prec) {
    Laurent s;
    s.val_ = prec;
    s.prec_ = prec;
    return s;
}

Laurent Laurent::constant(const Scalar& c) { return monomial(c, 0); }

Laurent Laurent::monomial(const Scalar& c, long exp) {
    if (c.is_zero()) return zero();
    return Laurent(exp, {c}, EXACT);
}

Laurent Laurent::poly(std::vector<Scalar> coeffs) { return Laurent(0, std::move(coeffs), EXACT); }

void Laurent::normalize() {
    size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        val_ += static_cast<long>(lead);
    }
    if (prec_ == EXACT) {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
        if (c_.empty()) val_ = 0;
    } else if (c_.empty()) {
        val_ = prec_;
    }
    if (!c_.empty() && val_ < POLE_CAP)
        throw PoleCapError("series valuation " + std::to_string(val_) + " below the pole cap");
}

bool Laurent::definitely_zero(long tau) const {
    if (!c_.empty()) return false;  // leading stored coefficient is nonzero
    if (is_exact()) return true;
    if (prec_ >= tau) return true;
    throw InconclusivePrecision(
        "zero up to z^" + std::to_string(prec_) + " only; confidence threshold is z^" + std::to_string(tau),
        prec_);
}

Scalar Laurent::coeff(long n) const {
    if (prec_ != EXACT && n >= prec_)
        throw InconclusivePrecision("coefficient of z^" + std::to_string(n) + " is beyond prec " +
                                        std::to_string(prec_),
                                    prec_);
    if (n < val_) return Scalar(0);
    size_t idx = static_cast<size_t>(n - val_);
    if (idx >= c_.size()) return Scalar(0);
    return c_[idx];
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Laurent operator+(const Laurent& x, const Laurent& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    long rp = min_prec(x.prec_, y.prec_);
    long rv = std::min(x.c_.empty() ? x.prec_ : x.val_, y.c_.empty() ? y.prec_ : y.val_);
    long hi;  // one past the last exponent to materialize
    if (rp == Laurent::EXACT) {
        hi = std::max(x.val_ + static_cast<long>(x.c_.size()), y.val_ + static_cast<long>(y.c_.size()));
    } else {
        hi = rp;
        if (rv > hi) rv = hi;
    }
    std::vector<Scalar> out;
    out.reserve(static_cast<size_t>(hi - rv));
    for (long n = rv; n < hi; ++n) out.push_back(x.coeff(n) + y.coeff(n));
    return Laurent(rv, std::move(out), rp);
}

Laurent operator-(const Laurent& x, const Laurent& y) { return x + (-y); }

Laurent operator*(const Laurent& x, const Laurent& y) {
    if (x.is_zero() || y.is_zero()) return Laurent::zero();
    long rv = (x.c_.empty() ? x.prec_ : x.val_) + (y.c_.empty() ? y.prec_ : y.val_);
    long rp = min_prec(sat_add(x.prec_, y.c_.empty() ? y.prec_ : y.val_),
                       sat_add(y.prec_, x.c_.empty() ? x.prec_ : x.val_));
    if (rp == Laurent::EXACT) {
        if (x.c_.empty() || y.c_.empty()) return Laurent::zero();
        std::vector<Scalar> out(x.c_.size() + y.c_.size() - 1, Scalar(0));
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i].is_zero()) continue;
            for (size_t j = 0; j < y.c_.size(); ++j) out[i + j] += x.c_[i] * y.c_[j];
        }
        return Laurent(rv, std::move(out), Laurent::EXACT);
    }
    if (rv > rp) rv = rp;
    std::vector<Scalar> out(static_cast<size_t>(rp - rv), Scalar(0));
    for (size_t i = 0; i < x.c_.size(); ++i) {
        if (x.c_[i].is_zero()) continue;
        long ex = x.val_ + static_cast<long>(i);
        for (size_t j = 0; j < y.c_.size(); ++j) {
            long e = ex + y.val_ + static_cast<long>(j);
            if (e >= rp) break;
            out[static_cast<size_t>(e - rv)] += x.c_[i] * y.c_[j];
        }
    }
    return Laurent(rv, std::move(out), rp);
}

Laurent Laurent::scaled(const Scalar& c) const {
    if (c.is_zero()) return is_exact() ? zero() : zero_up_to(prec_);
    Laurent r = *this;
    for (auto& x : r.c_) x *= c;
    r.normalize();
    return r;
}

Laurent Laurent::shifted(long k) const {
    Laurent r = *this;
    r.val_ += k;
    r.prec_ = sat_add(r.prec_, k);
    r.normalize();
    return r;
}

Laurent Laurent::derivative() const {
    if (is_zero()) return zero();
    std::vector<Scalar> out;
    out.reserve(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        long n = val_ + static_cast<long>(i);
        out.push_back(c_[i] * Scalar(Rat(n)));
    }
    long rp = prec_ == EXACT ? EXACT : prec_ - 1;
    return Laurent(val_ - 1, std::move(out), rp);
}

Laurent Laurent::inverse(long window) const {
    if (is_zero()) throw ValidationError("inverse of the zero series");
    if (c_.empty())
        throw InconclusivePrecision("inverse of a series that vanishes up to its precision", prec_);
    if (is_exact() && c_.size() == 1) return monomial(c_[0].inverse(), -val_);
    long n = is_exact() ? window : prec_ - val_;
    std::vector<Scalar> b(static_cast<size_t>(n), Scalar(0));
    Scalar lead_inv = c_[0].inverse();
    b[0] = lead_inv;
    for (long k = 1; k < n; ++k) {
        Scalar acc(0);
        long jmax = std::min<long>(k, static_cast<long>(c_.size()) - 1);
        for (long j = 1; j <= jmax; ++j) acc += c_[static_cast<size_t>(j)] * b[static_cast<size_t>(k - j)];
        b[static_cast<size_t>(k)] = -(lead_inv * acc);
    }
    long rp = is_exact() ? -val_ + window : prec_ - 2 * val_;
    return Laurent(-val_, std::move(b), rp);
}

Laurent Laurent::sqrt(FieldContext& ctx, long window) const {
    if (is_zero()) return zero();
    if (c_.empty())
        throw InconclusivePrecision("square root of a series that vanishes up to its precision", prec_);
    if (val_ % 2 != 0) throw ValidationError("square root needs even valuation, got " + std::to_string(val_));
    Scalar s0 = ctx.sqrt(c_[0]);
    if (is_exact() && c_.size() == 1) return monomial(s0, val_ / 2);
    long n = is_exact() ? window : prec_ - val_;
    std::vector<Scalar> s(static_cast<size_t>(n), Scalar(0));
    s[0] = s0;
    Scalar inv2s0 = (Scalar(2) * s0).inverse();
    for (long k = 1; k < n; ++k) {
        Scalar acc(0);
        for (long j = 1; j < k; ++j) acc += s[static_cast<size_t>(j)] * s[static_cast<size_t>(k - j)];
        Scalar uk = (k < static_cast<long>(c_.size())) ? c_[static_cast<size_t>(k)] : Scalar(0);
        s[static_cast<size_t>(k)] = (uk - acc) * inv2s0;
    }
    long half = val_ / 2;
    long rp = is_exact() ? half + window : prec_ - half;
    return Laurent(half, std::move(s), rp);
}

Scalar Laurent::residue() const {
    if (prec_ != EXACT && prec_ <= -1)
        throw InconclusivePrecision("residue unknowable at prec " + std::to_string(prec_), prec_);
    if (c_.empty() || val_ > -1) return Scalar(0);
    return coeff(-1);
}

Laurent Laurent::truncated(long new_prec) const {
    if (prec_ != EXACT && new_prec >= prec_) return *this;
    if (c_.empty() || new_prec <= val_) return zero_up_to(new_prec);
    std::vector<Scalar> out;
    long hi = std::min<long>(new_prec, val_ + static_cast<long>(c_.size()));
    out.reserve(static_cast<size_t>(hi - val_));
    for (long e = val_; e < hi; ++e) out.push_back(c_[static_cast<size_t>(e - val_)]);
    for (long e = hi; e < new_prec; ++e) out.emplace_back(0);
    return Laurent(val_, std::move(out), new_prec);
}

bool Laurent::agrees_with(const Laurent& other) const {
    long upto = min_prec(prec_, other.prec_);
    if (upto == EXACT) {
        return val_ == other.val_ && c_ == other.c_;
    }
    return agrees_with(other, upto);
}

bool Laurent::agrees_with(const Laurent& other, long upto) const {
    if ((prec_ != EXACT && prec_ < upto) || (other.prec_ != EXACT && other.prec_ < upto))
        throw InconclusivePrecision("comparison window exceeds available precision",
                                    min_prec(prec_, other.prec_));
    long lo = std::min(c_.empty() ? upto : val_, other.c_.empty() ? upto : other.val_);
    for (long n = lo; n < upto; ++n)
        if (coeff(n) != other.coeff(n)) return false;
    return true;
}

std::string Laurent::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        long e = val_ + static_cast<long>(i);
        if (!first) os << " + ";
        first = false;
        if (e == 0) {
            os << c_[i];
        } else {
            os << "(" << c_[i] << ")*z^" << e;
        }
    }
    if (first) os << "0";
    if (!is_exact()) os << " + O(z^" << prec_ << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Laurent& s) { return os << s.str(); }

}  // namespace odospec
