#include "odospec/diffop.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace odospec {

Scalar spoly_eval(const SPoly& p, const Scalar& x) {
    Scalar acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

SPoly spoly_mul(const SPoly& a, const SPoly& b) {
    if (a.empty() || b.empty()) return {};
    SPoly out(a.size() + b.size() - 1, Scalar(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

SPoly spoly_deflate(const SPoly& p, const Scalar& r) {
    SPoly q(p.size() - 1, Scalar(0));
    Scalar carry = p.back();
    for (size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + carry * r;
    }
    if (!carry.is_zero()) throw ValidationError("deflation at a non-root");
    return q;
}

namespace {

void spoly_trim(SPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

/// Divisors of |n| up to the trial-division bound; used for the
/// rational-root screen of cubic indicial polynomials.
std::vector<Int> small_divisors(const Int& n) {
    std::vector<Int> divs{Int(1)};
    Int m = abs(n);
    if (m == 0) return divs;
    for (Int p(2); p * p <= m && p < 20000; ++p) {
        if (!mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) continue;
        size_t base = divs.size();
        Int pk(1);
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    if (m > 1) {  // leftover prime factor
        size_t base = divs.size();
        for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * m);
    }
    std::sort(divs.begin(), divs.end());
    divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
    return divs;
}

bool try_root(SPoly& p, const Scalar& cand, std::vector<Scalar>& out) {
    if (!spoly_eval(p, cand).is_zero()) return false;
    out.push_back(cand);
    p = spoly_deflate(p, cand);
    return true;
}

}  // namespace

RootSearch spoly_roots(SPoly p, FieldContext& ctx) {
    spoly_trim(p);
    RootSearch res;
    if (p.size() <= 1) return res;
    // Integer screen first: every exponent the classification can meet is a
    // small integer, so this step is exact and cheap.
    bool progress = true;
    while (p.size() > 3 && progress) {
        progress = false;
        for (long k = -8; k <= 12 && p.size() > 3; ++k)
            if (try_root(p, Scalar(Rat(k)), res.roots)) progress = true;
        if (!progress && p.size() > 3) {
            // Rational screen over small divisors of constant and leading term.
            bool rational = true;
            for (const auto& c : p)
                if (!c.is_rational()) rational = false;
            if (!rational) break;
            Int den(1);
            for (const auto& c : p) den = lcm(den, c.rat().get_den());
            Int c0 = Rat(p.front().rat() * Rat(den)).get_num();
            Int cn = Rat(p.back().rat() * Rat(den)).get_num();
            if (c0 == 0) {
                if (try_root(p, Scalar(0), res.roots)) progress = true;
                continue;
            }
            for (const Int& num : small_divisors(c0)) {
                for (const Int& q : small_divisors(cn)) {
                    Rat cand(num, q);
                    cand.canonicalize();
                    if (try_root(p, Scalar(cand), res.roots) ||
                        try_root(p, Scalar(-cand), res.roots)) {
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
        }
    }
    while (p.size() == 3 || p.size() == 2) {
        if (p.size() == 2) {
            res.roots.push_back(-(p[0] / p[1]));
            p.resize(1);
            break;
        }
        // quadratic: x^2 + px + q after normalization
        Scalar A = p[2], B = p[1], C = p[0];
        Scalar pp = B / A, qq = C / A;
        try {
            auto [r1, r2] = ctx.quadratic_roots(pp, qq);
            res.roots.push_back(r1);
            res.roots.push_back(r2);
        } catch (const IrrationalSupport&) {
            res.complete = false;
        }
        p.resize(1);
    }
    if (p.size() > 1) res.complete = false;
    return res;
}

DiffOp::DiffOp(std::vector<Laurent> coeffs) : c_(std::move(coeffs)) { trim(); }

void DiffOp::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

DiffOp DiffOp::from_series(const Laurent& a) { return DiffOp({a}); }

DiffOp DiffOp::d_power(long k) {
    std::vector<Laurent> c(static_cast<size_t>(k) + 1, Laurent::zero());
    c.back() = Laurent::constant(Scalar(1));
    return DiffOp(std::move(c));
}

DiffOp DiffOp::from_d_poly(const SPoly& p) {
    std::vector<Laurent> c;
    c.reserve(p.size());
    for (const auto& s : p) c.push_back(Laurent::constant(s));
    return DiffOp(std::move(c));
}

const Laurent& DiffOp::coeff(size_t i) const {
    static const Laurent kZero;
    return i < c_.size() ? c_[i] : kZero;
}

long DiffOp::effective_order(long tau) const {
    for (size_t i = c_.size(); i-- > 0;)
        if (!c_[i].definitely_zero(tau)) return static_cast<long>(i);
    return -1;
}

bool DiffOp::is_monic() const {
    if (c_.empty()) return false;
    const Laurent& lead = c_.back();
    return lead.is_exact() && lead.val() == 0 && lead.terms() == 1 && lead.coeff(0) == Scalar(1);
}

DiffOp DiffOp::operator-() const {
    DiffOp r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

DiffOp operator+(const DiffOp& x, const DiffOp& y) {
    std::vector<Laurent> out(std::max(x.c_.size(), y.c_.size()), Laurent::zero());
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < x.c_.size() && i < y.c_.size())
            out[i] = x.c_[i] + y.c_[i];
        else if (i < x.c_.size())
            out[i] = x.c_[i];
        else
            out[i] = y.c_[i];
    }
    return DiffOp(std::move(out));
}

DiffOp operator-(const DiffOp& x, const DiffOp& y) { return x + (-y); }

DiffOp DiffOp::scaled(const Scalar& c) const {
    DiffOp r = *this;
    for (auto& x : r.c_) x = x.scaled(c);
    r.trim();
    return r;
}

DiffOp DiffOp::scaled(const Laurent& a) const {
    DiffOp r = *this;
    for (auto& x : r.c_) x = a * x;
    r.trim();
    return r;
}

DiffOp DiffOp::shifted_sub(const Scalar& lambda) const {
    DiffOp r = *this;
    if (r.c_.empty()) r.c_.emplace_back();
    r.c_[0] -= Laurent::constant(lambda);
    r.trim();
    return r;
}

namespace {

/// Coefficients of d o C (compose with one more derivative on the left):
/// (d o C)_j = C_{j-1} + C_j'.
std::vector<Laurent> shift_up(const std::vector<Laurent>& c) {
    std::vector<Laurent> out(c.size() + 1, Laurent::zero());
    for (size_t j = 0; j < c.size(); ++j) {
        out[j + 1] += c[j];
        out[j] += c[j].derivative();
    }
    return out;
}

}  // namespace

DiffOp mul(const DiffOp& A, const DiffOp& B) {
    if (A.is_zero() || B.is_zero()) return DiffOp::zero();
    std::vector<Laurent> acc(A.c_.size() + B.c_.size() - 1, Laurent::zero());
    std::vector<Laurent> dB = B.c_;  // coefficients of d^i o B
    for (size_t i = 0; i < A.c_.size(); ++i) {
        if (!A.c_[i].is_zero()) {
            for (size_t j = 0; j < dB.size(); ++j) {
                if (dB[j].is_zero()) continue;
                acc[j] += A.c_[i] * dB[j];
            }
        }
        if (i + 1 < A.c_.size()) dB = shift_up(dB);
    }
    return DiffOp(std::move(acc));
}

DiffOp DiffOp::pow(long e) const {
    if (e < 0) throw ValidationError("negative operator power");
    DiffOp result = DiffOp::from_series(Laurent::constant(Scalar(1)));
    for (long i = 0; i < e; ++i) result = mul(result, *this);
    return result;
}

Laurent DiffOp::apply(const Laurent& f) const {
    Laurent acc = Laurent::zero();
    Laurent der = f;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i].is_zero()) acc += c_[i] * der;
        if (i + 1 < c_.size()) der = der.derivative();
    }
    return acc;
}

DiffOp commutator(const DiffOp& A, const DiffOp& B) { return mul(A, B) - mul(B, A); }

std::string DiffOp::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[i] << ")";
        if (i > 0) os << "*d^" << i;
    }
    if (first) os << "0";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const DiffOp& op) { return os << op.str(); }

std::pair<DiffOp, DiffOp> right_divide(const DiffOp& A, const DiffOp& B, const Settings& s) {
    long ord_b = B.effective_order(s.tau);
    if (ord_b < 0) throw ValidationError("right division by the zero operator");
    const Laurent& lead_b = B.coeff(static_cast<size_t>(ord_b));
    if (lead_b.is_zero_known())
        throw InconclusivePrecision("leading coefficient of the divisor vanishes up to its precision",
                                    lead_b.prec());
    Laurent lead_b_inv = lead_b.inverse(s.prec);

    // d^k o B for k = 0 .. ord(A) - ord(B), computed once.
    long max_shift = std::max<long>(A.order() - ord_b, 0);
    std::vector<std::vector<Laurent>> dB;
    dB.reserve(static_cast<size_t>(max_shift) + 1);
    dB.push_back(B.coeffs());
    dB.back().resize(static_cast<size_t>(ord_b) + 1);  // ignore confidently-zero top tail
    for (long k = 1; k <= max_shift; ++k) {
        std::vector<Laurent> next(dB.back().size() + 1, Laurent::zero());
        for (size_t j = 0; j < dB.back().size(); ++j) {
            next[j + 1] += dB.back()[j];
            next[j] += dB.back()[j].derivative();
        }
        dB.push_back(std::move(next));
    }

    std::vector<Laurent> rem = A.coeffs();
    std::vector<Laurent> quo(static_cast<size_t>(max_shift) + 1, Laurent::zero());
    long ord_r = static_cast<long>(rem.size()) - 1;
    while (ord_r >= ord_b) {
        while (ord_r >= 0 && rem[static_cast<size_t>(ord_r)].definitely_zero(s.tau)) --ord_r;
        if (ord_r < ord_b) break;
        long shift = ord_r - ord_b;
        Laurent factor = rem[static_cast<size_t>(ord_r)] * lead_b_inv;
        quo[static_cast<size_t>(shift)] += factor;
        const auto& shifted = dB[static_cast<size_t>(shift)];
        for (size_t j = 0; j < shifted.size(); ++j) {
            if (shifted[j].is_zero()) continue;
            rem[j] -= factor * shifted[j];
        }
        // The top coefficient cancels identically by construction.
        rem[static_cast<size_t>(ord_r)] = Laurent::zero();
        --ord_r;
    }
    rem.resize(static_cast<size_t>(std::max<long>(ord_r + 1, 0)));
    return {DiffOp(std::move(quo)), DiffOp(std::move(rem))};
}

DiffOp monic(const DiffOp& P, const Settings& s) {
    long ord = P.effective_order(s.tau);
    if (ord < 0) throw ValidationError("monic normalization of the zero operator");
    if (P.is_monic() && ord == P.order()) return P;
    Laurent lead_inv = P.coeff(static_cast<size_t>(ord)).inverse(s.prec);
    std::vector<Laurent> out;
    out.reserve(static_cast<size_t>(ord) + 1);
    for (long i = 0; i <= ord; ++i) out.push_back(lead_inv * P.coeff(static_cast<size_t>(i)));
    out.back() = Laurent::constant(Scalar(1));  // exact by construction
    return DiffOp(std::move(out));
}

DiffOp op_gcd(const DiffOp& A, const DiffOp& B, const Settings& s) {
    if (A.is_zero() || B.is_zero()) throw ValidationError("gcd needs nonzero operators");
    DiffOp x = A, y = B;
    if (x.effective_order(s.tau) < y.effective_order(s.tau)) std::swap(x, y);
    while (true) {
        long ord_y = y.effective_order(s.tau);
        if (ord_y < 0) break;
        auto [q, r] = right_divide(x, y, s);
        (void)q;
        x = y;
        y = r;
    }
    return monic(x, s);
}

IndicialData indicial(const DiffOp& R, FieldContext& ctx) {
    long r = R.order();
    if (r < 1) throw ValidationError("indicial data needs order >= 1");
    if (!R.is_monic()) throw ValidationError("indicial data needs a monic operator");
    IndicialData data;
    data.regular_singular = true;
    // Fuchs condition: the pole order of c_k (coefficient of d^{r-k}) is at most k.
    for (long k = 1; k <= r; ++k) {
        const Laurent& ck = R.coeff(static_cast<size_t>(r - k));
        if (!ck.is_zero_known() && ck.val() < -k) data.regular_singular = false;
    }
    if (!data.regular_singular) return data;
    // gamma_k = residue of z^{k-1} c_k = coefficient of z^{-k} in c_k.
    for (long k = 1; k <= r; ++k) {
        const Laurent& ck = R.coeff(static_cast<size_t>(r - k));
        data.gammas.push_back(ck.shifted(k - 1).residue());
    }
    // [x]_r + gamma_1 [x]_{r-1} + ... + gamma_r with [x]_k = x(x-1)...(x-k+1).
    std::vector<SPoly> falling(static_cast<size_t>(r) + 1);
    falling[0] = {Scalar(1)};
    for (long k = 1; k <= r; ++k)
        falling[static_cast<size_t>(k)] =
            spoly_mul(falling[static_cast<size_t>(k - 1)], {Scalar(Rat(-(k - 1))), Scalar(1)});
    SPoly ind = falling[static_cast<size_t>(r)];
    for (long k = 1; k <= r; ++k) {
        const SPoly& f = falling[static_cast<size_t>(r - k)];
        for (size_t i = 0; i < f.size(); ++i) ind[i] += data.gammas[static_cast<size_t>(k - 1)] * f[i];
    }
    data.indicial_poly = ind;
    RootSearch search = spoly_roots(ind, ctx);
    data.exponents = std::move(search.roots);
    data.irrational_exponents = !search.complete;
    std::sort(data.exponents.begin(), data.exponents.end(), [](const Scalar& a, const Scalar& b) {
        if (a.a() != b.a()) return a.a() < b.a();
        return a.b() < b.b();
    });
    return data;
}

std::pair<DiffOp, Laurent> normalize_subleading(const DiffOp& P) {
    if (!P.is_monic()) throw ValidationError("normalization needs a monic operator");
    long n = P.order();
    if (n < 1) throw ValidationError("normalization needs positive order");
    const Laurent& sub = P.coeff(static_cast<size_t>(n - 1));
    if (!sub.is_zero_known() && sub.val() < 0)
        throw ValidationError("normalization needs regular coefficients");
    Laurent v = sub.scaled(Scalar(Rat(-1, n)));
    if (v.is_zero_known() && v.is_exact()) return {P, Laurent::zero()};
    // Horner evaluation of P at G = d + v.
    std::vector<Laurent> g{v, Laurent::constant(Scalar(1))};
    DiffOp G(std::move(g));
    DiffOp result = DiffOp::from_series(P.coeff(static_cast<size_t>(n)));
    for (long i = n - 1; i >= 0; --i) {
        result = mul(result, G);
        result += DiffOp::from_series(P.coeff(static_cast<size_t>(i)));
    }
    return {result, v};
}

SPoly act_right_z(const SPoly& p) {
    if (p.size() <= 1) return {};
    SPoly out(p.size() - 1, Scalar(0));
    for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * Scalar(Rat(static_cast<long>(i)));
    spoly_trim(out);
    return out;
}

SPoly act_right_d(const SPoly& p) {
    if (p.empty()) return {};
    SPoly out(p.size() + 1, Scalar(0));
    for (size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i];
    return out;
}

}  // namespace odospec
