#include "odospec/scalar.hpp"

#include <ostream>
#include <sstream>

namespace odospec {

Rat parse_rat(const std::string& text) {
    std::string t;
    t.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (!t.empty() && t[0] == '+') t.erase(t.begin());  // GMP rejects a leading '+'
    if (t.empty()) throw ParseError("empty rational literal");
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) {
            Rat r{Int(t)};
            return r;
        }
        Int num(t.substr(0, slash));
        Int den(t.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in rational literal '" + text + "'");
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("malformed rational literal '" + text + "'");
    }
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::optional<Rat> rat_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rat(0);
    const Int& num = r.get_num();
    const Int& den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rat s(sn, sd);
    s.canonicalize();
    return s;
}

std::pair<Int, Int> split_square(const Int& n) {
    if (n == 0) return {Int(0), Int(0)};
    Int rest = abs(n);
    Int square_root(1);
    // Pull out p^2 for small primes, then absorb a remaining full square.
    static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    for (long p : primes) {
        Int p2 = Int(p) * p;
        while (mpz_divisible_p(rest.get_mpz_t(), p2.get_mpz_t())) {
            rest /= p2;
            square_root *= p;
        }
    }
    for (long p = 53; Int(p) * p <= rest && p < 100000; p += 2) {
        Int p2 = Int(p) * p;
        while (mpz_divisible_p(rest.get_mpz_t(), p2.get_mpz_t())) {
            rest /= p2;
            square_root *= p;
        }
    }
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
        Int s;
        mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
        square_root *= s;
        rest = 1;
    }
    if (n < 0) rest = -rest;
    return {square_root, rest};
}

Scalar::Scalar(const Rat& a, const Rat& b, const Int& d) : a_(a), b_(b), d_(d) {
    if (b_ == 0) {
        d_ = 0;
    } else if (d_ == 0 || d_ == 1) {
        throw ValidationError("quadratic part requires a non-square radicand");
    }
}

const Rat& Scalar::rat() const {
    if (b_ != 0) throw ValidationError("scalar " + str() + " is not rational");
    return a_;
}

Int Scalar::check_same_context(const Scalar& x, const Scalar& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_)
        throw MixedContextError("cannot combine sqrt(" + x.d_.get_str() + ") with sqrt(" +
                                y.d_.get_str() + ")");
    return x.d_;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    d_ = check_same_context(*this, o);
    a_ += o.a_;
    b_ += o.b_;
    if (b_ == 0) d_ = 0;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    d_ = check_same_context(*this, o);
    a_ -= o.a_;
    b_ -= o.b_;
    if (b_ == 0) d_ = 0;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    Int d = check_same_context(*this, o);
    Rat na = a_ * o.a_ + Rat(d) * b_ * o.b_;
    Rat nb = a_ * o.b_ + b_ * o.a_;
    a_ = na;
    b_ = nb;
    d_ = (b_ == 0) ? Int(0) : d;
    return *this;
}

Rat Scalar::norm() const { return a_ * a_ - Rat(d_) * b_ * b_; }

Scalar Scalar::conjugate() const {
    Scalar r = *this;
    r.b_ = -r.b_;
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw ValidationError("division by zero scalar");
    if (b_ == 0) return Scalar(1 / a_);
    Rat n = norm();
    // n = 0 with b != 0 would mean d is a rational square; the constructor
    // forbids square radicands, so n is a unit here.
    Scalar r = conjugate();
    r.a_ /= n;
    r.b_ /= n;
    return r;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result(1);
    Scalar base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

std::string Scalar::str() const {
    if (b_ == 0) return rat_to_string(a_);
    std::string s = rat_to_string(a_);
    if (b_ > 0) s += "+";
    s += rat_to_string(b_) + "*sqrt(" + d_.get_str() + ")";
    return s;
}

Scalar Scalar::parse(const std::string& text) {
    auto sq = text.find("sqrt(");
    if (sq == std::string::npos) return Scalar(parse_rat(text));
    auto close = text.find(')', sq);
    if (close == std::string::npos) throw ParseError("unterminated sqrt in '" + text + "'");
    Int d(text.substr(sq + 5, close - sq - 5));
    auto star = text.rfind('*', sq);
    if (star == std::string::npos) throw ParseError("expected '*sqrt(d)' in '" + text + "'");
    // Split the rational part from the sqrt coefficient: scan back to the
    // sign that separates the two terms (skipping a leading sign).
    std::string head = text.substr(0, star);
    size_t split = std::string::npos;
    for (size_t i = head.size(); i-- > 1;) {
        if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' && head[i - 1] != '+' &&
            head[i - 1] != '-') {
            split = i;
            break;
        }
    }
    Rat a(0), b;
    if (split == std::string::npos) {
        b = parse_rat(head);
    } else {
        a = parse_rat(head.substr(0, split));
        std::string btext = head.substr(split);
        b = (btext == "+") ? Rat(1) : (btext == "-") ? Rat(-1) : parse_rat(btext);
    }
    return Scalar(a, b, d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

const Int& FieldContext::radicand() const {
    if (!d_) throw ValidationError("no quadratic extension is open");
    return *d_;
}

Scalar FieldContext::sqrt(const Rat& r) {
    if (r == 0) return Scalar(0);
    if (auto s = rat_sqrt(r)) return Scalar(*s);
    // r = (sn/sd)^2 * d with d the non-square part of num*den.
    Int n = r.get_num() * r.get_den();
    auto [s, d] = split_square(n);
    Rat coeff(s, r.get_den());
    coeff.canonicalize();
    if (!d_) {
        d_ = d;
        return Scalar(0, coeff, d);
    }
    if (*d_ == d) return Scalar(0, coeff, d);
    // The open extension may still contain sqrt(r) if r / d_ is a square.
    Rat ratio = r / Rat(*d_);
    if (auto t = rat_sqrt(ratio)) return Scalar(0, *t, *d_);
    throw IrrationalSupport("sqrt(" + rat_to_string(r) + ") is incompatible with the open extension sqrt(" +
                            d_->get_str() + ")");
}

Scalar FieldContext::sqrt(const Scalar& s) {
    if (!s.is_rational())
        throw IrrationalSupport("square root of a non-rational scalar would need a second extension");
    return sqrt(s.rat());
}

std::pair<Scalar, Scalar> FieldContext::quadratic_roots(const Scalar& p, const Scalar& q) {
    // x^2 + p x + q = 0  =>  x = -p/2 +- sqrt(p^2/4 - q)
    Scalar half_p = p * Scalar(Rat(1, 2));
    Scalar disc = half_p * half_p - q;
    Scalar root = sqrt(disc);
    return {-half_p + root, -half_p - root};
}

}  // namespace odospec
