#include "supersplit/rational.hpp"

#include <numeric>

namespace supersplit {

namespace {

using i128 = __int128;

constexpr long long kMax = INT64_MAX;

long long narrow(i128 v, const char* ctx) {
    if (v > i128(kMax) || v < -i128(kMax)) {
        throw OverflowError(std::string("rational overflow in ") + ctx);
    }
    return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(long long num, long long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    i128 n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "construction");
    den_ = narrow(d, "construction");
    if (num_ == 0) den_ = 1;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-i128(num_), "negation");
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
    i128 d = i128(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "addition");
    den_ = narrow(d, "addition");
    if (num_ == 0) den_ = 1;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    i128 n = i128(num_) * o.num_;
    i128 d = i128(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "multiplication");
    den_ = narrow(d, "multiplication");
    if (num_ == 0) den_ = 1;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw DomainError("rational division by zero");
    return *this *= o.inverse();
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

Rational Rational::inverse() const {
    if (num_ == 0) throw DomainError("inverse of zero rational");
    Rational r;
    if (num_ > 0) {
        r.num_ = den_;
        r.den_ = num_;
    } else {
        r.num_ = narrow(-i128(den_), "inverse");
        r.den_ = narrow(-i128(num_), "inverse");
    }
    return r;
}

Rational Rational::pow(int e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inverse();
    int k = e > 0 ? e : -e;
    Rational acc(1);
    while (k > 0) {
        if (k & 1) acc *= base;
        base = (k >>= 1) ? base * base : base;
    }
    return acc;
}

std::string Rational::str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
}

} // namespace supersplit
