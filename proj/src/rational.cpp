#include "chemchaos/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace chemchaos {

BigInt::BigInt(std::int64_t v) {
    negative_ = v < 0;
    std::uint64_t mag = negative_ ? (~static_cast<std::uint64_t>(v) + 1u) : static_cast<std::uint64_t>(v);
    while (mag != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(mag % kBase));
        mag /= kBase;
    }
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) negative_ = false;
}

int BigInt::cmp_mag(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigInt BigInt::add_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.reserve(n + 1);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry;
        if (i < a.limbs_.size()) s += a.limbs_[i];
        if (i < b.limbs_.size()) s += b.limbs_[i];
        r.limbs_.push_back(static_cast<std::uint32_t>(s % kBase));
        carry = s / kBase;
    }
    if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
    return r;
}

BigInt BigInt::sub_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    r.limbs_.reserve(a.limbs_.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
        if (d < 0) {
            d += kBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_.push_back(static_cast<std::uint32_t>(d));
    }
    r.trim();
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.negative_ == b.negative_) {
        r = BigInt::add_mag(a, b);
        r.negative_ = a.negative_;
    } else {
        int c = BigInt::cmp_mag(a, b);
        if (c == 0) return BigInt();
        if (c > 0) {
            r = BigInt::sub_mag(a, b);
            r.negative_ = a.negative_;
        } else {
            r = BigInt::sub_mag(b, a);
            r.negative_ = b.negative_;
        }
    }
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.is_zero()) r.negative_ = !r.negative_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    r.negative_ = false;
    return r;
}

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        unsigned __int128 carry = 0;
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            unsigned __int128 cur = static_cast<unsigned __int128>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<std::uint32_t>(cur % BigInt::kBase);
            carry = cur / BigInt::kBase;
        }
        std::size_t k = i + b.limbs_.size();
        while (carry) {
            unsigned __int128 cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<std::uint32_t>(cur % BigInt::kBase);
            carry = cur / BigInt::kBase;
            ++k;
        }
    }
    r.negative_ = a.negative_ != b.negative_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    std::int64_t av = 0, bv = 0;
    if (a.to_int64(&av) && b.to_int64(&bv) && !(av == INT64_MIN && bv == -1)) {
        q = BigInt(av / bv);
        r = BigInt(av % bv);
        return;
    }
    // Long division limb by limb, remainder carried as a BigInt scaled by the base.
    BigInt rem;
    q.limbs_.assign(a.limbs_.size(), 0);
    q.negative_ = false;
    BigInt babs = b.abs();
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        // rem = rem * kBase + limb
        rem.limbs_.insert(rem.limbs_.begin(), a.limbs_[i]);
        rem.trim();
        // binary search the quotient digit in [0, kBase)
        std::uint32_t lo = 0, hi = kBase - 1, digit = 0;
        while (lo <= hi) {
            std::uint32_t mid = lo + (hi - lo) / 2;
            if (cmp_mag(babs * BigInt(static_cast<std::int64_t>(mid)), rem) <= 0) {
                digit = mid;
                lo = mid + 1;
            } else {
                if (mid == 0) break;
                hi = mid - 1;
            }
        }
        q.limbs_[i] = digit;
        rem = sub_mag(rem, babs * BigInt(static_cast<std::int64_t>(digit)));
    }
    q.trim();
    rem.trim();
    q.negative_ = !q.is_zero() && (a.negative_ != b.negative_);
    rem.negative_ = !rem.is_zero() && a.negative_;
    r = rem;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.negative_ != b.negative_) return a.negative_;
    int c = BigInt::cmp_mag(a, b);
    return a.negative_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.negative_ = false;
    b.negative_ = false;
    std::int64_t av = 0, bv = 0;
    while (!b.is_zero()) {
        if (a.to_int64(&av) && b.to_int64(&bv)) {
            while (bv != 0) {
                std::int64_t t = av % bv;
                av = bv;
                bv = t;
            }
            a = BigInt(av);
            b = BigInt();
            break;
        }
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return BigInt(1);
    return a;
}

BigInt BigInt::pow10(int n) {
    BigInt r(1);
    BigInt ten(10);
    for (int i = 0; i < n; ++i) r = r * ten;
    return r;
}

BigInt BigInt::from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("BigInt: empty string");
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    if (pos == s.size()) throw std::invalid_argument("BigInt: no digits in '" + s + "'");
    BigInt r;
    for (; pos < s.size(); ++pos) {
        if (s[pos] < '0' || s[pos] > '9') throw std::invalid_argument("BigInt: bad digit in '" + s + "'");
        r = r * BigInt(10) + BigInt(s[pos] - '0');
    }
    if (neg && !r.is_zero()) r.negative_ = true;
    return r;
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::string out = negative_ ? "-" : "";
    out += std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
        std::string part = std::to_string(limbs_[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

double BigInt::to_double() const {
    double r = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        r = r * static_cast<double>(kBase) + static_cast<double>(limbs_[i]);
        if (std::isinf(r)) break;
    }
    return negative_ ? -r : r;
}

bool BigInt::to_int64(std::int64_t* out) const {
    if (limbs_.size() > 3) return false;
    unsigned __int128 v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    const unsigned __int128 lim = static_cast<unsigned __int128>(INT64_MAX) + (negative_ ? 1 : 0);
    if (v > lim) return false;
    *out = negative_ ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
    return true;
}

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void Rational::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.is_negative()) {
        den_ = -den_;
        num_ = -num_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!(g == BigInt(1))) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

bool Rational::is_integer() const { return den_ == BigInt(1); }

Rational Rational::abs() const { return Rational(num_.abs(), den_); }

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return Rational(den_, num_);
}

Rational Rational::pow(int e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inverse();
    int n = e > 0 ? e : -e;
    Rational r(1);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

Rational Rational::from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
    }
    // decimal form: [sign] digits [. digits] [e|E [sign] digits]
    std::size_t epos = s.find_first_of("eE");
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    int exp10 = 0;
    if (epos != std::string::npos) {
        const std::string es = s.substr(epos + 1);
        if (es.empty()) throw std::invalid_argument("Rational: bad exponent in '" + s + "'");
        exp10 = std::atoi(es.c_str());
        if (std::to_string(exp10) != (es[0] == '+' ? es.substr(1) : es))
            throw std::invalid_argument("Rational: bad exponent in '" + s + "'");
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    int frac = 0;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        frac = static_cast<int>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits == "+" || digits == "-")
        throw std::invalid_argument("Rational: no digits in '" + s + "'");
    BigInt num = BigInt::from_string(digits);
    int net = exp10 - frac;
    if (net >= 0) return Rational(num * BigInt::pow10(net), BigInt(1));
    return Rational(num, BigInt::pow10(-net));
}

std::string Rational::to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const {
    double n = num_.to_double();
    double d = den_.to_double();
    if (std::isfinite(n) && std::isfinite(d)) return n / d;
    // Either side overflowed a double; divide leading digits and re-apply
    // the stripped powers of ten.
    const std::string ns = num_.abs().to_string(), ds = den_.to_string();
    const std::size_t keep = 18;
    const std::size_t kn = std::min(ns.size(), keep), kd = std::min(ds.size(), keep);
    const double nm = std::stod(ns.substr(0, kn));
    const double dm = std::stod(ds.substr(0, kd));
    const long e10 = static_cast<long>(ns.size() - kn) - static_cast<long>(ds.size() - kd);
    const double r = (nm / dm) * std::pow(10.0, static_cast<double>(e10));
    return num_.is_negative() ? -r : r;
}

}  // namespace chemchaos
