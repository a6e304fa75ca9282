#ifndef CHEMCHAOS_RATIONAL_HPP
#define CHEMCHAOS_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace chemchaos {

/// Arbitrary-precision signed integer, sign-magnitude with base-10^9 limbs.
/// Small and dependency-free; sized for polynomial coefficient work, not
/// cryptography. Limbs are little-endian, the value zero has no limbs.
class BigInt {
  public:
    BigInt() = default;
    BigInt(std::int64_t v);

    static BigInt from_string(const std::string& s);
    std::string to_string() const;

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    int sign() const { return is_zero() ? 0 : (negative_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    /// Truncating division (quotient rounds toward zero, as in C).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt gcd(BigInt a, BigInt b);
    static BigInt pow10(int n);

    double to_double() const;
    /// Fits in int64? If so *out receives the value.
    bool to_int64(std::int64_t* out) const;

  private:
    static constexpr std::uint32_t kBase = 1000000000u;
    bool negative_ = false;
    std::vector<std::uint32_t> limbs_;

    void trim();
    static int cmp_mag(const BigInt& a, const BigInt& b);
    static BigInt add_mag(const BigInt& a, const BigInt& b);
    static BigInt sub_mag(const BigInt& a, const BigInt& b);  // |a| >= |b|
};

/// Exact rational number. Always normalized: gcd(num, den) = 1, den > 0,
/// zero is 0/1. All arithmetic is exact.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}
    Rational(std::int64_t num, std::int64_t den);
    Rational(BigInt num, BigInt den);

    /// Parses "p/q", integer, or decimal strings ("5700.000002", "-1e-3").
    /// Decimal strings convert exactly.
    static Rational from_string(const std::string& s);

    /// "p/q" for non-integers, plain integer otherwise.
    std::string to_string() const;

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const;
    int sign() const { return num_.sign(); }
    Rational abs() const;
    Rational inverse() const;
    Rational pow(int e) const;

    double to_double() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  private:
    BigInt num_;
    BigInt den_;
    void normalize();
};

inline Rational rat(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

}  // namespace chemchaos

#endif
