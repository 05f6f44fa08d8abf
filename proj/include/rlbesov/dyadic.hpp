#pragma once
// Exact dyadic rationals num/2^k. Breakpoints of every piecewise polynomial in
// this library live on this grid, so interval splits, dilations by powers of
// two and half-integer shifts never introduce rounding.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rlbesov {

class Dyadic {
public:
    constexpr Dyadic() : num_(0), log2den_(0) {}
    constexpr Dyadic(std::int64_t n) : num_(n), log2den_(0) {}
    Dyadic(std::int64_t num, int log2den) : num_(num), log2den_(log2den) {
        if (log2den < 0 || log2den > 62) throw std::invalid_argument("dyadic: log2den out of range");
        normalize();
    }

    std::int64_t num() const { return num_; }
    int log2den() const { return log2den_; }

    double to_double() const { return std::ldexp(static_cast<double>(num_), -log2den_); }

    bool is_integer() const { return log2den_ == 0; }
    std::int64_t floor() const {
        if (log2den_ == 0) return num_;
        std::int64_t q = num_ >> log2den_;  // arithmetic shift floors for negatives
        return q;
    }

    Dyadic operator-() const { return Dyadic(-num_, log2den_, nocheck{}); }

    friend Dyadic operator+(Dyadic a, Dyadic b) {
        int k = std::max(a.log2den_, b.log2den_);
        return Dyadic(shifted(a, k) + shifted(b, k), k);
    }
    friend Dyadic operator-(Dyadic a, Dyadic b) { return a + (-b); }
    friend Dyadic operator*(Dyadic a, Dyadic b) {
        return Dyadic(mul_checked(a.num_, b.num_), a.log2den_ + b.log2den_);
    }

    // Multiply by 2^e (e of either sign).
    Dyadic mul_pow2(int e) const {
        if (e >= 0) {
            int drop = std::min(e, log2den_);
            return Dyadic(shl_checked(num_, e - drop), log2den_ - drop, nocheck{});
        }
        return Dyadic(num_, log2den_ - e);
    }

    friend bool operator==(Dyadic a, Dyadic b) { return a.num_ == b.num_ && a.log2den_ == b.log2den_; }
    friend bool operator!=(Dyadic a, Dyadic b) { return !(a == b); }
    friend bool operator<(Dyadic a, Dyadic b) {
        int k = std::max(a.log2den_, b.log2den_);
        return shifted(a, k) < shifted(b, k);
    }
    friend bool operator<=(Dyadic a, Dyadic b) { return !(b < a); }
    friend bool operator>(Dyadic a, Dyadic b) { return b < a; }
    friend bool operator>=(Dyadic a, Dyadic b) { return !(a < b); }

    // Accepts "7", "-3/8" (power-of-two denominator) and terminating binary
    // decimals like "1.5"; anything else (e.g. "0.1") is rejected.
    static Dyadic parse(const std::string& s);

    std::string str() const {
        if (log2den_ == 0) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(std::int64_t(1) << log2den_);
    }

private:
    struct nocheck {};
    Dyadic(std::int64_t num, int log2den, nocheck) : num_(num), log2den_(log2den) {}

    void normalize() {
        while (log2den_ > 0 && (num_ & 1) == 0) { num_ >>= 1; --log2den_; }
    }
    static std::int64_t shifted(Dyadic a, int k) { return shl_checked(a.num_, k - a.log2den_); }
    static std::int64_t shl_checked(std::int64_t v, int e) {
        if (e == 0 || v == 0) return v << e;
        if (e >= 63) throw std::overflow_error("dyadic: shift overflow");
        std::int64_t r = v << e;
        if (r >> e != v) throw std::overflow_error("dyadic: shift overflow");
        return r;
    }
    static std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("dyadic: multiply overflow");
        return r;
    }

    std::int64_t num_;
    int log2den_;
};

inline Dyadic Dyadic::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("dyadic: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        if (d <= 0 || (d & (d - 1)) != 0) throw std::invalid_argument("dyadic: denominator must be a power of two: " + s);
        int k = 0;
        while ((std::int64_t(1) << k) != d) ++k;
        return Dyadic(n, k);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Dyadic(std::stoll(s));
    bool neg = s[0] == '-';
    std::int64_t ip = std::stoll(s.substr(0, dot) == "-" || dot == 0 ? "0" : s.substr(0, dot));
    std::string frac = s.substr(dot + 1);
    if (frac.empty()) return Dyadic(ip);
    std::int64_t fn = std::stoll(frac);
    std::int64_t fd = 1;
    for (size_t i = 0; i < frac.size(); ++i) fd *= 10;
    std::int64_t g = std::gcd(fn, fd);
    fn /= g; fd /= g;
    if ((fd & (fd - 1)) != 0) throw std::invalid_argument("dyadic: not a dyadic rational: " + s);
    int k = 0;
    while ((std::int64_t(1) << k) != fd) ++k;
    Dyadic f(fn, k);
    return neg ? Dyadic(ip) - f : Dyadic(ip) + f;
}

}  // namespace rlbesov
