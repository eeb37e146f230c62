#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "subcount/errors.hpp"

namespace subcount {

// Exact signed counter used for all homomorphism/subgraph counts.
//
// Counts are combined with +, - and * only, and every operation is
// overflow-checked: on overflow a CountOverflowError is thrown instead of
// wrapping, so results are exact or absent, never silently wrong. 128 bits
// cover n^|V(H)| for every scale this structure can hold in memory (the
// pattern-size guard keeps |V(H)| <= 8).
class Count {
public:
    constexpr Count() : v_(0) {}
    constexpr Count(long long x) : v_(x) {}
    constexpr Count(unsigned long long x) : v_(static_cast<__int128>(x)) {}
    constexpr Count(int x) : v_(x) {}

    friend Count operator+(Count a, Count b) {
        Count r;
        if (__builtin_add_overflow(a.v_, b.v_, &r.v_))
            throw CountOverflowError("count addition overflowed");
        return r;
    }
    friend Count operator-(Count a, Count b) {
        Count r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r.v_))
            throw CountOverflowError("count subtraction overflowed");
        return r;
    }
    friend Count operator*(Count a, Count b) {
        Count r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r.v_))
            throw CountOverflowError("count multiplication overflowed");
        return r;
    }
    Count& operator+=(Count b) { *this = *this + b; return *this; }
    Count& operator-=(Count b) { *this = *this - b; return *this; }
    Count& operator*=(Count b) { *this = *this * b; return *this; }
    Count operator-() const { return Count(0) - *this; }

    friend bool operator==(Count a, Count b) { return a.v_ == b.v_; }
    friend bool operator!=(Count a, Count b) { return a.v_ != b.v_; }
    friend bool operator<(Count a, Count b) { return a.v_ < b.v_; }
    friend bool operator<=(Count a, Count b) { return a.v_ <= b.v_; }
    friend bool operator>(Count a, Count b) { return a.v_ > b.v_; }
    friend bool operator>=(Count a, Count b) { return a.v_ >= b.v_; }

    bool is_zero() const { return v_ == 0; }

    // Decimal rendering; __int128 has no iostream support of its own.
    std::string str() const {
        if (v_ == 0) return "0";
        unsigned __int128 mag;
        bool neg = v_ < 0;
        if (neg) {
            mag = static_cast<unsigned __int128>(-(v_ + 1));
            mag += 1;
        } else {
            mag = static_cast<unsigned __int128>(v_);
        }
        char buf[48];
        int i = 48;
        while (mag > 0) {
            buf[--i] = static_cast<char>('0' + static_cast<int>(mag % 10));
            mag /= 10;
        }
        std::string out;
        if (neg) out.push_back('-');
        out.append(buf + i, buf + 48);
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, Count c) { return os << c.str(); }

    // Power by repeated multiplication (small exponents only: |V(H)| <= 8).
    static Count pow(Count base, int exp) {
        Count r(1);
        for (int i = 0; i < exp; ++i) r *= base;
        return r;
    }

    long long as_int64_saturating() const {
        constexpr __int128 lo = -__int128(0x7fffffffffffffffLL) - 1;
        constexpr __int128 hi = __int128(0x7fffffffffffffffLL);
        if (v_ < lo) return -0x7fffffffffffffffLL - 1;
        if (v_ > hi) return 0x7fffffffffffffffLL;
        return static_cast<long long>(v_);
    }

private:
    __int128 v_;
};

} // namespace subcount
