#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "lqt/gcd.hpp"
#include "lqt/polynomial.hpp"

namespace lqt
{

// Element of Q(x_1..x_n) kept in lowest terms with a monic denominator
// (leading coefficient 1 under grlex). Zero is 0/1.
class RationalFunction
{
public:
    explicit RationalFunction(Symbols vars = Symbols{}) : num_(vars), den_(Polynomial::constant(vars, 1)) {}

    RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(num_.variables(), 1)) {}

    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den))
    {
        canonicalize(true);
    }

    static RationalFunction constant(Symbols vars, const Rational &c)
    {
        return RationalFunction(Polynomial::constant(std::move(vars), c));
    }

    // Trusts the caller that gcd(num, den) is a constant; only the
    // denominator is rescaled to be monic.
    static RationalFunction from_coprime(Polynomial num, Polynomial den)
    {
        RationalFunction f;
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        f.canonicalize(false);
        return f;
    }

    const Polynomial &numerator() const noexcept
    {
        return num_;
    }

    const Polynomial &denominator() const noexcept
    {
        return den_;
    }

    const Symbols &variables() const noexcept
    {
        return num_.variables();
    }

    bool is_zero() const noexcept
    {
        return num_.is_zero();
    }

    bool is_polynomial() const
    {
        return den_.is_constant();
    }

    RationalFunction operator-() const
    {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.den_ == b.den_) {
            return RationalFunction(a.num_ + b.num_, a.den_);
        }
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b)
    {
        return a + (-b);
    }

    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return RationalFunction(a.variables());
        }
        // Cross-cancel so the products are already nearly reduced.
        const Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        Polynomial n = detail::exact_quotient(a.num_, g1) * detail::exact_quotient(b.num_, g2);
        Polynomial d = detail::exact_quotient(a.den_, g2) * detail::exact_quotient(b.den_, g1);
        return from_coprime(std::move(n), std::move(d));
    }

    RationalFunction inverse() const
    {
        if (is_zero()) {
            throw std::domain_error("division by zero");
        }
        return from_coprime(den_, num_);
    }

    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b)
    {
        return a * b.inverse();
    }

    RationalFunction &operator+=(const RationalFunction &b)
    {
        return *this = *this + b;
    }

    RationalFunction &operator-=(const RationalFunction &b)
    {
        return *this = *this - b;
    }

    RationalFunction &operator*=(const RationalFunction &b)
    {
        return *this = *this * b;
    }

    RationalFunction pow(std::int64_t n) const
    {
        if (n < 0) {
            return inverse().pow(-n);
        }
        return from_coprime(num_.pow(static_cast<std::uint64_t>(n)), den_.pow(static_cast<std::uint64_t>(n)));
    }

    friend bool operator==(const RationalFunction &a, const RationalFunction &b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    RationalFunction substitute(std::span<const Polynomial> images, const Symbols &target) const
    {
        Polynomial n = num_.substitute(images, target);
        Polynomial d = den_.substitute(images, target);
        if (d.is_zero()) {
            throw std::domain_error("denominator vanishes under substitution");
        }
        return RationalFunction(std::move(n), std::move(d));
    }

    std::string to_string() const
    {
        if (den_.is_one()) {
            return num_.to_string();
        }
        std::string n = num_.to_string();
        if (num_.size() > 1) {
            n = "(" + n + ")";
        }
        std::string d = den_.to_string();
        bool bare = false;
        if (den_.size() == 1) {
            std::size_t nvars = 0;
            for (auto e : den_.leading_term().exponents) {
                nvars += e > 0 ? 1 : 0;
            }
            bare = nvars == 1;
        }
        if (!bare) {
            d = "(" + d + ")";
        }
        return n + "/" + d;
    }

private:
    void canonicalize(bool reduce)
    {
        if (den_.is_zero()) {
            throw std::domain_error("division by zero");
        }
        if (!(num_.variables() == den_.variables())) {
            throw std::invalid_argument("numerator and denominator live in different rings");
        }
        if (num_.is_zero()) {
            den_ = Polynomial::constant(num_.variables(), 1);
            return;
        }
        if (reduce && !den_.is_constant()) {
            const Polynomial g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = detail::exact_quotient(num_, g);
                den_ = detail::exact_quotient(den_, g);
            }
        }
        const Rational lc = den_.leading_coefficient();
        if (lc != 1) {
            const Rational s = Rational(1) / lc;
            num_ *= s;
            den_ *= s;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

// (lowest total degree of the numerator) - (lowest total degree of the
// denominator): the order at the origin of the ambient local ring.
inline std::int64_t ord_at_origin(const RationalFunction &f)
{
    if (f.is_zero()) {
        throw std::domain_error("order of zero");
    }
    return static_cast<std::int64_t>(f.numerator().min_total_degree())
        - static_cast<std::int64_t>(f.denominator().min_total_degree());
}

} // namespace lqt
