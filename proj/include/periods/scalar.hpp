#pragma once

// Scalar types shared by every module: exact rationals, Gaussian rationals,
// and arbitrary-precision reals/complexes backed by MPFR.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <ios>
#include <stdexcept>
#include <string>
#include <string_view>

namespace periods {

using Real = boost::multiprecision::mpfr_float;
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Sets the MPFR default precision (decimal digits) for the current thread
/// and restores the previous value on scope exit.
class WorkingPrecision {
public:
    explicit WorkingPrecision(unsigned digits) : saved_(Real::default_precision()) {
        Real::default_precision(std::max(digits, 10u));
    }
    ~WorkingPrecision() { Real::default_precision(saved_); }
    WorkingPrecision(const WorkingPrecision&) = delete;
    WorkingPrecision& operator=(const WorkingPrecision&) = delete;

private:
    unsigned saved_;
};

/// Guard-digit policy used by all high-precision evaluations.
inline unsigned guarded_digits(unsigned digits) { return digits + digits / 5 + 10; }

inline Real make_real(long v, unsigned digits) {
    Real r(0, digits);
    r = v;
    return r;
}

inline Real real_pi(unsigned digits) {
    WorkingPrecision wp(digits);
    return boost::math::constants::pi<Real>();
}

inline Real pow10_real(long e, unsigned digits) {
    WorkingPrecision wp(digits);
    return boost::multiprecision::pow(Real(10), Real(e));
}

/// Parses "p", "p/q" or a decimal literal into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw InputError("empty rational literal");
    auto dot = s.find('.');
    auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
        try {
            return Rational(s);
        } catch (const std::exception&) {
            throw InputError("bad rational literal: " + s);
        }
    }
    // decimal literal: mantissa * 10^exponent, exactly
    std::string mant = s.substr(0, exp);
    long e10 = 0;
    if (exp != std::string::npos) e10 = std::stol(s.substr(exp + 1));
    bool neg = !mant.empty() && mant[0] == '-';
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant.erase(0, 1);
    auto d = mant.find('.');
    if (d != std::string::npos) {
        e10 -= static_cast<long>(mant.size() - d - 1);
        mant.erase(d, 1);
    }
    if (mant.empty() || !std::all_of(mant.begin(), mant.end(), ::isdigit))
        throw InputError("bad decimal literal: " + s);
    Integer num(mant);
    Integer ten = 10;
    Integer scale = boost::multiprecision::pow(ten, static_cast<unsigned>(std::labs(e10)));
    Rational r = e10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Real parse_real(std::string_view text, unsigned digits) {
    WorkingPrecision wp(digits);
    std::string s(text);
    if (s.find('/') != std::string::npos) {
        Rational q = parse_rational(s);
        return Real(numerator(q)) / Real(denominator(q));
    }
    try {
        return Real(s);
    } catch (const std::exception&) {
        throw InputError("bad real literal: " + s);
    }
}

/// Scientific notation with `digits` significant digits; used for serialization.
inline std::string to_scientific(const Real& x, unsigned digits) {
    return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

/// Fixed-point rendering with `sig` significant digits, for human-facing output.
inline std::string to_decimal(const Real& x, unsigned sig) {
    if (x == 0) return "0";
    using boost::multiprecision::abs;
    using boost::multiprecision::floor;
    using boost::multiprecision::log10;
    long mag = static_cast<long>(floor(log10(abs(x))));
    long frac = static_cast<long>(sig) - 1 - mag;
    if (frac < 0 || frac > 4 * static_cast<long>(sig)) return to_scientific(x, sig - 1);
    return x.str(static_cast<std::streamsize>(frac), std::ios_base::fixed);
}

/// Arbitrary-precision complex number.  Working precision is carried by the
/// real and imaginary parts; binary operations round to the smaller of the
/// operand precisions.
class Complex {
public:
    Complex() : re_(0), im_(0) {}
    Complex(Real re) : re_(std::move(re)), im_(0, re_.precision()) {}  // NOLINT
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(long re) : re_(re), im_(0) {}  // NOLINT
    Complex(int re) : re_(re), im_(0) {}   // NOLINT
    Complex(const Rational& q) : re_(q), im_(0) {}  // NOLINT

    static Complex from_rational(const Rational& re, const Rational& im, unsigned digits) {
        WorkingPrecision wp(digits);
        return {Real(numerator(re)) / Real(denominator(re)),
                Real(numerator(im)) / Real(denominator(im))};
    }

    const Real& real() const { return re_; }
    const Real& imag() const { return im_; }

    unsigned digits() const { return std::min(re_.precision(), im_.precision()); }

    /// Rounds both parts to `digits` decimal digits.
    Complex& round_to(unsigned digits) {
        if (re_.precision() != digits) re_.precision(digits);
        if (im_.precision() != digits) im_.precision(digits);
        return *this;
    }

    bool is_zero() const { return re_ == 0 && im_ == 0; }

    Complex conj() const { return {re_, -im_}; }
    Real norm() const { return re_ * re_ + im_ * im_; }
    Real abs() const {
        using boost::multiprecision::hypot;
        return hypot(re_, im_);
    }
    Real arg() const {
        using boost::multiprecision::atan2;
        return atan2(im_, re_);
    }

    Complex operator-() const { return {-re_, -im_}; }

    Complex& operator+=(const Complex& o) {
        re_ += o.re_;
        im_ += o.im_;
        return settle(o);
    }
    Complex& operator-=(const Complex& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return settle(o);
    }
    Complex& operator*=(const Complex& o) {
        Real r = re_ * o.re_ - im_ * o.im_;
        Real i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return settle(o);
    }
    Complex& operator/=(const Complex& o) {
        Real d = o.norm();
        if (d == 0) throw std::domain_error("complex division by zero");
        Real r = (re_ * o.re_ + im_ * o.im_) / d;
        Real i = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        im_ = std::move(i);
        return settle(o);
    }
    Complex& operator*=(const Real& s) {
        re_ *= s;
        im_ *= s;
        return *this;
    }
    Complex& operator/=(const Real& s) {
        re_ /= s;
        im_ /= s;
        return *this;
    }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator*(Complex a, const Real& s) { return a *= s; }
    friend Complex operator*(const Real& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const Real& s) { return a /= s; }
    friend bool operator==(const Complex& a, const Complex& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

private:
    Complex& settle(const Complex& o) {
        unsigned d = std::min(digits(), o.digits());
        return round_to(d);
    }

    Real re_;
    Real im_;
};

inline Complex i_times(const Complex& z) { return {-z.imag(), z.real()}; }

inline Complex exp(const Complex& z) {
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    Real m = boost::multiprecision::exp(z.real());
    return {m * cos(z.imag()), m * sin(z.imag())};
}

/// Principal branch, arg in (-pi, pi].
inline Complex log(const Complex& z) {
    if (z.is_zero()) throw InputError("log of zero");
    return {boost::multiprecision::log(z.abs()), z.arg()};
}

/// e^{2 pi i turns}
inline Complex unit_root(const Real& turns) {
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    Real theta = 2 * boost::math::constants::pi<Real>() * turns;
    return {cos(theta), sin(theta)};
}

/// Gaussian rational a + b i with exact arithmetic.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
    GaussianRational(long r) : re(r) {}  // NOLINT
    GaussianRational(int r) : re(r) {}   // NOLINT

    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational d = o.norm();
        if (d == 0) throw std::domain_error("gaussian rational division by zero");
        Rational r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

inline std::complex<double> to_cdouble(const GaussianRational& z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

inline std::complex<double> to_cdouble(const Complex& z) {
    return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

}  // namespace periods
