#pragma once

// Truncated noncommutative power series in X0, X1.
//
// A monomial X_{i1}...X_{ir} is a Word over {0,1}; it has Hodge type
// (-r,-r) and weight -2r.  Series are truncated at a weight cutoff N: words
// longer than N are dropped.  Two scalar kinds are supported, exact Rational
// and arbitrary-precision Complex.

#include "periods/scalar.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace periods {

/// Word over the alphabet {0,1}; letter 0 stands for X0 (or dz/z), letter 1
/// for X1 (or dz/(1-z)).  The first letter is the most significant bit.
class Word {
public:
    static constexpr unsigned max_length = 62;

    Word() = default;
    Word(unsigned length, std::uint64_t bits) : len_(length), bits_(bits) {
        if (length > max_length) throw InputError("word too long");
        if (length < 64 && (bits >> length) != 0) throw InputError("word bits exceed length");
    }

    static Word parse(std::string_view s) {
        std::uint64_t b = 0;
        for (char c : s) {
            if (c != '0' && c != '1') throw InputError("word letters must be 0 or 1: " + std::string(s));
            b = (b << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return Word(static_cast<unsigned>(s.size()), b);
    }

    static Word letter(int l) { return Word(1, l ? 1u : 0u); }
    static Word repeat(int l, unsigned n) {
        return Word(n, l ? ((n == 64 ? ~0ull : (1ull << n) - 1)) : 0);
    }

    unsigned size() const { return len_; }
    bool empty() const { return len_ == 0; }
    std::uint64_t bits() const { return bits_; }

    /// i-th letter, counted from the left.
    int operator[](unsigned i) const { return static_cast<int>((bits_ >> (len_ - 1 - i)) & 1u); }
    int front() const { return (*this)[0]; }
    int back() const { return static_cast<int>(bits_ & 1u); }

    Word prefix(unsigned k) const { return Word(k, bits_ >> (len_ - k)); }
    Word suffix(unsigned k) const { return Word(k, k == 0 ? 0 : bits_ & ((1ull << k) - 1)); }

    friend Word operator+(const Word& a, const Word& b) {
        return Word(a.len_ + b.len_, (a.bits_ << b.len_) | b.bits_);
    }

    Word reversed() const {
        std::uint64_t r = 0;
        for (unsigned i = 0; i < len_; ++i) r |= static_cast<std::uint64_t>((*this)[i]) << i;
        return Word(len_, r);
    }

    Word flipped() const { return Word(len_, len_ == 0 ? 0 : bits_ ^ ((1ull << len_) - 1)); }

    unsigned count(int l) const {
        unsigned ones = static_cast<unsigned>(std::popcount(bits_));
        return l ? ones : len_ - ones;
    }

    /// Dense index: all words ordered by (length, bits).
    std::size_t dense_index() const { return ((std::size_t{1} << len_) - 1) + bits_; }
    static Word from_dense_index(std::size_t idx) {
        unsigned len = 0;
        while (idx >= (std::size_t{1} << (len + 1)) - 1) ++len;
        return Word(len, idx - ((std::size_t{1} << len) - 1));
    }
    static std::size_t dense_size(unsigned cutoff) { return (std::size_t{1} << (cutoff + 1)) - 1; }

    std::string str() const {
        std::string s(len_, '0');
        for (unsigned i = 0; i < len_; ++i) s[i] = static_cast<char>('0' + (*this)[i]);
        return s;
    }

    friend auto operator<=>(const Word& a, const Word& b) {
        if (auto c = a.len_ <=> b.len_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }
    friend bool operator==(const Word&, const Word&) = default;

private:
    unsigned len_ = 0;
    std::uint64_t bits_ = 0;
};

/// All words of length <= cutoff in (length, bits) order.
inline std::vector<Word> all_words(unsigned cutoff) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < Word::dense_size(cutoff); ++i) out.push_back(Word::from_dense_index(i));
    return out;
}

template <class S>
struct series_scalar;

template <>
struct series_scalar<Rational> {
    static constexpr const char* kind = "rational";
    static Rational from_rational(const Rational& q, unsigned) { return q; }
    static bool is_zero(const Rational& x) { return x == 0; }
    static void settle(Rational&, unsigned) {}
};

template <>
struct series_scalar<Complex> {
    static constexpr const char* kind = "complex";
    static Complex from_rational(const Rational& q, unsigned digits) {
        return Complex::from_rational(q, 0, digits);
    }
    static bool is_zero(const Complex& x) { return x.is_zero(); }
    static void settle(Complex& x, unsigned digits) { x.round_to(digits); }
};

/// Selector for grading_slice.
struct WeightAtMost {
    int m;
};
struct HodgeAtLeast {
    int p;
};

template <class S>
class TruncatedSeries {
public:
    using scalar_type = S;
    using traits = series_scalar<S>;

    TruncatedSeries() = default;
    explicit TruncatedSeries(unsigned cutoff, unsigned digits = 0)
        : cutoff_(cutoff), digits_(digits) {
        if (cutoff > Word::max_length) throw InputError("cutoff too large");
        if constexpr (std::is_same_v<S, Complex>)
            if (digits_ == 0) digits_ = Real::default_precision();
    }

    static TruncatedSeries one(unsigned cutoff, unsigned digits = 0) {
        TruncatedSeries s(cutoff, digits);
        s.set(Word(), traits::from_rational(1, digits));
        return s;
    }

    /// The generator X_l.
    static TruncatedSeries generator(int l, unsigned cutoff, unsigned digits = 0) {
        TruncatedSeries s(cutoff, digits);
        s.set(Word::letter(l), traits::from_rational(1, digits));
        return s;
    }

    unsigned cutoff() const { return cutoff_; }
    unsigned digits() const { return digits_; }
    const char* scalar_kind() const { return traits::kind; }
    const std::map<Word, S>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    S coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? traits::from_rational(0, digits_) : it->second;
    }
    S constant_term() const { return coefficient(Word()); }

    /// Stores c at w; dropped if w is beyond the cutoff or c is zero.
    void set(const Word& w, S c) {
        if (w.size() > cutoff_) return;
        if (traits::is_zero(c)) {
            terms_.erase(w);
            return;
        }
        if constexpr (std::is_same_v<S, Complex>) traits::settle(c, digits_);
        terms_.insert_or_assign(w, std::move(c));
    }

    void add_to(const Word& w, const S& c) {
        if (w.size() > cutoff_) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            set(w, c);
            return;
        }
        it->second += c;
        if (traits::is_zero(it->second)) terms_.erase(it);
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        check(o);
        for (const auto& [w, c] : o.terms_) add_to(w, c);
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        check(o);
        for (const auto& [w, c] : o.terms_) add_to(w, -c);
        return *this;
    }
    TruncatedSeries& operator*=(const S& s) {
        if (traits::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const S& s) { return a *= s; }
    friend TruncatedSeries operator*(const S& s, TruncatedSeries a) { return a *= s; }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& [w, c] : r.terms_) c = -c;
        return r;
    }

    /// Concatenation product, truncated at the common cutoff.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check(b);
        TruncatedSeries r(a.cutoff_, std::min(a.digits_, b.digits_));
        if constexpr (std::is_same_v<S, Complex>) {
            if (r.digits_ == 0) r.digits_ = std::max(a.digits_, b.digits_);
        }
        for (const auto& [u, cu] : a.terms_)
            for (const auto& [v, cv] : b.terms_) {
                if (u.size() + v.size() > a.cutoff_) continue;
                r.add_to(u + v, cu * cv);
            }
        return r;
    }

    /// Restriction to monomials selected by a weight or Hodge bound.
    TruncatedSeries slice(WeightAtMost sel) const {
        TruncatedSeries r(cutoff_, digits_);
        for (const auto& [w, c] : terms_)
            if (-2 * static_cast<int>(w.size()) <= sel.m) r.terms_.emplace(w, c);
        return r;
    }
    TruncatedSeries slice(HodgeAtLeast sel) const {
        TruncatedSeries r(cutoff_, digits_);
        for (const auto& [w, c] : terms_)
            if (-static_cast<int>(w.size()) >= sel.p) r.terms_.emplace(w, c);
        return r;
    }
    /// Homogeneous part of the given word length.
    TruncatedSeries homogeneous(unsigned length) const {
        TruncatedSeries r(cutoff_, digits_);
        for (const auto& [w, c] : terms_)
            if (w.size() == length) r.terms_.emplace(w, c);
        return r;
    }

    /// Same coefficients, new cutoff (terms beyond it are dropped).
    TruncatedSeries truncated(unsigned cutoff) const {
        TruncatedSeries r(cutoff, digits_);
        for (const auto& [w, c] : terms_)
            if (w.size() <= cutoff) r.terms_.emplace(w, c);
        return r;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
    }

private:
    void check(const TruncatedSeries& o) const {
        if (cutoff_ != o.cutoff_)
            throw InputError("series cutoffs differ: " + std::to_string(cutoff_) + " vs " +
                             std::to_string(o.cutoff_));
    }

    unsigned cutoff_ = 0;
    unsigned digits_ = 0;
    std::map<Word, S> terms_;
};

using RationalSeries = TruncatedSeries<Rational>;
using ComplexSeries = TruncatedSeries<Complex>;

namespace detail {
template <class S>
S reciprocal(unsigned n, unsigned digits) {
    return series_scalar<S>::from_rational(Rational(1, n), digits);
}
}  // namespace detail

template <class S>
TruncatedSeries<S> grading_slice(const TruncatedSeries<S>& a, WeightAtMost sel) {
    return a.slice(sel);
}
template <class S>
TruncatedSeries<S> grading_slice(const TruncatedSeries<S>& a, HodgeAtLeast sel) {
    return a.slice(sel);
}

template <class S>
TruncatedSeries<S> exp(const TruncatedSeries<S>& u) {
    if (!series_scalar<S>::is_zero(u.constant_term()))
        throw InputError("exp requires a series with zero constant term");
    WorkingPrecision wp(u.digits() ? u.digits() : 20);
    auto result = TruncatedSeries<S>::one(u.cutoff(), u.digits());
    auto term = result;
    for (unsigned n = 1; n <= u.cutoff(); ++n) {
        term = term * u;
        term *= detail::reciprocal<S>(n, u.digits());
        if (term.size() == 0) break;
        result += term;
    }
    return result;
}

template <class S>
TruncatedSeries<S> log(const TruncatedSeries<S>& g) {
    auto one = TruncatedSeries<S>::one(g.cutoff(), g.digits());
    auto x = g - one;
    if (!series_scalar<S>::is_zero(x.constant_term()))
        throw InputError("log requires a series with constant term 1");
    WorkingPrecision wp(g.digits() ? g.digits() : 20);
    TruncatedSeries<S> result(g.cutoff(), g.digits());
    auto power = x;
    for (unsigned n = 1; n <= g.cutoff() && power.size(); ++n) {
        auto term = power * detail::reciprocal<S>(n, g.digits());
        if (n % 2 == 0) term = -term;
        result += term;
        power = power * x;
    }
    return result;
}

/// Multiplicative inverse of a series with constant term 1.
template <class S>
TruncatedSeries<S> inverse(const TruncatedSeries<S>& g) {
    auto one = TruncatedSeries<S>::one(g.cutoff(), g.digits());
    auto x = g - one;
    if (!series_scalar<S>::is_zero(x.constant_term()))
        throw InputError("inverse requires a series with constant term 1");
    auto result = one;
    auto power = one;
    for (unsigned n = 1; n <= g.cutoff(); ++n) {
        power = -(power * x);
        if (power.size() == 0) break;
        result += power;
    }
    return result;
}

/// t^X = exp(X log t), using log t = Log t + 2 pi i branch.
inline ComplexSeries scalar_power(const Complex& t, const ComplexSeries& x, long branch = 0) {
    if (t.is_zero()) throw InputError("scalar_power: t must be nonzero");
    WorkingPrecision wp(x.digits());
    Complex lt = log(t);
    if (branch != 0) {
        Real two_pi = 2 * boost::math::constants::pi<Real>();
        lt += Complex(Real(0), two_pi * branch);
    }
    return exp(x * lt);
}

/// Precision conversion of an exact series into the complex kind.
inline ComplexSeries to_complex(const RationalSeries& s, unsigned digits) {
    ComplexSeries r(s.cutoff(), digits);
    for (const auto& [w, c] : s.terms()) r.set(w, Complex::from_rational(c, 0, digits));
    return r;
}

/// Largest coefficient modulus of a - b.
inline Real max_abs_difference(const ComplexSeries& a, const ComplexSeries& b) {
    WorkingPrecision wp(std::max(a.digits(), b.digits()));
    Real best = 0;
    auto d = a - b;
    for (const auto& [w, c] : d.terms()) best = std::max(best, Real(c.abs()));
    return best;
}

// --- JSON ---------------------------------------------------------------

template <class S>
nlohmann::json to_json(const TruncatedSeries<S>& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [w, c] : s.terms()) {
        nlohmann::json t{{"word", w.str()}};
        if constexpr (std::is_same_v<S, Rational>) {
            t["re"] = to_string(c);
            t["im"] = "0";
        } else {
            t["re"] = to_scientific(c.real(), s.digits());
            t["im"] = to_scientific(c.imag(), s.digits());
        }
        terms.push_back(std::move(t));
    }
    nlohmann::json j{{"cutoff", s.cutoff()}, {"scalar", series_scalar<S>::kind}, {"terms", terms}};
    if constexpr (std::is_same_v<S, Complex>) j["digits"] = s.digits();
    return j;
}

template <class S>
TruncatedSeries<S> series_from_json(const nlohmann::json& j) {
    if (!j.contains("cutoff") || !j.contains("terms")) throw InputError("series JSON needs cutoff and terms");
    std::string kind = j.value("scalar", std::string(series_scalar<S>::kind));
    if (kind != series_scalar<S>::kind)
        throw InputError("series scalar kind '" + kind + "' does not match '" + series_scalar<S>::kind + "'");
    unsigned cutoff = j.at("cutoff").get<unsigned>();
    unsigned digits = j.value("digits", 0u);
    TruncatedSeries<S> s(cutoff, digits);
    for (const auto& t : j.at("terms")) {
        Word w = Word::parse(t.at("word").get<std::string>());
        if (w.size() > cutoff) throw InputError("term '" + w.str() + "' exceeds the cutoff");
        std::string re = t.at("re").get<std::string>();
        std::string im = t.value("im", std::string("0"));
        if constexpr (std::is_same_v<S, Rational>) {
            if (parse_rational(im) != 0) throw InputError("rational series term has imaginary part");
            s.set(w, parse_rational(re));
        } else {
            s.set(w, Complex(parse_real(re, digits), parse_real(im, digits)));
        }
    }
    return s;
}

}  // namespace periods
