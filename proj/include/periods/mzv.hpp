#pragma once

// Multiple zeta values.
//
// Index convention: zeta(n1,...,nr) = sum over 0 < k1 < ... < kr of
// 1/(k1^n1 ... kr^nr), so the largest summation variable carries nr and the
// index is admissible iff nr > 1.  The matching iterated-integral word is
// 1 0^{n1-1} 1 0^{n2-1} ... 1 0^{nr-1}, read left to right along [0,1].

#include "periods/freealg.hpp"

#include <boost/math/special_functions/factorials.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace periods {

class CompositionIndex {
public:
    CompositionIndex() = default;
    explicit CompositionIndex(std::vector<unsigned> parts) : parts_(std::move(parts)) {
        for (auto p : parts_)
            if (p == 0) throw InputError("composition parts must be positive");
    }
    CompositionIndex(std::initializer_list<unsigned> parts)
        : CompositionIndex(std::vector<unsigned>(parts)) {}

    /// Accepts "1,2", "(1,2)" or "zeta(1,2)".
    static CompositionIndex parse(std::string_view text) {
        std::string s(text);
        if (s.rfind("zeta", 0) == 0) s.erase(0, 4);
        std::vector<unsigned> parts;
        std::string cur;
        auto flush = [&] {
            if (cur.empty()) return;
            try {
                long v = std::stol(cur);
                if (v <= 0) throw InputError("composition parts must be positive: " + std::string(text));
                parts.push_back(static_cast<unsigned>(v));
            } catch (const std::logic_error&) {
                throw InputError("bad composition index: " + std::string(text));
            }
            cur.clear();
        };
        for (char c : s) {
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
                cur.push_back(c);
            } else if (c == ',' || c == ' ' || c == '(' || c == ')') {
                flush();
            } else {
                throw InputError("bad composition index: " + std::string(text));
            }
        }
        flush();
        return CompositionIndex(std::move(parts));
    }

    const std::vector<unsigned>& parts() const { return parts_; }
    unsigned depth() const { return static_cast<unsigned>(parts_.size()); }
    unsigned weight() const {
        unsigned w = 0;
        for (auto p : parts_) w += p;
        return w;
    }
    bool empty() const { return parts_.empty(); }
    bool admissible() const { return !parts_.empty() && parts_.back() > 1; }

    std::string str() const {
        std::ostringstream os;
        os << "zeta(";
        for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
        os << ')';
        return os.str();
    }

    friend auto operator<=>(const CompositionIndex&, const CompositionIndex&) = default;
    friend bool operator==(const CompositionIndex&, const CompositionIndex&) = default;

private:
    std::vector<unsigned> parts_;
};

using WordSum = std::map<Word, long long>;
using IndexSum = std::map<CompositionIndex, long long>;

inline Word word_of_index(const CompositionIndex& idx) {
    Word w;
    for (auto n : idx.parts()) w = w + Word::letter(1) + Word::repeat(0, n - 1);
    return w;
}

inline CompositionIndex index_of_word(const Word& w) {
    if (w.empty()) return {};
    if (w.front() != 1) throw InputError("word '" + w.str() + "' starts with 0 and has no index form");
    std::vector<unsigned> parts;
    for (unsigned i = 0; i < w.size(); ++i) {
        if (w[i] == 1)
            parts.push_back(1);
        else
            ++parts.back();
    }
    return CompositionIndex(std::move(parts));
}

/// Starts with 1 and ends with 0: the iterated integral over [0,1] converges.
inline bool convergent_word(const Word& w) { return !w.empty() && w.front() == 1 && w.back() == 0; }

/// Reverse, then exchange the letters (z -> 1-z on [0,1]).
inline Word dual(const Word& w) { return w.reversed().flipped(); }

namespace detail {
inline void shuffle_into(const Word& u, const Word& v, const Word& head, WordSum& out) {
    if (u.empty() || v.empty()) {
        out[head + u + v] += 1;
        return;
    }
    shuffle_into(u.suffix(u.size() - 1), v, head + u.prefix(1), out);
    shuffle_into(u, v.suffix(v.size() - 1), head + v.prefix(1), out);
}

inline CompositionIndex tail(const CompositionIndex& a) {
    return CompositionIndex(std::vector<unsigned>(a.parts().begin() + 1, a.parts().end()));
}
inline CompositionIndex prepend(unsigned n, const CompositionIndex& a) {
    std::vector<unsigned> p{n};
    p.insert(p.end(), a.parts().begin(), a.parts().end());
    return CompositionIndex(std::move(p));
}
}  // namespace detail

/// All interleavings of u and v preserving internal order, with multiplicity.
inline WordSum shuffle(const Word& u, const Word& v) {
    WordSum out;
    detail::shuffle_into(u, v, Word(), out);
    return out;
}

/// Quasi-shuffle (harmonic) product of indices.
inline IndexSum stuffle(const CompositionIndex& a, const CompositionIndex& b) {
    if (a.empty()) return {{b, 1}};
    if (b.empty()) return {{a, 1}};
    IndexSum out;
    unsigned a1 = a.parts().front(), b1 = b.parts().front();
    for (const auto& [c, m] : stuffle(detail::tail(a), b)) out[detail::prepend(a1, c)] += m;
    for (const auto& [c, m] : stuffle(a, detail::tail(b))) out[detail::prepend(b1, c)] += m;
    for (const auto& [c, m] : stuffle(detail::tail(a), detail::tail(b)))
        out[detail::prepend(a1 + b1, c)] += m;
    return out;
}

/// All admissible indices of weight m, ordered by depth then lexicographically.
inline std::vector<CompositionIndex> enumerate_admissible(unsigned m) {
    std::vector<CompositionIndex> out;
    if (m < 2) return out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned remaining) -> void {
        if (remaining == 0) {
            if (cur.back() > 1) out.emplace_back(cur);
            return;
        }
        for (unsigned p = 1; p <= remaining; ++p) {
            cur.push_back(p);
            self(self, remaining - p);
            cur.pop_back();
        }
    };
    rec(rec, m);
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.depth() != y.depth()) return x.depth() < y.depth();
        return x.parts() < y.parts();
    });
    return out;
}

/// Shuffle-regularized expansion of w: a rational combination of convergent
/// words (and the empty word) obtained by setting the values of "0" and "1"
/// to zero and extending multiplicatively for the shuffle product.
inline std::map<Word, Rational> regularized_expansion(const Word& w) {
    static thread_local std::map<Word, std::map<Word, Rational>> memo;
    if (auto it = memo.find(w); it != memo.end()) return it->second;
    std::map<Word, Rational> out;
    auto eliminate = [&](const WordSum& sh) {
        Rational m = sh.at(w);
        for (const auto& [v, k] : sh) {
            if (v == w) continue;
            for (const auto& [u, c] : regularized_expansion(v)) out[u] -= Rational(k) * c / m;
        }
    };
    if (w.empty() || convergent_word(w)) {
        out[w] = 1;
    } else if (w.front() == 0) {
        eliminate(shuffle(Word::letter(0), w.suffix(w.size() - 1)));
    } else {
        eliminate(shuffle(w.prefix(w.size() - 1), Word::letter(1)));
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    memo.emplace(w, out);
    return out;
}

struct PartialSum {
    Real value;
    Real tail_bound;  // +inf when no bound could be certified
    unsigned long terms = 0;
};

namespace detail {

/// Upper bound for sum_{k>K} x^k (1+ln k)^a / (a! k^n), a = depth - 1.
inline Real tail_bound(unsigned a, unsigned n, const Real& x, unsigned long K) {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    Real inf = std::numeric_limits<Real>::infinity();
    Real fact = boost::math::factorial<double>(a);
    if (x < 1) {
        Real k1 = Real(K + 1);
        Real q = x * pow(1 + 1 / k1, Real(a));
        if (q >= 1) return inf;
        Real head = pow(x, k1) * pow(1 + log(k1), Real(a)) / pow(k1, Real(n));
        return head / ((1 - q) * fact);
    }
    if (n < 2) return inf;
    Real LK = 1 + log(Real(K));
    if (LK * n < a) return inf;  // the majorant is not yet decreasing
    unsigned s = n - 1;
    Real sum = 0;
    Real falling = 1;
    for (unsigned j = 0; j <= a; ++j) {
        sum += falling * pow(LK, Real(a - j)) / pow(Real(s), Real(j + 1));
        falling *= (a - j);
    }
    return sum * pow(Real(K), -Real(s)) / fact;
}

}  // namespace detail

/// Truncated series for the iterated integral of word(idx) over [0, x]:
/// the sum of x^{kr}/(k1^n1 ... kr^nr) over kr <= K, with a tail bound.
inline PartialSum partial_sum(const CompositionIndex& idx, const Real& x, unsigned long K, unsigned digits) {
    if (idx.empty()) {
        WorkingPrecision wp(digits);
        return {Real(1), Real(0), 0};
    }
    if (x <= 0 || x > 1) throw InputError("partial_sum: x must lie in (0,1]");
    if (x == 1 && !idx.admissible())
        throw DivergenceError(idx.str() + " diverges at x = 1 (last part must exceed 1)");
    WorkingPrecision wp(digits);
    const auto& n = idx.parts();
    const unsigned r = idx.depth();
    std::vector<Real> s(r + 1, Real(0));
    s[0] = 1;
    Real xk = 1;
    Real xx(x);
    for (unsigned long k = 1; k <= K; ++k) {
        Real inv = 1 / Real(k);
        xk *= xx;
        for (unsigned j = r; j >= 1; --j) {
            if (s[j - 1] == 0) continue;
            Real t = s[j - 1] * boost::multiprecision::pow(inv, n[j - 1]);
            if (j == r) t *= xk;
            s[j] += t;
        }
    }
    return {s[r], detail::tail_bound(r - 1, n.back(), xx, K), K};
}

struct ZetaValue {
    Real value;        // rounded to `digits`
    Real error_bound;  // truncation and recombination error
    unsigned digits = 0;
};

/// Evaluates MZVs at a fixed precision by splitting [0,1] at 1/2:
/// T([0,1]) = T([0,1/2]) T([1/2,1]) and int_{1/2}^{1} v = int_0^{1/2} dual(v),
/// so every coefficient is a finite sum of products of series in 2^{-k}.
class ZetaEvaluator {
public:
    explicit ZetaEvaluator(unsigned digits) : digits_(digits), work_(guarded_digits(digits)) {
        WorkingPrecision wp(work_);
        half_ = Real(1) / 2;
        target_ = pow10_real(-static_cast<long>(work_), work_);
    }

    unsigned digits() const { return digits_; }

    /// Iterated integral of w over [0, 1/2]; w must be empty or start with 1.
    const PartialSum& half_integral(const Word& w) {
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;
        auto idx = index_of_word(w);
        // sum_{k>K} 2^{-k} k^a  is below 10^{-work} once K ~ work*log2(10) + a*log2(K)
        unsigned long K = static_cast<unsigned long>(work_ * 3.33 + 8 * idx.depth() + 16);
        PartialSum ps;
        for (;;) {
            ps = partial_sum(idx, half_, K, work_);
            if (ps.tail_bound < target_) break;
            K *= 2;
        }
        return memo_.emplace(w, std::move(ps)).first->second;
    }

    ZetaValue word(const Word& w) {
        if (!convergent_word(w))
            throw DivergenceError("word '" + w.str() + "' does not converge on [0,1]");
        WorkingPrecision wp(work_);
        Real total = 0, err = 0;
        for (unsigned j = 0; j <= w.size(); ++j) {
            const auto& a = half_integral(w.prefix(j));
            const auto& b = half_integral(dual(w.suffix(w.size() - j)));
            total += a.value * b.value;
            err += a.tail_bound * abs(b.value) + b.tail_bound * abs(a.value) + a.tail_bound * b.tail_bound;
        }
        // rounding noise across the recombination
        err += Real(w.size() + 1) * pow10_real(-static_cast<long>(work_) + 2, work_);
        ZetaValue out{total, err, digits_};
        out.value.precision(digits_);
        return out;
    }

    /// Shuffle-regularized value; equals word(w) when w is convergent.
    ZetaValue regularized(const Word& w) {
        WorkingPrecision wp(work_);
        Real total = 0, err = 0;
        for (const auto& [u, c] : regularized_expansion(w)) {
            Real q = Real(numerator(c)) / Real(denominator(c));
            if (u.empty()) {
                total += q;
                continue;
            }
            auto z = word(u);
            total += q * z.value;
            err += abs(q) * z.error_bound;
        }
        ZetaValue out{total, err, digits_};
        out.value.precision(digits_);
        return out;
    }

    ZetaValue operator()(const CompositionIndex& idx) {
        if (!idx.admissible())
            throw DivergenceError(idx.str() + " diverges (last part must exceed 1)");
        return word(word_of_index(idx));
    }

private:
    unsigned digits_;
    unsigned work_;
    Real half_;
    Real target_;
    std::map<Word, PartialSum> memo_;
};

inline ZetaValue zeta(const CompositionIndex& idx, unsigned digits) {
    ZetaEvaluator ev(digits);
    return ev(idx);
}

inline ZetaValue zeta_of_word(const Word& w, unsigned digits) {
    ZetaEvaluator ev(digits);
    return ev.word(w);
}

}  // namespace periods
