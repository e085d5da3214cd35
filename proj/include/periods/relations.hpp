#pragma once

// Integer relations among high-precision reals by lattice reduction, and
// the weight-graded dimension count of Q[Z2] (x) Q<Z3, Z5, Z7, ...>.

#include "periods/mzv.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace periods {

using IntVector = std::vector<Integer>;

namespace detail {

inline Integer round_nearest(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer twice = 2 * n + d;
    Integer r = twice / (2 * d);
    if (twice < 0 && r * 2 * d != twice) r -= 1;  // floor for negatives
    return r;
}

inline Rational dot(const IntVector& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
    return s;
}

inline Integer json_safe_max() { return Integer(1) << 62; }

}  // namespace detail

/// LLL reduction (delta = 3/4) of the rows of `basis`, exact arithmetic.
/// Rows must be linearly independent.
inline std::vector<IntVector> lll_reduce(std::vector<IntVector> b, const Rational& delta = Rational(3, 4)) {
    const std::size_t n = b.size();
    if (n < 2) return b;
    const std::size_t dim = b[0].size();
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n)), bs(n);
    std::vector<Rational> B(n);

    auto inner = [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        Rational s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };
    auto as_rational = [&](const IntVector& v) {
        std::vector<Rational> r(dim);
        for (std::size_t i = 0; i < dim; ++i) r[i] = v[i];
        return r;
    };
    auto orthogonalize = [&](std::size_t k) {
        bs[k] = as_rational(b[k]);
        for (std::size_t j = 0; j < k; ++j) {
            mu[k][j] = detail::dot(b[k], bs[j]) / B[j];
            for (std::size_t i = 0; i < dim; ++i) bs[k][i] -= mu[k][j] * bs[j][i];
        }
        B[k] = inner(bs[k], bs[k]);
        if (B[k] == 0) throw InputError("lattice rows are linearly dependent");
    };
    auto reduce = [&](std::size_t k, std::size_t l) {
        if (abs(mu[k][l]) * 2 <= 1) return;
        Integer q = detail::round_nearest(mu[k][l]);
        for (std::size_t i = 0; i < dim; ++i) b[k][i] -= q * b[l][i];
        mu[k][l] -= q;
        for (std::size_t i = 0; i < l; ++i) mu[k][i] -= Rational(q) * mu[l][i];
    };

    orthogonalize(0);
    std::size_t k = 1, kmax = 0;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            orthogonalize(k);
        }
        reduce(k, k - 1);
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            std::swap(b[k], b[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
            Rational m = mu[k][k - 1];
            Rational Bn = B[k] + m * m * B[k - 1];
            mu[k][k - 1] = m * B[k - 1] / Bn;
            auto prev = bs[k - 1];
            for (std::size_t i = 0; i < dim; ++i) bs[k - 1][i] = bs[k][i] + m * prev[i];
            for (std::size_t i = 0; i < dim; ++i)
                bs[k][i] = -mu[k][k - 1] * bs[k][i] + (B[k] / Bn) * prev[i];
            B[k] = B[k - 1] * B[k] / Bn;
            B[k - 1] = Bn;
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                Rational t = mu[i][k];
                mu[i][k] = mu[i][k - 1] - m * t;
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
            }
            if (k > 1) --k;
            continue;
        }
        for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
        ++k;
    }
    return b;
}

/// Values are produced on demand so a candidate relation can be re-checked
/// at doubled precision.  `evaluate(d)` must return values good to d digits.
struct RelationProblem {
    std::vector<std::string> labels;
    std::function<std::vector<Real>(unsigned)> evaluate;
    unsigned digits = 50;
    Integer bound = 1000000;
};

/// Digits demanded by the guard rule 10 * n * log10(B).
inline unsigned required_digits(std::size_t n, const Integer& bound) {
    double lb = std::log10(bound.convert_to<double>());
    return static_cast<unsigned>(std::ceil(10.0 * static_cast<double>(n) * lb - 1e-9));
}

/// Largest bound the guard allows for n values at `digits`.
inline Integer guard_bound(std::size_t n, unsigned digits) {
    double e = static_cast<double>(digits) / (10.0 * static_cast<double>(n));
    if (e >= 18) return Integer(1000000000000000000LL);
    Integer b(static_cast<long long>(std::floor(std::pow(10.0, e) + 1e-9)));
    while (required_digits(n, b) > digits) b -= 1;
    return b;
}

struct Relation {
    std::vector<std::string> labels;
    IntVector coefficients;
    Real residual;           // at the search precision
    Real verified_residual;  // at doubled precision
    unsigned digits = 0;
    int weight = -1;

    Integer height() const {
        Integer h = 0;
        for (const auto& c : coefficients) h = std::max(h, Integer(abs(c)));
        return h;
    }

    nlohmann::json to_json() const {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& c : coefficients) {
            if (abs(c) < detail::json_safe_max())
                coeffs.push_back(c.convert_to<long long>());
            else
                coeffs.push_back(c.str());
        }
        nlohmann::json j{{"labels", labels},
                         {"coefficients", coeffs},
                         {"residual", to_scientific(residual, 6)},
                         {"verified_residual", to_scientific(verified_residual, 6)},
                         {"digits", digits}};
        if (weight >= 0) j["weight"] = weight;
        return j;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            if (coefficients[i] == 0) continue;
            const auto& c = coefficients[i];
            s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            Integer a = abs(c);
            if (a != 1) s += a.str() + "*";
            s += labels[i];
        }
        return s + " = 0";
    }
};

namespace detail {

inline void normalize(IntVector& c) {
    Integer g = 0;
    for (const auto& x : c) g = gcd(g, Integer(abs(x)));
    if (g > 1)
        for (auto& x : c) x /= g;
    for (const auto& x : c) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : c) y = -y;
        break;
    }
}

inline Real residual(const IntVector& c, const std::vector<Real>& v, unsigned digits) {
    WorkingPrecision wp(guarded_digits(digits));
    Real s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += Real(c[i]) * v[i];
    return abs(s);
}

}  // namespace detail

/// Returns the shortest verified relation with max |c_i| <= bound, if any.
inline std::optional<Relation> find_relation(const RelationProblem& p) {
    const std::size_t n = p.labels.size();
    if (n == 0 || !p.evaluate) throw InputError("relation problem needs values");
    if (p.bound < 1) throw InputError("coefficient bound must be at least 1");
    unsigned need = required_digits(n, p.bound);
    if (p.digits < need)
        throw PrecisionError("precision guard: " + std::to_string(n) + " values with bound " + p.bound.str() +
                             " need at least " + std::to_string(need) + " digits (have " +
                             std::to_string(p.digits) + ")");
    auto values = p.evaluate(p.digits);
    if (values.size() != n) throw InputError("evaluator returned the wrong number of values");

    std::vector<IntVector> rows(n, IntVector(n + 1, Integer(0)));
    {
        WorkingPrecision wp(guarded_digits(p.digits));
        Real scale = pow10_real(static_cast<long>(p.digits), guarded_digits(p.digits));
        for (std::size_t i = 0; i < n; ++i) {
            rows[i][i] = 1;
            Real x = values[i] * scale;
            rows[i][n] = Integer(x < 0 ? -floor(-x + Real(0.5)) : floor(x + Real(0.5)));
        }
    }
    auto reduced = lll_reduce(rows);

    Real tol = pow10_real(-static_cast<long>(p.digits / 2), p.digits);
    Real tol2 = pow10_real(-static_cast<long>(p.digits), 2 * p.digits);
    std::vector<Real> doubled;
    std::optional<Relation> best;
    for (const auto& r : reduced) {
        IntVector c(r.begin(), r.begin() + static_cast<long>(n));
        bool nonzero = false, bounded = true;
        for (const auto& x : c) {
            nonzero |= x != 0;
            bounded &= abs(x) <= p.bound;
        }
        if (!nonzero || !bounded) continue;
        detail::normalize(c);
        Real res = detail::residual(c, values, p.digits);
        if (!(res < tol)) continue;
        if (doubled.empty()) doubled = p.evaluate(2 * p.digits);
        Real res2 = detail::residual(c, doubled, 2 * p.digits);
        if (!(res2 < tol2)) continue;
        Relation rel{p.labels, c, res, res2, p.digits};
        if (!best || rel.height() < best->height()) best = std::move(rel);
    }
    return best;
}

/// d_m for m = 0..m_max: coefficient of t^m in 1 / (1 - t^2 - t^3).
inline std::vector<unsigned long long> zagier_dimensions(unsigned m_max) {
    std::vector<unsigned long long> d(m_max + 1, 0);
    for (unsigned m = 0; m <= m_max; ++m) {
        if (m == 0) d[m] = 1;
        else if (m == 1) d[m] = 0;
        else if (m == 2) d[m] = 1;
        else d[m] = d[m - 2] + d[m - 3];
    }
    return d;
}

/// Monomials Z2^a * (word in Z3, Z5, ...) of weight m, written out.
inline std::vector<std::string> zagier_monomials(unsigned m) {
    std::vector<std::string> out;
    std::vector<unsigned> word;
    auto rec = [&](auto&& self, unsigned left) -> void {
        if (left % 2 == 0) {
            std::string s;
            unsigned a = left / 2;
            if (a) s = a == 1 ? "Z2" : "Z2^" + std::to_string(a);
            for (auto l : word) s += (s.empty() ? "" : " ") + ("Z" + std::to_string(l));
            out.push_back(s.empty() ? "1" : s);
        }
        for (unsigned l = 3; l <= left; l += 2) {
            word.push_back(l);
            self(self, left - l);
            word.pop_back();
        }
    };
    rec(rec, m);
    return out;
}

struct SpanExperiment {
    unsigned weight = 0;
    unsigned digits = 0;
    std::vector<std::string> labels;
    std::vector<std::string> basis;
    std::vector<Relation> relations;
    unsigned long long zagier_bound = 0;
    Integer max_bound_used = 0;

    /// Count of values found numerically independent: an upper-bound estimate,
    /// never a proof of independence.
    std::size_t dimension() const { return basis.size(); }

    nlohmann::json to_json() const {
        nlohmann::json rels = nlohmann::json::array();
        for (const auto& r : relations) rels.push_back(r.to_json());
        return {{"weight", weight},
                {"digits", digits},
                {"values", labels.size()},
                {"dimension", dimension()},
                {"dimension_kind", "upper-bound estimate from numerics"},
                {"zagier_bound", zagier_bound},
                {"within_bound", dimension() <= zagier_bound},
                {"basis", basis},
                {"relations", rels},
                {"coefficient_bound", max_bound_used.str()}};
    }
};

/// Greedy rank computation over all admissible MZVs of weight m: each value
/// is tested against the current independent set; a relation involving it
/// is recorded, otherwise it joins the set.
/// `source(index, digits)` may supply values (a cache); the default evaluates them.
inline SpanExperiment mzn_span_experiment(unsigned m, unsigned digits, const Integer& bound = 1000000,
                                          const std::function<Real(const CompositionIndex&, unsigned)>& source = {}) {
    if (m < 2) throw InputError("weight must be at least 2");
    auto indices = enumerate_admissible(m);
    SpanExperiment out;
    out.weight = m;
    out.digits = digits;
    out.zagier_bound = zagier_dimensions(m)[m];

    // one evaluation at doubled precision; lower requests are roundings of it
    std::vector<Real> hi;
    {
        ZetaEvaluator ev(2 * digits);
        for (const auto& idx : indices) {
            hi.push_back(source ? source(idx, 2 * digits) : ev(idx).value);
            out.labels.push_back(idx.str());
        }
    }
    auto attempt = [&](const std::vector<std::size_t>& members) -> std::optional<Relation> {
        Integer b = std::min(bound, guard_bound(members.size(), digits));
        if (b < 2)
            throw PrecisionError("precision guard: " + std::to_string(digits) + " digits leave no usable bound for " +
                                 std::to_string(members.size()) + " values (need " +
                                 std::to_string(required_digits(members.size(), 2)) + ")");
        out.max_bound_used = std::max(out.max_bound_used, b);
        RelationProblem p;
        for (auto j : members) p.labels.push_back(out.labels[j]);
        p.digits = digits;
        p.bound = b;
        p.evaluate = [&hi, members](unsigned d) {
            std::vector<Real> v;
            for (auto j : members) {
                Real x = hi[j];
                x.precision(d);
                v.push_back(x);
            }
            return v;
        };
        auto rel = find_relation(p);
        if (rel && rel->coefficients.back() == 0) rel.reset();
        return rel;
    };

    std::vector<std::size_t> basis, dependent;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto members = basis;
        members.push_back(i);
        auto rel = attempt(members);
        // a dependent value may stand in for a basis element and give smaller coefficients
        for (std::size_t s = 0; !rel && s < basis.size(); ++s)
            for (auto u : dependent) {
                members = basis;
                members[s] = u;
                members.push_back(i);
                if ((rel = attempt(members))) break;
            }
        if (rel) {
            rel->weight = static_cast<int>(m);
            out.relations.push_back(std::move(*rel));
            dependent.push_back(i);
        } else {
            basis.push_back(i);
            out.basis.push_back(out.labels[i]);
        }
    }
    return out;
}

/// Convenience evaluator for MZVs and products of them, "zeta(2)*zeta(3)".
inline std::function<std::vector<Real>(unsigned)> zeta_products(std::vector<std::vector<CompositionIndex>> terms) {
    return [terms = std::move(terms)](unsigned d) {
        ZetaEvaluator ev(d);
        WorkingPrecision wp(guarded_digits(d));
        std::vector<Real> out;
        for (const auto& t : terms) {
            Real x = 1;
            for (const auto& idx : t) x *= ev(idx).value;
            out.push_back(x);
        }
        return out;
    };
}

}  // namespace periods
