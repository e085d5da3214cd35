#pragma once

// Filtrations of Q^n and the monodromy weight filtration of a nilpotent
// endomorphism.  Matrices act on column vectors.

#include "periods/linalg.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace periods {

/// Filtration indexed by the integers, stored on a finite window [lo, hi].
/// Increasing: W_n = 0 below the window and V above it.  Decreasing (only
/// produced by the printed shift convention): V below, 0 above.
class IndexedFiltration {
public:
    IndexedFiltration() = default;
    IndexedFiltration(std::size_t ambient, int lo, std::vector<RationalSubspace> steps, bool increasing = true)
        : n_(ambient), lo_(lo), steps_(std::move(steps)), increasing_(increasing) {
        for (const auto& s : steps_)
            if (s.ambient() != n_) throw InputError("filtration step in wrong ambient space");
    }

    std::size_t ambient() const { return n_; }
    bool increasing() const { return increasing_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(steps_.size()) - 1; }

    RationalSubspace at(int n) const {
        if (n < lo_) return increasing_ ? RationalSubspace(n_) : RationalSubspace::full(n_);
        if (n > hi()) return increasing_ ? RationalSubspace::full(n_) : RationalSubspace(n_);
        return steps_[static_cast<std::size_t>(n - lo_)];
    }
    RationalSubspace operator[](int n) const { return at(n); }

    /// Indices n where dim W_n != dim W_{n-1}.
    std::vector<int> jumps() const {
        std::vector<int> out;
        for (int n = lo_; n <= hi() + 1; ++n)
            if (at(n).dim() != at(n - 1).dim()) out.push_back(n);
        return out;
    }

    /// dim W_n / W_{n-1} (increasing case).
    std::size_t graded_dim(int n) const {
        auto a = at(n).dim(), b = at(n - 1).dim();
        return a > b ? a - b : b - a;
    }

    /// Same subspaces, trimmed to the indices where something changes.
    IndexedFiltration normalized() const {
        auto j = jumps();
        if (j.empty()) return IndexedFiltration(n_, 0, {at(0)}, increasing_);
        int a = increasing_ ? j.front() : j.front() - 1;
        int b = increasing_ ? j.back() : j.back() - 1;
        std::vector<RationalSubspace> st;
        for (int n = a; n <= b; ++n) st.push_back(at(n));
        return IndexedFiltration(n_, a, std::move(st), increasing_);
    }

    /// The image filtration g W_n.
    IndexedFiltration transformed(const Matrix<Rational>& g) const {
        std::vector<RationalSubspace> st;
        for (const auto& s : steps_) st.push_back(s.image(g));
        return IndexedFiltration(n_, lo_, std::move(st), increasing_);
    }

    friend bool operator==(const IndexedFiltration& a, const IndexedFiltration& b) {
        if (a.n_ != b.n_ || a.increasing_ != b.increasing_) return false;
        int lo = std::min(a.lo_, b.lo_) - 1, hi = std::max(a.hi(), b.hi()) + 1;
        for (int n = lo; n <= hi; ++n)
            if (!(a.at(n) == b.at(n))) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json steps = nlohmann::json::array();
        auto t = normalized();
        for (int n = t.lo(); n <= t.hi(); ++n) {
            auto s = t.at(n);
            steps.push_back({{"index", n}, {"dim", s.dim()}, {"basis", periods::to_json(s.basis())}});
        }
        return {{"ambient", n_}, {"direction", increasing_ ? "increasing" : "decreasing"}, {"steps", steps}};
    }

private:
    std::size_t n_ = 0;
    int lo_ = 0;
    std::vector<RationalSubspace> steps_;
    bool increasing_ = true;
};

/// Smallest m with N^m = 0; throws InputError naming the power that failed.
inline unsigned nilpotency_index(const Matrix<Rational>& N) {
    if (!N.square()) throw InputError("nilpotent operator must be square");
    const std::size_t n = N.rows();
    Matrix<Rational> p = Matrix<Rational>::identity(n);
    for (unsigned m = 0; m <= n; ++m) {
        if (p.is_zero()) return m;
        p = p * N;
    }
    throw InputError("matrix is not nilpotent: N^" + std::to_string(n) + " != 0");
}

namespace detail {

inline RationalSubspace kernel_of(const Matrix<Rational>& m) {
    return RationalSubspace::span_rows(nullspace(m));
}

// Fills W_{-l..l} for the operator induced on U/L, given N^{l+1} U in L.
inline void deligne_step(const Matrix<Rational>& N, const RationalSubspace& U, const RationalSubspace& L, int l,
                         std::map<int, RationalSubspace>& out) {
    out.insert_or_assign(l, U);
    out.insert_or_assign(-l - 1, L);
    if (l <= 0) return;
    auto Nl = power(N, static_cast<unsigned>(l));
    RationalSubspace K = intersect(U, RationalSubspace::preimage(Nl, L));
    RationalSubspace I = U.image(Nl) + L;
    deligne_step(N, K, I, l - 1, out);
}

inline IndexedFiltration from_map(std::size_t n, const std::map<int, RationalSubspace>& m) {
    int lo = m.begin()->first, hi = m.rbegin()->first;
    std::vector<RationalSubspace> st;
    for (int k = lo; k <= hi; ++k) {
        auto it = m.upper_bound(k);
        st.push_back(std::prev(it)->second);
    }
    return IndexedFiltration(n, lo, std::move(st)).normalized();
}

}  // namespace detail

/// W(N), built inductively: W_l = V, W_{l-1} = ker N^l, W_{-l} = im N^l,
/// W_{-l-1} = 0 with N^{l+1} = 0, then the same on ker N^l / im N^l.
inline IndexedFiltration weight_filtration(const Matrix<Rational>& N) {
    unsigned m = nilpotency_index(N);
    const std::size_t n = N.rows();
    if (n == 0) return IndexedFiltration(0, 0, {RationalSubspace(0)});
    int l = static_cast<int>(m) - 1;
    std::map<int, RationalSubspace> out;
    detail::deligne_step(N, RationalSubspace::full(n), RationalSubspace(n), std::max(l, 0), out);
    return detail::from_map(n, out);
}

/// W_k = sum_j im N^j cap ker N^{k+j+1}.
inline IndexedFiltration weight_filtration_closed_form(const Matrix<Rational>& N) {
    unsigned m = nilpotency_index(N);
    const std::size_t n = N.rows();
    int l = std::max(static_cast<int>(m) - 1, 0);
    std::vector<RationalSubspace> st;
    for (int k = -l - 1; k <= l; ++k) {
        RationalSubspace acc(n);
        for (int j = std::max(0, -k); j <= l; ++j) {
            auto im = RationalSubspace::full(n).image(power(N, static_cast<unsigned>(j)));
            auto ker = detail::kernel_of(power(N, static_cast<unsigned>(k + j + 1)));
            acc = acc + intersect(im, ker);
        }
        st.push_back(acc);
    }
    return IndexedFiltration(n, -l - 1, std::move(st)).normalized();
}

struct JordanChain {
    std::vector<Rational> top;  // x with N^{length} x = 0, N^{length-1} x != 0
    unsigned length = 0;
};

/// Jordan chains of a nilpotent N; the vectors N^i x over all chains form a basis.
inline std::vector<JordanChain> jordan_chains(const Matrix<Rational>& N) {
    unsigned m = nilpotency_index(N);
    const std::size_t n = N.rows();
    std::vector<RationalSubspace> ker(m + 1, RationalSubspace(n));
    for (unsigned k = 1; k <= m; ++k) ker[k] = detail::kernel_of(power(N, k));
    std::vector<JordanChain> chains;
    for (unsigned level = m; level >= 1; --level) {
        RationalSubspace acc = ker[level - 1];
        for (const auto& c : chains)
            acc = acc + RationalSubspace::span(n, std::vector<std::vector<Rational>>{periods::apply(power(N, c.length - level), c.top)});
        for (const auto& v : ker[level].vectors()) {
            if (acc.contains(v)) continue;
            chains.push_back({v, level});
            acc = acc + RationalSubspace::span(n, std::vector<std::vector<Rational>>{v});
        }
    }
    return chains;
}

/// W(N) assembled from a Jordan basis: N^i x in a chain of length s has weight s - 1 - 2i.
inline IndexedFiltration weight_filtration_jordan(const Matrix<Rational>& N) {
    auto chains = jordan_chains(N);
    const std::size_t n = N.rows();
    std::map<int, std::vector<std::vector<Rational>>> by_weight;
    int l = 0;
    for (const auto& c : chains) {
        auto v = c.top;
        for (unsigned i = 0; i < c.length; ++i) {
            int w = static_cast<int>(c.length) - 1 - 2 * static_cast<int>(i);
            by_weight[w].push_back(v);
            l = std::max(l, std::abs(w));
            v = periods::apply(N, v);
        }
    }
    std::vector<RationalSubspace> st;
    std::vector<std::vector<Rational>> acc;
    for (int k = -l - 1; k <= l; ++k) {
        if (auto it = by_weight.find(k); it != by_weight.end()) acc.insert(acc.end(), it->second.begin(), it->second.end());
        st.push_back(RationalSubspace::span(n, acc));
    }
    return IndexedFiltration(n, -l - 1, std::move(st)).normalized();
}

enum class ShiftConvention {
    standard,  // W'_n = W_{n-k}
    printed,   // W'_n = W_{k-n}, a decreasing filtration
};

inline IndexedFiltration shift_filtration(const IndexedFiltration& W, int k,
                                          ShiftConvention conv = ShiftConvention::standard) {
    std::vector<RationalSubspace> st;
    if (conv == ShiftConvention::standard) {
        for (int n = W.lo(); n <= W.hi(); ++n) st.push_back(W.at(n));
        return IndexedFiltration(W.ambient(), W.lo() + k, std::move(st), W.increasing());
    }
    // n runs over k - hi .. k - lo
    for (int n = k - W.hi(); n <= k - W.lo(); ++n) st.push_back(W.at(k - n));
    return IndexedFiltration(W.ambient(), k - W.hi(), std::move(st), !W.increasing());
}

struct PropertyCheck {
    std::string property;  // "increasing", "N W_n in W_{n-2}", "N^j : Gr_{k+j} -> Gr_{k-j}"
    int index = 0;
    bool pass = true;
    std::optional<std::vector<Rational>> witness;
    std::string detail;
};

struct WeightReport {
    bool ok = true;
    std::vector<PropertyCheck> checks;

    std::vector<PropertyCheck> failures() const {
        std::vector<PropertyCheck> f;
        for (const auto& c : checks)
            if (!c.pass) f.push_back(c);
        return f;
    }
};

/// Checks the defining properties of W(N) shifted to center k.
inline WeightReport verify_weight_properties(const Matrix<Rational>& N, const IndexedFiltration& W, int k = 0) {
    WeightReport rep;
    auto add = [&](PropertyCheck c) {
        rep.ok = rep.ok && c.pass;
        rep.checks.push_back(std::move(c));
    };
    if (!N.square() || N.rows() != W.ambient()) throw InputError("operator and filtration dimensions differ");
    if (!W.increasing()) {
        add({"increasing", W.lo(), false, std::nullopt, "filtration is decreasing"});
        return rep;
    }
    const int lo = W.lo() - 2, hi = W.hi() + 2;
    for (int n = lo + 1; n <= hi; ++n) {
        PropertyCheck c{"increasing", n, true, std::nullopt, ""};
        for (const auto& v : W.at(n - 1).vectors())
            if (!W.at(n).contains(v)) {
                c.pass = false;
                c.witness = v;
                c.detail = "vector of W_" + std::to_string(n - 1) + " missing from W_" + std::to_string(n);
                break;
            }
        add(std::move(c));
    }
    for (int n = lo; n <= hi; ++n) {
        PropertyCheck c{"N W_n in W_{n-2}", n, true, std::nullopt, ""};
        auto target = W.at(n - 2);
        for (const auto& v : W.at(n).vectors())
            if (!target.contains(periods::apply(N, v))) {
                c.pass = false;
                c.witness = v;
                c.detail = "N maps this vector of W_" + std::to_string(n) + " outside W_" + std::to_string(n - 2);
                break;
            }
        add(std::move(c));
    }
    const int reach = std::max(std::abs(W.lo() - k), std::abs(W.hi() - k)) + 1;
    for (int j = 1; j <= reach; ++j) {
        PropertyCheck c{"N^j : Gr_{k+j} -> Gr_{k-j}", j, true, std::nullopt, ""};
        auto Nj = power(N, static_cast<unsigned>(j));
        auto top = W.at(k + j), below_top = W.at(k + j - 1);
        auto bottom = W.at(k - j), below_bottom = W.at(k - j - 1);
        // injective: { w in W_{k+j} : N^j w in W_{k-j-1} } = W_{k+j-1}
        auto kernel = intersect(top, RationalSubspace::preimage(Nj, below_bottom));
        for (const auto& v : kernel.vectors())
            if (!below_top.contains(v)) {
                c.pass = false;
                c.witness = v;
                c.detail = "nonzero class in Gr_" + std::to_string(k + j) + " killed by N^" + std::to_string(j);
                break;
            }
        if (c.pass) {
            auto image = top.image(Nj) + below_bottom;
            for (const auto& v : bottom.vectors())
                if (!image.contains(v)) {
                    c.pass = false;
                    c.witness = v;
                    c.detail = "class in Gr_" + std::to_string(k - j) + " not hit by N^" + std::to_string(j);
                    break;
                }
        }
        add(std::move(c));
    }
    return rep;
}

/// W_0 = im N, W_1 = ker N, W_2 = V for N^2 = 0; cross-checked against the
/// general construction shifted by 1.
inline IndexedFiltration picard_lefschetz_filtration(const Matrix<Rational>& N) {
    if (!N.square()) throw InputError("operator must be square");
    if (!(N * N).is_zero()) throw InputError("Picard-Lefschetz filtration needs N^2 = 0");
    const std::size_t n = N.rows();
    IndexedFiltration W(n, 0,
                        {RationalSubspace::full(n).image(N), detail::kernel_of(N), RationalSubspace::full(n)});
    if (!(W == shift_filtration(weight_filtration(N), 1)))
        throw std::logic_error("Picard-Lefschetz filtration disagrees with the shifted weight filtration");
    return W;
}

}  // namespace periods
