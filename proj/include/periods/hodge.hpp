#pragma once

// Hodge structures, polarizations, mixed Hodge structures and nilpotent
// orbits, as validators that report every axiom with a witness on failure.
//
// Data are templated on the field: GaussianRational gives exact checks,
// std::complex<double> uses a relative tolerance of 1e-8.  Vectors are
// columns in lattice coordinates unless a lattice matrix says otherwise.

#include "periods/freealg.hpp"
#include "periods/linfilt.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace periods {

using cdouble = std::complex<double>;

// --- reports -----------------------------------------------------------------

struct AxiomCheck {
    std::string axiom;
    bool pass = true;
    std::string witness;  // empty when passing
    std::string detail;

    nlohmann::json to_json() const {
        nlohmann::json j{{"axiom", axiom}, {"pass", pass}};
        if (!witness.empty()) j["witness"] = witness;
        if (!detail.empty()) j["detail"] = detail;
        return j;
    }
};

struct HodgeReport {
    bool ok = true;
    std::vector<AxiomCheck> checks;

    void add(AxiomCheck c) {
        ok = ok && c.pass;
        checks.push_back(std::move(c));
    }
    void pass(const std::string& axiom, std::string detail = {}) { add({axiom, true, {}, std::move(detail)}); }
    void fail(const std::string& axiom, std::string witness, std::string detail = {}) {
        add({axiom, false, std::move(witness), std::move(detail)});
    }
    void merge(const HodgeReport& o, const std::string& prefix = {}) {
        for (auto c : o.checks) {
            c.axiom = prefix + c.axiom;
            add(std::move(c));
        }
    }
    std::vector<AxiomCheck> failures() const {
        std::vector<AxiomCheck> out;
        for (const auto& c : checks)
            if (!c.pass) out.push_back(c);
        return out;
    }
    bool failed(const std::string& axiom) const {
        for (const auto& c : checks)
            if (!c.pass && c.axiom.find(axiom) != std::string::npos) return true;
        return false;
    }
    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) arr.push_back(c.to_json());
        return {{"ok", ok}, {"checks", arr}};
    }
};

// --- field helpers -----------------------------------------------------------

namespace detail {

template <class T>
constexpr bool exact_field = field_traits<T>::exact;

template <class T>
T i_power(int n) {
    int r = ((n % 4) + 4) % 4;
    if constexpr (std::is_same_v<T, GaussianRational>) {
        static const GaussianRational table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[r];
    } else {
        static const cdouble table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[r];
    }
}

template <class T>
T from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, GaussianRational>)
        return GaussianRational(q);
    else
        return cdouble(q.convert_to<double>(), 0.0);
}

template <class T>
Matrix<T> lift(const Matrix<Rational>& m) {
    return m.template map<T>([](const Rational& q) { return from_rational<T>(q); });
}

template <class T>
Subspace<T> lift(const RationalSubspace& s) {
    if (s.dim() == 0) return Subspace<T>(s.ambient());
    return Subspace<T>::span_rows(lift<T>(s.basis()));
}

inline Matrix<cdouble> to_double(const Matrix<GaussianRational>& m) { return to_cdouble(m); }
inline Matrix<cdouble> to_double(const Matrix<cdouble>& m) { return m; }

template <class T>
double real_part(const T& x) {
    if constexpr (std::is_same_v<T, GaussianRational>)
        return x.re.template convert_to<double>();
    else
        return x.real();
}

template <class T>
std::string scalar_string(const T& x) {
    std::ostringstream os;
    if constexpr (std::is_same_v<T, GaussianRational>) {
        os << x.re;
        if (x.im != 0) os << (x.im > 0 ? "+" : "-") << abs(x.im) << "i";
    } else {
        os << x.real();
        if (x.imag() != 0) os << (x.imag() > 0 ? "+" : "-") << std::abs(x.imag()) << "i";
    }
    return os.str();
}

template <class T>
std::string vec_string(const std::vector<T>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_string(v[i]);
    return s + ")";
}

template <class T>
std::vector<T> conj_vec(std::vector<T> v) {
    for (auto& x : v) x = field_traits<T>::conj(x);
    return v;
}

template <class T>
double vec_norm(const std::vector<T>& v) {
    double n = 0;
    for (const auto& x : v) n = std::max(n, field_traits<T>::magnitude(x));
    return n;
}

/// Zero test for a scalar built from vectors of size `scale`.
template <class T>
bool negligible(const T& x, double scale) {
    if constexpr (exact_field<T>)
        return field_traits<T>::is_zero(x);
    else
        return std::abs(x) <= field_traits<T>::default_tol * std::max(1.0, scale);
}

/// u^T S w.
template <class T>
T bilinear(const std::vector<T>& u, const Matrix<T>& S, const std::vector<T>& w) {
    T acc = field_traits<T>::zero();
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) acc += u[i] * S(i, j) * w[j];
    return acc;
}

/// First nonpositive pivot of a Hermitian matrix G = L D L^*, with x satisfying x^* G x = d.
template <class T>
struct PivotFailure {
    std::size_t index;
    T value;
    std::vector<T> x;
};

template <class T>
std::optional<PivotFailure<T>> hermitian_ldl(const Matrix<T>& G) {
    using F = field_traits<T>;
    const std::size_t n = G.rows();
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, F::magnitude(G(i, j)));
    Matrix<T> L = Matrix<T>::identity(n);
    std::vector<T> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        T dj = G(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= L(j, k) * F::conj(L(j, k)) * d[k];
        bool positive;
        if constexpr (std::is_same_v<T, GaussianRational>)
            positive = dj.re > 0;
        else
            positive = dj.real() > F::default_tol * std::max(1.0, scale);
        if (!positive) {
            // back-substitute L^* x = e_j
            std::vector<T> x(n, F::zero());
            x[j] = F::one();
            for (std::size_t r = j; r-- > 0;) {
                T acc = F::zero();
                for (std::size_t c = r + 1; c <= j; ++c) acc += F::conj(L(c, r)) * x[c];
                x[r] = -acc;
            }
            return PivotFailure<T>{j, dj, x};
        }
        d[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            T s = G(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * F::conj(L(j, k)) * d[k];
            L(i, j) = s / dj;
        }
    }
    return std::nullopt;
}

template <class T>
Matrix<T> columns(std::size_t n, const std::vector<std::vector<T>>& vs) {
    Matrix<T> m(n, vs.size());
    for (std::size_t c = 0; c < vs.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = vs[c][r];
    return m;
}

}  // namespace detail

// --- filtrations -------------------------------------------------------------

/// Decreasing filtration F^lo ⊇ F^{lo+1} ⊇ ...; F^p is everything below lo and 0 past the last step.
template <class T>
struct HodgeFiltration {
    std::size_t rank = 0;
    int lo = 0;
    std::vector<Subspace<T>> steps;

    int hi() const { return lo + static_cast<int>(steps.size()) - 1; }
    Subspace<T> at(int p) const {
        if (p < lo) return Subspace<T>::full(rank);
        if (p > hi()) return Subspace<T>(rank);
        return steps[static_cast<std::size_t>(p - lo)];
    }
    HodgeFiltration transformed(const Matrix<T>& g) const {
        HodgeFiltration out{rank, lo, {}};
        for (const auto& s : steps) out.steps.push_back(s.image(g));
        return out;
    }
};

/// Increasing filtration W_lo ⊆ W_{lo+1} ⊆ ...; 0 below lo and everything past the last step.
template <class T>
struct WeightSteps {
    std::size_t rank = 0;
    int lo = 0;
    std::vector<Subspace<T>> steps;

    int hi() const { return lo + static_cast<int>(steps.size()) - 1; }
    Subspace<T> at(int m) const {
        if (m < lo) return Subspace<T>(rank);
        if (m > hi()) return Subspace<T>::full(rank);
        return steps[static_cast<std::size_t>(m - lo)];
    }
    WeightSteps transformed(const Matrix<T>& g) const {
        WeightSteps out{rank, lo, {}};
        for (const auto& s : steps) out.steps.push_back(s.image(g));
        return out;
    }
    static WeightSteps from(const IndexedFiltration& W) {
        WeightSteps out{W.ambient(), W.lo(), {}};
        for (int n = W.lo(); n <= W.hi(); ++n) out.steps.push_back(detail::lift<T>(W.at(n)));
        return out;
    }
};

// --- pure Hodge structures ---------------------------------------------------

template <class T>
struct HodgeData {
    std::size_t rank = 0;
    int weight = 0;
    std::map<std::pair<int, int>, Matrix<T>> pieces;  // (p,q) -> columns spanning V^{p,q}

    Subspace<T> piece(int p) const {
        auto it = pieces.find({p, weight - p});
        if (it == pieces.end() || it->second.cols() == 0) return Subspace<T>(rank);
        return Subspace<T>::span_columns(it->second);
    }
    /// F^p as the sum of V^{s,k-s} for s >= p.
    Subspace<T> filtration(int p) const {
        Subspace<T> acc(rank);
        for (const auto& [pq, m] : pieces)
            if (pq.first >= p && m.cols() > 0) acc = acc + Subspace<T>::span_columns(m);
        return acc;
    }
    HodgeFiltration<T> hodge_filtration() const {
        HodgeFiltration<T> F{rank, 0, {}};
        if (pieces.empty()) return F;
        int lo = pieces.begin()->first.first, hi = lo;
        for (const auto& [pq, m] : pieces) {
            lo = std::min(lo, pq.first);
            hi = std::max(hi, pq.first);
        }
        F.lo = lo;
        for (int p = lo; p <= hi; ++p) F.steps.push_back(filtration(p));
        return F;
    }
};

template <class T>
struct PolarizedHodgeData {
    HodgeData<T> hodge;
    Matrix<Rational> S;
};

/// V^{p,k-p} = F^p ∩ conj(F^{k-p}) for every p where it is nonzero.
template <class T>
HodgeData<T> hodge_from_filtration(const HodgeFiltration<T>& F, int weight) {
    HodgeData<T> h{F.rank, weight, {}};
    const int lo = std::min(F.lo, weight - F.hi()) - 1, hi = std::max(F.hi(), weight - F.lo) + 1;
    for (int p = lo; p <= hi; ++p) {
        auto v = intersect(F.at(p), F.at(weight - p).conj());
        if (v.dim() > 0) h.pieces[{p, weight - p}] = v.basis_columns();
    }
    return h;
}

template <class T>
HodgeReport validate_hodge(const HodgeData<T>& h) {
    HodgeReport rep;
    const std::size_t n = h.rank;

    bool types = true;
    for (const auto& [pq, m] : h.pieces) {
        if (m.rows() != n) throw InputError("piece basis has the wrong number of rows");
        if (pq.first + pq.second != h.weight) {
            rep.fail("type p+q=k", "(" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ")",
                     "weight is " + std::to_string(h.weight));
            types = false;
        }
    }
    if (types) rep.pass("type p+q=k");

    bool indep = true;
    for (const auto& [pq, m] : h.pieces) {
        auto ns = nullspace(m);
        if (ns.rows() > 0) {
            rep.fail("independent basis", detail::vec_string(ns.row(0)),
                     "dependency among the basis of V^{" + std::to_string(pq.first) + "," + std::to_string(pq.second) + "}");
            indep = false;
        }
    }
    if (indep) rep.pass("independent basis");

    // direct sum: dimensions add up and the pieces span
    Matrix<T> all(n, 0);
    for (const auto& [pq, m] : h.pieces) all = hcat(all, m);
    auto dep = nullspace(all);
    auto span = all.cols() ? Subspace<T>::span_columns(all) : Subspace<T>(n);
    if (indep && dep.rows() > 0) {
        rep.fail("direct sum", detail::vec_string(dep.row(0)), "the pieces intersect; coefficients of a relation shown");
    } else if (span.dim() < n) {
        std::string w;
        for (std::size_t i = 0; i < n && w.empty(); ++i) {
            std::vector<T> e(n, field_traits<T>::zero());
            e[i] = field_traits<T>::one();
            if (!span.contains(e)) w = detail::vec_string(e);
        }
        rep.fail("direct sum", w, "pieces span dimension " + std::to_string(span.dim()) + " of " + std::to_string(n));
    } else {
        rep.pass("direct sum");
    }

    bool conj_ok = true;
    for (const auto& [pq, m] : h.pieces) {
        auto target = h.piece(pq.second);
        if (pq.first + pq.second != h.weight) continue;
        for (std::size_t c = 0; c < m.cols() && conj_ok; ++c) {
            auto v = detail::conj_vec(m.col(c));
            if (!target.contains(v)) {
                rep.fail("conjugation symmetry", detail::vec_string(v),
                         "conjugate of a vector of V^{" + std::to_string(pq.first) + "," + std::to_string(pq.second) +
                             "} is not in V^{" + std::to_string(pq.second) + "," + std::to_string(pq.first) + "}");
                conj_ok = false;
            }
        }
    }
    if (conj_ok) rep.pass("conjugation symmetry");

    bool rec_ok = true;
    for (const auto& [pq, m] : h.pieces) {
        if (pq.first + pq.second != h.weight || !rec_ok) continue;
        auto direct = h.piece(pq.first);
        auto recovered = intersect(h.filtration(pq.first), h.filtration(pq.second).conj());
        if (direct == recovered) continue;
        rec_ok = false;
        std::string w;
        for (const auto& v : recovered.vectors())
            if (w.empty() && !direct.contains(v)) w = detail::vec_string(v);
        for (const auto& v : direct.vectors())
            if (w.empty() && !recovered.contains(v)) w = detail::vec_string(v);
        rep.fail("recovery from F", w,
                 "V^{" + std::to_string(pq.first) + "," + std::to_string(pq.second) + "} differs from F^p ∩ conj F^q");
    }
    if (rec_ok) rep.pass("recovery from F");
    return rep;
}

template <class T>
HodgeReport validate_polarized(const PolarizedHodgeData<T>& ph) {
    const auto& h = ph.hodge;
    HodgeReport rep = validate_hodge(h);
    const std::size_t n = h.rank;
    const auto& S = ph.S;
    if (S.rows() != n || S.cols() != n) throw InputError("form has the wrong size");

    bool integral = true;
    for (std::size_t i = 0; i < n && integral; ++i)
        for (std::size_t j = 0; j < n && integral; ++j)
            if (denominator(S(i, j)) != 1) {
                rep.fail("integral form", "S(" + std::to_string(i) + "," + std::to_string(j) + ") = " + S(i, j).str());
                integral = false;
            }
    if (integral) rep.pass("integral form");

    const int sign = h.weight % 2 == 0 ? 1 : -1;
    bool sym = true;
    for (std::size_t i = 0; i < n && sym; ++i)
        for (std::size_t j = 0; j < n && sym; ++j)
            if (S(j, i) != sign * S(i, j)) {
                rep.fail("(-1)^k symmetry", "S(" + std::to_string(i) + "," + std::to_string(j) + ") = " + S(i, j).str() +
                                                ", S(" + std::to_string(j) + "," + std::to_string(i) + ") = " + S(j, i).str());
                sym = false;
            }
    if (sym) rep.pass("(-1)^k symmetry");

    const auto St = detail::lift<T>(S);
    const double snorm = S.norm_inf();
    bool orth = true;
    for (const auto& [a, ma] : h.pieces)
        for (const auto& [b, mb] : h.pieces) {
            if (!orth || (a.first == b.second && a.second == b.first)) continue;
            for (std::size_t i = 0; i < ma.cols() && orth; ++i)
                for (std::size_t j = 0; j < mb.cols() && orth; ++j) {
                    auto u = ma.col(i), w = mb.col(j);
                    T val = detail::bilinear(u, St, w);
                    if (!detail::negligible(val, snorm * detail::vec_norm(u) * detail::vec_norm(w))) {
                        rep.fail("orthogonality", detail::vec_string(u) + " , " + detail::vec_string(w),
                                 "S(V^{" + std::to_string(a.first) + "," + std::to_string(a.second) + "}, V^{" +
                                     std::to_string(b.first) + "," + std::to_string(b.second) + "}) = " + detail::scalar_string(val));
                        orth = false;
                    }
                }
        }
    if (orth) rep.pass("orthogonality");

    bool pos = true;
    for (const auto& [pq, m] : h.pieces) {
        if (!pos || m.cols() == 0) continue;
        const T c = detail::i_power<T>(pq.first - pq.second);
        Matrix<T> G(m.cols(), m.cols());
        // G(a,b) = c S(v_b, conj v_a), so x^* G x = c S(v, conj v) for v = sum x_a v_a
        for (std::size_t a = 0; a < m.cols(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b) G(a, b) = c * detail::bilinear(m.col(b), St, detail::conj_vec(m.col(a)));
        if (auto f = detail::hermitian_ldl(G)) {
            auto v = (m * Matrix<T>::column(f->x)).col(0);
            rep.fail("positivity", detail::vec_string(v),
                     "i^{p-q} S(v, conj v) = " + detail::scalar_string(f->value) + " on V^{" + std::to_string(pq.first) + "," +
                         std::to_string(pq.second) + "}");
            pos = false;
        }
    }
    if (pos) rep.pass("positivity");
    return rep;
}

// --- period matrices ---------------------------------------------------------

template <class T>
HodgeReport validate_period_matrix(const Matrix<T>& omega) {
    HodgeReport rep;
    if (!omega.square()) {
        rep.fail("square", std::to_string(omega.rows()) + "x" + std::to_string(omega.cols()));
        return rep;
    }
    rep.pass("square");
    const std::size_t g = omega.rows();
    double scale = omega.norm_inf();
    bool sym = true;
    for (std::size_t i = 0; i < g && sym; ++i)
        for (std::size_t j = i + 1; j < g && sym; ++j)
            if (!detail::negligible(omega(i, j) - omega(j, i), scale)) {
                rep.fail("symmetric", "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" + std::to_string(j) +
                                          "," + std::to_string(i) + "): " + detail::scalar_string(omega(i, j)) + " vs " +
                                          detail::scalar_string(omega(j, i)));
                sym = false;
            }
    if (sym) rep.pass("symmetric");
    Matrix<T> im(g, g);
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            // symmetrized imaginary part, a real symmetric matrix
            T a = omega(i, j), b = omega(j, i);
            if constexpr (std::is_same_v<T, GaussianRational>)
                im(i, j) = GaussianRational((a.im + b.im) / 2);
            else
                im(i, j) = cdouble((a.imag() + b.imag()) / 2, 0);
        }
    if (auto f = detail::hermitian_ldl(im))
        rep.fail("Im positive definite", detail::vec_string(f->x),
                 "leading minor " + std::to_string(f->index + 1) + " is not positive; x^T Im x = " + detail::scalar_string(f->value));
    else
        rep.pass("Im positive definite");
    return rep;
}

/// Weight-1 structure with V^{1,0} spanned by the columns of [I; Omega] and S = [[0, I], [-I, 0]].
template <class T>
PolarizedHodgeData<T> hodge_from_period_matrix(const Matrix<T>& omega) {
    if (!omega.square()) throw InputError("period matrix must be square");
    const std::size_t g = omega.rows();
    Matrix<T> v(2 * g, g);
    for (std::size_t j = 0; j < g; ++j) {
        v(j, j) = field_traits<T>::one();
        for (std::size_t i = 0; i < g; ++i) v(g + i, j) = omega(i, j);
    }
    PolarizedHodgeData<T> ph;
    ph.hodge.rank = 2 * g;
    ph.hodge.weight = 1;
    ph.hodge.pieces[{1, 0}] = v;
    ph.hodge.pieces[{0, 1}] = v.conj();
    ph.S = Matrix<Rational>(2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        ph.S(i, g + i) = 1;
        ph.S(g + i, i) = -1;
    }
    return ph;
}

/// Elliptic curve with period tau: V^{1,0} = span((1, tau)), S = [[0, 1], [-1, 0]].
template <class T>
PolarizedHodgeData<T> elliptic_hodge(const T& tau) {
    return hodge_from_period_matrix(Matrix<T>{{tau}});
}

// --- mixed Hodge structures --------------------------------------------------

template <class T>
struct MixedHodgeData {
    std::size_t rank = 0;
    Matrix<T> lattice;  // columns: a basis of V_Z inside V_C; identity by default
    WeightSteps<T> W;
    HodgeFiltration<T> F;
};

namespace detail {

template <class T>
std::string index_note(const char* what, int m) {
    return std::string(what) + " " + std::to_string(m);
}

}  // namespace detail

/// Gr^W_m with the induced filtration, in coordinates of a rational complement of W_{m-1} in W_m.
template <class T>
HodgeFiltration<T> graded_filtration(const Subspace<T>& Wm, const Subspace<T>& Wm1, const HodgeFiltration<T>& F) {
    const std::size_t n = Wm.ambient();
    auto comp = Wm.complement_of(Wm1);
    const std::size_t d = comp.rows();
    Matrix<T> basis = hcat(Wm1.basis_columns(), comp.transpose());
    HodgeFiltration<T> out{d, F.lo, {}};
    for (int p = F.lo; p <= F.hi(); ++p) {
        auto piece = intersect(F.at(p), Wm);
        std::vector<std::vector<T>> vs;
        for (const auto& v : piece.vectors()) {
            auto x = solve(basis, v, Wm.tolerance());
            if (!x) throw std::logic_error("vector of W_m not in its own basis");
            vs.emplace_back(x->end() - static_cast<std::ptrdiff_t>(d), x->end());
        }
        out.steps.push_back(Subspace<T>::span(d, vs, Wm.tolerance()));
    }
    (void)n;
    return out;
}

template <class T>
HodgeReport validate_mhs(const MixedHodgeData<T>& m) {
    HodgeReport rep;
    const std::size_t n = m.rank;
    Matrix<T> lat = m.lattice.rows() ? m.lattice : Matrix<T>::identity(n);
    Matrix<T> inv;
    try {
        inv = inverse(lat);
    } catch (const InputError&) {
        rep.fail("lattice basis", "columns are dependent");
        return rep;
    }
    rep.pass("lattice basis");
    auto W = m.W.transformed(inv);
    auto F = m.F.transformed(inv);

    bool inc = true;
    for (int k = W.lo; k < W.hi() && inc; ++k)
        if (!W.at(k).subset_of(W.at(k + 1))) {
            std::string w;
            for (const auto& v : W.at(k).vectors())
                if (w.empty() && !W.at(k + 1).contains(v)) w = detail::vec_string(v);
            rep.fail("W increasing", w, detail::index_note<T>("W_m not inside W_{m+1} at m =", k));
            inc = false;
        }
    if (inc) rep.pass("W increasing");

    bool dec = true;
    for (int p = F.lo; p < F.hi() && dec; ++p)
        if (!F.at(p + 1).subset_of(F.at(p))) {
            std::string w;
            for (const auto& v : F.at(p + 1).vectors())
                if (w.empty() && !F.at(p).contains(v)) w = detail::vec_string(v);
            rep.fail("F decreasing", w, detail::index_note<T>("F^{p+1} not inside F^p at p =", p));
            dec = false;
        }
    if (dec) rep.pass("F decreasing");

    bool rational = true;
    for (int k = W.lo; k <= W.hi() && rational; ++k) {
        auto Wk = W.at(k);
        if (Wk.conj() == Wk) continue;
        std::string w;
        for (const auto& v : Wk.vectors())
            if (w.empty() && !Wk.contains(detail::conj_vec(v))) w = detail::vec_string(v);
        rep.fail("W defined over the lattice", w, detail::index_note<T>("W_m is not conjugation-stable at m =", k));
        rational = false;
    }
    if (rational) rep.pass("W defined over the lattice");
    if (!inc || !rational) return rep;

    for (int k = W.lo; k <= W.hi() + 1; ++k) {
        auto Wk = W.at(k), Wk1 = W.at(k - 1);
        if (Wk.dim() == Wk1.dim()) continue;
        auto Fgr = graded_filtration(Wk, Wk1, F);
        auto h = hodge_from_filtration(Fgr, k);
        auto sub = validate_hodge(h);
        rep.merge(sub, "Gr_" + std::to_string(k) + ": ");
    }
    return rep;
}

/// Split structure from pure pieces: block-diagonal, W_m = sum of pieces of weight <= m.
template <class T>
MixedHodgeData<T> direct_sum(const std::vector<HodgeData<T>>& parts) {
    MixedHodgeData<T> m;
    for (const auto& h : parts) m.rank += h.rank;
    const std::size_t n = m.rank;
    m.lattice = Matrix<T>::identity(n);
    if (parts.empty()) return m;
    int wlo = parts.front().weight, whi = wlo, plo = 0, phi = 0;
    bool first = true;
    for (const auto& h : parts) {
        wlo = std::min(wlo, h.weight);
        whi = std::max(whi, h.weight);
        for (const auto& [pq, b] : h.pieces) {
            plo = first ? pq.first : std::min(plo, pq.first);
            phi = first ? pq.first : std::max(phi, pq.first);
            first = false;
        }
    }
    auto embed = [&](std::size_t off, const Matrix<T>& cols) {
        Matrix<T> out(n, cols.cols());
        for (std::size_t r = 0; r < cols.rows(); ++r)
            for (std::size_t c = 0; c < cols.cols(); ++c) out(off + r, c) = cols(r, c);
        return out;
    };
    m.W = {n, wlo, {}};
    for (int k = wlo; k <= whi; ++k) {
        Matrix<T> acc(n, 0);
        std::size_t off = 0;
        for (const auto& h : parts) {
            if (h.weight <= k) acc = hcat(acc, embed(off, Matrix<T>::identity(h.rank)));
            off += h.rank;
        }
        m.W.steps.push_back(acc.cols() ? Subspace<T>::span_columns(acc) : Subspace<T>(n));
    }
    m.F = {n, plo, {}};
    for (int p = plo; p <= phi; ++p) {
        Matrix<T> acc(n, 0);
        std::size_t off = 0;
        for (const auto& h : parts) {
            for (const auto& [pq, b] : h.pieces)
                if (pq.first >= p) acc = hcat(acc, embed(off, b));
            off += h.rank;
        }
        m.F.steps.push_back(acc.cols() ? Subspace<T>::span_columns(acc) : Subspace<T>(n));
    }
    return m;
}

/// Same W and F with lattice g * lattice; g must preserve W and act trivially on Gr^W.
template <class T>
MixedHodgeData<T> mhs_from_twist(const MixedHodgeData<T>& split, const Matrix<T>& g) {
    const std::size_t n = split.rank;
    if (g.rows() != n || g.cols() != n) throw InputError("twist has the wrong size");
    Matrix<T> u = g - Matrix<T>::identity(n);
    for (int k = split.W.lo; k <= split.W.hi() + 1; ++k) {
        auto img = split.W.at(k).image(u);
        if (!img.subset_of(split.W.at(k - 1)))
            throw InputError("twist is not unipotent on W: (g - 1) W_" + std::to_string(k) + " is not inside W_" +
                             std::to_string(k - 1));
    }
    MixedHodgeData<T> out = split;
    Matrix<T> lat = split.lattice.rows() ? split.lattice : Matrix<T>::identity(n);
    out.lattice = g * lat;
    return out;
}

/// Graded-polynomial structure on words of length <= cutoff: X_I has type (-|I|,-|I|).
inline MixedHodgeData<GaussianRational> hodge_tate_words(unsigned cutoff) {
    using G = GaussianRational;
    const std::size_t n = Word::dense_size(cutoff);
    MixedHodgeData<G> m;
    m.rank = n;
    m.lattice = Matrix<G>::identity(n);
    auto span_len = [&](auto pred) {
        std::vector<std::vector<G>> vs;
        for (const auto& w : all_words(cutoff))
            if (pred(static_cast<int>(w.size()))) {
                std::vector<G> e(n);
                e[w.dense_index()] = 1;
                vs.push_back(e);
            }
        return Subspace<G>::span(n, vs);
    };
    const int c = static_cast<int>(cutoff);
    m.W = {n, -2 * c, {}};
    for (int k = -2 * c; k <= 0; ++k) m.W.steps.push_back(span_len([&](int len) { return -2 * len <= k; }));
    m.F = {n, -c, {}};
    for (int p = -c; p <= 0; ++p) m.F.steps.push_back(span_len([&](int len) { return -len >= p; }));
    return m;
}

// --- extension classes -------------------------------------------------------

struct ExtClass {
    Matrix<cdouble> representative;     // A -> B in lattice coordinates
    std::vector<cdouble> reduced;        // modulo F^0 Hom, entries of the rref residual
    std::vector<double> lattice_coords;  // on the image of Hom(A_Z, B_Z), in [0, 1)
    std::vector<double> transverse;      // real coordinates orthogonal to that image

    nlohmann::json to_json() const {
        nlohmann::json rep = nlohmann::json::array();
        for (std::size_t r = 0; r < representative.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < representative.cols(); ++c)
                row.push_back({representative(r, c).real(), representative(r, c).imag()});
            rep.push_back(row);
        }
        return {{"representative", rep}, {"lattice_coords", lattice_coords}, {"transverse", transverse}};
    }
};

/// Hom(A_C, B_C) / (Hom(A_Z, B_Z) + F^0 Hom(A, B)).
class ExtSpace {
public:
    /// A given by its bigrading (coordinates of A), B by its Hodge filtration.
    ExtSpace(const HodgeData<cdouble>& A, const HodgeFiltration<cdouble>& FB) : da_(A.rank), db_(FB.rank) {
        const std::size_t N = da_ * db_;
        // dual basis of the bigrading basis of A
        Matrix<cdouble> basis(da_, 0);
        std::vector<int> type;
        for (const auto& [pq, m] : A.pieces) {
            basis = hcat(basis, m);
            for (std::size_t c = 0; c < m.cols(); ++c) type.push_back(pq.first);
        }
        if (basis.cols() != da_) throw InputError("graded piece A is not a direct sum of its types");
        auto dual = inverse(basis);  // rows: dual functionals
        std::vector<std::vector<cdouble>> gens;
        for (std::size_t k = 0; k < da_; ++k)
            for (const auto& b : FB.at(type[k]).vectors()) {
                std::vector<cdouble> v(N);
                for (std::size_t i = 0; i < db_; ++i)
                    for (std::size_t j = 0; j < da_; ++j) v[i * da_ + j] = b[i] * dual(k, j);
                gens.push_back(v);
            }
        f0_ = Subspace<cdouble>::span(N, gens);
        // image of the integral maps
        std::vector<std::vector<double>> lat;
        for (std::size_t k = 0; k < N; ++k) {
            std::vector<cdouble> e(N);
            e[k] = 1;
            lat.push_back(realify(f0_.residual(e)));
        }
        // Gram-Schmidt; the integral image is a lattice when the vectors are independent
        ortho_.clear();
        for (const auto& v : lat) {
            auto w = v;
            for (const auto& q : ortho_) {
                double d = dot(w, q);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= d * q[i];
            }
            double nn = std::sqrt(dot(w, w));
            if (nn < 1e-9) {
                discrete_ = false;
                continue;
            }
            for (auto& x : w) x /= nn;
            ortho_.push_back(w);
        }
        lat_ = lat;
    }

    bool discrete() const { return discrete_; }
    std::size_t f0_dim() const { return f0_.dim(); }

    ExtClass normal_form(const Matrix<cdouble>& X) const {
        if (X.rows() != db_ || X.cols() != da_) throw InputError("class representative has the wrong shape");
        ExtClass c;
        c.representative = X;
        std::vector<cdouble> v(da_ * db_);
        for (std::size_t i = 0; i < db_; ++i)
            for (std::size_t j = 0; j < da_; ++j) v[i * da_ + j] = X(i, j);
        c.reduced = f0_.residual(v);
        auto q = realify(c.reduced);
        if (!discrete_) {
            c.transverse = q;
            return c;
        }
        // least squares q = sum c_k lat_k + perp via normal equations
        const std::size_t N = lat_.size();
        Matrix<cdouble> gram(N, N);
        std::vector<cdouble> rhs(N);
        for (std::size_t a = 0; a < N; ++a) {
            rhs[a] = dot(lat_[a], q);
            for (std::size_t b = 0; b < N; ++b) gram(a, b) = dot(lat_[a], lat_[b]);
        }
        auto coeffs = solve(gram, rhs, 1e-12);
        if (!coeffs) throw std::logic_error("singular lattice Gram matrix");
        auto perp = q;
        for (std::size_t k = 0; k < N; ++k) {
            double ck = (*coeffs)[k].real();
            for (std::size_t i = 0; i < perp.size(); ++i) perp[i] -= ck * lat_[k][i];
            double f = ck - std::floor(ck);
            if (f > 1 - 1e-10) f = 0;
            c.lattice_coords.push_back(f);
        }
        // express the transverse part in the orthonormal complement of the lattice span
        c.transverse = perp;
        return c;
    }

    bool equal(const ExtClass& a, const ExtClass& b, double tol = 1e-8) const {
        if (!discrete_) throw InputError("integral maps are not discrete in the quotient; equality is not decidable here");
        for (std::size_t i = 0; i < a.transverse.size(); ++i)
            if (std::abs(a.transverse[i] - b.transverse[i]) > tol) return false;
        for (std::size_t k = 0; k < a.lattice_coords.size(); ++k) {
            double d = std::abs(a.lattice_coords[k] - b.lattice_coords[k]);
            if (std::min(d, 1 - d) > tol) return false;
        }
        return true;
    }

    ExtClass add(const ExtClass& a, const ExtClass& b) const { return normal_form(a.representative + b.representative); }
    bool is_zero(const ExtClass& a, double tol = 1e-8) const {
        return equal(a, normal_form(Matrix<cdouble>(db_, da_)), tol);
    }

private:
    static std::vector<double> realify(const std::vector<cdouble>& v) {
        std::vector<double> r;
        for (const auto& z : v) {
            r.push_back(z.real());
            r.push_back(z.imag());
        }
        return r;
    }
    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    std::size_t da_, db_;
    Subspace<cdouble> f0_;
    std::vector<std::vector<double>> lat_, ortho_;
    bool discrete_ = true;
};

struct ExtResult {
    ExtSpace space;
    ExtClass cls;
    int weight_a = 0, weight_b = 0;
};

/// Carlson class s_Z - s_F of a two-step structure whose lattice basis starts with a basis of W_b.
template <class T>
ExtResult ext_class(const MixedHodgeData<T>& m) {
    const std::size_t n = m.rank;
    Matrix<T> lat = m.lattice.rows() ? m.lattice : Matrix<T>::identity(n);
    auto inv = inverse(lat);
    auto W = m.W.transformed(inv);
    auto F = m.F.transformed(inv);
    std::vector<int> jumps;
    for (int k = W.lo; k <= W.hi() + 1; ++k)
        if (W.at(k).dim() > W.at(k - 1).dim()) jumps.push_back(k);
    if (jumps.size() != 2)
        throw InputError("extension class needs exactly two weight jumps, found " + std::to_string(jumps.size()));
    const int b = jumps[0], a = jumps[1];
    auto WB = W.at(b);
    const std::size_t db = WB.dim(), da = n - db;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<T> e(n, field_traits<T>::zero());
        e[i] = field_traits<T>::one();
        if (WB.contains(e) != (i < db))
            throw InputError("lattice basis is not adapted to W: the first " + std::to_string(db) + " basis vectors must span W_" +
                             std::to_string(b));
    }
    // pieces in double precision, coordinates split as (B | A)
    auto Wd = Subspace<cdouble>::span_rows(detail::to_double(WB.basis()));
    HodgeFiltration<cdouble> Fd{n, F.lo, {}};
    for (const auto& s : F.steps)
        Fd.steps.push_back(s.dim() ? Subspace<cdouble>::span_rows(detail::to_double(s.basis())) : Subspace<cdouble>(n));
    HodgeFiltration<cdouble> FB{db, F.lo, {}}, FA{da, F.lo, {}};
    for (int p = F.lo; p <= F.hi(); ++p) {
        std::vector<std::vector<cdouble>> vb, va;
        for (const auto& v : intersect(Fd.at(p), Wd).vectors()) vb.emplace_back(v.begin(), v.begin() + db);
        for (const auto& v : Fd.at(p).vectors()) va.emplace_back(v.begin() + db, v.end());
        FB.steps.push_back(Subspace<cdouble>::span(db, vb));
        FA.steps.push_back(Subspace<cdouble>::span(da, va));
    }
    auto A = hodge_from_filtration(FA, a);
    if (!validate_hodge(A).ok) throw InputError("Gr_a is not a Hodge structure");
    // Hodge splitting: lift each A^{p,q} basis vector into F^p
    Matrix<cdouble> sF(n, da);
    Matrix<cdouble> basisA(da, 0);
    std::size_t col = 0;
    Matrix<cdouble> images(n, 0);
    for (const auto& [pq, bm] : A.pieces) {
        auto Fp = Fd.at(pq.first);
        Matrix<cdouble> fb = Fp.basis_columns();
        // projection of F^p onto the A coordinates
        Matrix<cdouble> proj(da, fb.cols());
        for (std::size_t r = 0; r < da; ++r)
            for (std::size_t c = 0; c < fb.cols(); ++c) proj(r, c) = fb(db + r, c);
        for (std::size_t c = 0; c < bm.cols(); ++c, ++col) {
            auto x = solve(proj, bm.col(c), 1e-10);
            if (!x) throw InputError("F^p does not surject onto F^p Gr_a");
            images = hcat(images, fb * Matrix<cdouble>::column(*x));
        }
        basisA = hcat(basisA, bm);
    }
    // s_F as a map on A coordinates: images * basisA^{-1}
    sF = images * inverse(basisA, 1e-12);
    Matrix<cdouble> X(db, da);
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < da; ++j) X(i, j) = -sF(i, j);  // s_Z(e_j) = e_{db+j} has no B component
    ExtSpace space(A, FB);
    auto cls = space.normal_form(X);
    return {std::move(space), std::move(cls), a, b};
}

// --- nilpotent orbits --------------------------------------------------------

/// N holds log T (rational); the orbit lattice over t is exp(log(t) N / 2 pi i) Z^n.
struct NilpotentOrbitData {
    std::size_t rank = 0;
    int weight = 0;
    Matrix<Rational> N;
    Matrix<Rational> S;
    HodgeFiltration<cdouble> F0;
};

struct OrbitReport {
    HodgeReport structure;  // S, N and W checks
    HodgeReport mhs;        // validate_mhs on (t^N lattice, F0, W)
    HodgeReport fiber;      // is the fiber over t itself a polarized Hodge structure
    bool ok = false;        // structure and mhs

    nlohmann::json to_json() const {
        return {{"ok", ok}, {"structure", structure.to_json()}, {"mhs", mhs.to_json()}, {"fiber", fiber.to_json()}};
    }
};

namespace detail {

inline Matrix<cdouble> nilpotent_exp_d(const Matrix<Rational>& N, cdouble s) {
    const std::size_t n = N.rows();
    auto Nd = to_cdouble(N);
    Matrix<cdouble> result = Matrix<cdouble>::identity(n), term = result;
    for (std::size_t j = 1; j <= n; ++j) {
        term = term * Nd * (s / static_cast<double>(j));
        result += term;
    }
    return result;
}

inline cdouble orbit_parameter(cdouble log_t) { return log_t / cdouble(0, 2 * M_PI); }

/// log t on the ray at angle `turns` with |t| = exp(-L).
inline cdouble ray_log(double L, double turns) { return {-L, 2 * M_PI * turns}; }

}  // namespace detail

/// The orbit is parametrized by log t so that tiny |t| stays representable.
inline OrbitReport nilpotent_orbit_check_log(const NilpotentOrbitData& d, cdouble log_t,
                                             ShiftConvention conv = ShiftConvention::standard) {
    OrbitReport rep;
    const std::size_t n = d.rank;
    if (d.N.rows() != n || d.S.rows() != n || d.F0.rank != n) throw InputError("orbit data sizes disagree");
    auto& st = rep.structure;

    if (!power(d.N, static_cast<unsigned>(n)).is_zero()) {
        st.fail("N nilpotent", to_string(power(d.N, static_cast<unsigned>(n))));
        return rep;
    }
    st.pass("N nilpotent");
    auto inf = d.N.transpose() * d.S + d.S * d.N;
    bool infok = true;
    for (std::size_t i = 0; i < n && infok; ++i)
        for (std::size_t j = 0; j < n && infok; ++j)
            if (inf(i, j) != 0) {
                st.fail("S(Nx,y) + S(x,Ny) = 0", "x = e" + std::to_string(i) + ", y = e" + std::to_string(j),
                        "value " + inf(i, j).str());
                infok = false;
            }
    if (infok) st.pass("S(Nx,y) + S(x,Ny) = 0");

    auto Wq = shift_filtration(weight_filtration(d.N), d.weight, conv);
    auto W = WeightSteps<cdouble>::from(Wq);
    // N W_n in W_{n-2}
    bool nw = true;
    if (Wq.increasing()) {
        for (int k = Wq.lo(); k <= Wq.hi() && nw; ++k)
            for (const auto& v : Wq.at(k).vectors())
                if (nw && !Wq.at(k - 2).contains(periods::apply(d.N, v))) {
                    std::vector<cdouble> vd;
                    for (const auto& x : v) vd.emplace_back(x.convert_to<double>(), 0);
                    st.fail("N W_n in W_{n-2}", detail::vec_string(vd), detail::index_note<cdouble>("at n =", k));
                    nw = false;
                }
    } else {
        st.fail("N W_n in W_{n-2}", "", "shifted filtration is decreasing under this convention");
        nw = false;
    }
    if (nw) st.pass("N W_n in W_{n-2}");
    // N F^p in F^{p-1}
    auto Nd = to_cdouble(d.N);
    bool nf = true;
    for (int p = d.F0.lo; p <= d.F0.hi() + 1 && nf; ++p)
        for (const auto& v : d.F0.at(p).vectors()) {
            auto img = periods::apply(Nd, v);
            if (nf && !d.F0.at(p - 1).contains(img)) {
                st.fail("N F^p in F^{p-1}", detail::vec_string(v), detail::index_note<cdouble>("at p =", p));
                nf = false;
            }
        }
    if (nf) st.pass("N F^p in F^{p-1}");

    MixedHodgeData<cdouble> m;
    m.rank = n;
    m.lattice = detail::nilpotent_exp_d(d.N, detail::orbit_parameter(log_t));
    m.W = W;
    m.F = d.F0;
    rep.mhs = validate_mhs(m);
    rep.ok = rep.structure.ok && rep.mhs.ok;

    // fiber over t: lattice coordinates see F = exp(-s N) F0
    auto inv = detail::nilpotent_exp_d(d.N, -detail::orbit_parameter(log_t));
    auto h = hodge_from_filtration(d.F0.transformed(inv), d.weight);
    PolarizedHodgeData<cdouble> ph{h, d.S};
    rep.fiber = validate_polarized(ph);
    return rep;
}

inline OrbitReport nilpotent_orbit_check(const NilpotentOrbitData& d, cdouble t,
                                         ShiftConvention conv = ShiftConvention::standard) {
    if (std::abs(t) == 0) throw InputError("t must be nonzero");
    return nilpotent_orbit_check_log(d, std::log(t), conv);
}

/// log(1/|t|) values on a ray where the fiber over t is a polarized Hodge structure.
inline std::vector<std::pair<double, bool>> orbit_fiber_scan(const NilpotentOrbitData& d, double angle_turns,
                                                             const std::vector<double>& log_inv_abs_t) {
    std::vector<std::pair<double, bool>> out;
    for (double L : log_inv_abs_t) {
        out.emplace_back(L, nilpotent_orbit_check_log(d, detail::ray_log(L, angle_turns)).fiber.ok);
    }
    return out;
}

struct NormSample {
    double log_inv_abs_t;
    double norm_squared;
};

struct HodgeNormFit {
    double slope = 0;
    int expected = 0;  // m - k
    int weight_index = 0;
    std::vector<NormSample> samples;
    bool ok = false;

    nlohmann::json to_json() const {
        nlohmann::json s = nlohmann::json::array();
        for (const auto& x : samples) s.push_back({x.log_inv_abs_t, x.norm_squared});
        return {{"slope", slope}, {"expected", expected}, {"m", weight_index}, {"ok", ok}, {"samples", s}};
    }
};

/// S(Cv, conj v) for a flat rational v at the point with logarithm log_t.
inline double hodge_norm_squared(const NilpotentOrbitData& d, const std::vector<Rational>& v, cdouble log_t) {
    const std::size_t n = d.rank;
    auto inv = detail::nilpotent_exp_d(d.N, -detail::orbit_parameter(log_t));
    auto h = hodge_from_filtration(d.F0.transformed(inv), d.weight);
    Matrix<cdouble> basis(n, 0);
    std::vector<cdouble> c;
    for (const auto& [pq, m] : h.pieces) {
        basis = hcat(basis, m);
        for (std::size_t k = 0; k < m.cols(); ++k) c.push_back(detail::i_power<cdouble>(pq.first - pq.second));
    }
    if (basis.cols() != n) throw InputError("fiber over t is not a direct sum of Hodge types");
    std::vector<cdouble> vd;
    for (const auto& x : v) vd.emplace_back(x.convert_to<double>(), 0);
    auto x = solve(basis, vd, 1e-12);
    if (!x) throw std::logic_error("vector not in the span of the Hodge decomposition");
    for (std::size_t k = 0; k < n; ++k) (*x)[k] *= c[k];
    auto Cv = (basis * Matrix<cdouble>::column(*x)).col(0);
    return detail::bilinear(Cv, to_cdouble(d.S), detail::conj_vec(vd)).real();
}

inline HodgeNormFit hodge_norm_growth(const NilpotentOrbitData& d, const std::vector<Rational>& v, double angle_turns,
                                      const std::vector<double>& log_inv_abs_t, double tolerance = 0.1) {
    if (log_inv_abs_t.size() < 3) throw InputError("slope fit needs at least three samples");
    if (v.size() != d.rank) throw InputError("vector has the wrong length");
    HodgeNormFit fit;
    auto W = shift_filtration(weight_filtration(d.N), d.weight);
    int m = W.lo();
    while (!W.at(m).contains(v)) ++m;
    fit.weight_index = m;
    fit.expected = m - d.weight;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double L : log_inv_abs_t) {
        if (L <= 1) throw InputError("samples need log(1/|t|) > 1");
        double nn = hodge_norm_squared(d, v, detail::ray_log(L, angle_turns));
        if (!(nn > 0)) throw InputError("Hodge norm is not positive at log(1/|t|) = " + std::to_string(L));
        fit.samples.push_back({L, nn});
        double x = std::log(L), y = std::log(nn);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(log_inv_abs_t.size());
    fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.ok = std::abs(fit.slope - fit.expected) <= tolerance;
    return fit;
}

/// Weight-1 rank-2 orbit of a degenerating elliptic curve: N e1 = -e2, F0^1 = span(e1 + z0 e2).
inline NilpotentOrbitData elliptic_orbit(cdouble z0 = 0) {
    NilpotentOrbitData d;
    d.rank = 2;
    d.weight = 1;
    d.N = Matrix<Rational>{{0, 0}, {-1, 0}};
    d.S = Matrix<Rational>{{0, 1}, {-1, 0}};
    d.F0 = {2, 1, {Subspace<cdouble>::span(2, {{cdouble(1), z0}})}};
    return d;
}

// --- JSON --------------------------------------------------------------------

namespace detail {

inline GaussianRational gaussian_from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw InputError("complex entry must be [re, im]");
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    }
    return GaussianRational(rational_from_json(j));
}

inline nlohmann::json gaussian_to_json(const GaussianRational& z) {
    if (z.im == 0) return z.re.str();
    return nlohmann::json::array({z.re.str(), z.im.str()});
}

/// List of vectors -> columns.
inline Matrix<GaussianRational> vectors_from_json(const nlohmann::json& j, std::size_t n) {
    Matrix<GaussianRational> m(n, j.size());
    std::size_t c = 0;
    for (const auto& v : j) {
        if (v.size() != n) throw InputError("vector of length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
        for (std::size_t r = 0; r < n; ++r) m(r, c) = gaussian_from_json(v[r]);
        ++c;
    }
    return m;
}

inline Subspace<GaussianRational> subspace_from_json(const nlohmann::json& j, std::size_t n) {
    auto m = vectors_from_json(j, n);
    return m.cols() ? Subspace<GaussianRational>::span_columns(m) : Subspace<GaussianRational>(n);
}

}  // namespace detail

/// {"rank", "weight", "pieces": [{"p", "q", "basis": [[entries]...]}], "S"?}; entries are numbers, "p/q" or [re, im].
inline PolarizedHodgeData<GaussianRational> hodge_from_json(const nlohmann::json& j, bool* has_form = nullptr) {
    PolarizedHodgeData<GaussianRational> ph;
    ph.hodge.rank = j.at("rank").get<std::size_t>();
    ph.hodge.weight = j.at("weight").get<int>();
    for (const auto& p : j.at("pieces"))
        ph.hodge.pieces[{p.at("p").get<int>(), p.at("q").get<int>()}] = detail::vectors_from_json(p.at("basis"), ph.hodge.rank);
    if (has_form) *has_form = j.contains("S");
    if (j.contains("S")) ph.S = rational_matrix_from_json(j["S"]);
    return ph;
}

/// {"rank", "lattice"?: [vectors], "W": {"lo", "steps": [[vectors]...]}, "F": {"lo", "steps": [...]}}.
inline MixedHodgeData<GaussianRational> mhs_from_json(const nlohmann::json& j) {
    MixedHodgeData<GaussianRational> m;
    m.rank = j.at("rank").get<std::size_t>();
    m.lattice = j.contains("lattice") ? detail::vectors_from_json(j["lattice"], m.rank)
                                      : Matrix<GaussianRational>::identity(m.rank);
    m.W = {m.rank, j.at("W").at("lo").get<int>(), {}};
    for (const auto& s : j["W"].at("steps")) m.W.steps.push_back(detail::subspace_from_json(s, m.rank));
    m.F = {m.rank, j.at("F").at("lo").get<int>(), {}};
    for (const auto& s : j["F"].at("steps")) m.F.steps.push_back(detail::subspace_from_json(s, m.rank));
    return m;
}

/// {"weight", "N", "S", "F0": {"lo", "steps"}}.
inline NilpotentOrbitData orbit_from_json(const nlohmann::json& j) {
    NilpotentOrbitData d;
    d.weight = j.at("weight").get<int>();
    d.N = rational_matrix_from_json(j.at("N"));
    d.S = rational_matrix_from_json(j.at("S"));
    d.rank = d.N.rows();
    d.F0 = {d.rank, j.at("F0").at("lo").get<int>(), {}};
    for (const auto& s : j["F0"].at("steps")) {
        auto sub = detail::subspace_from_json(s, d.rank);
        d.F0.steps.push_back(sub.dim() ? Subspace<cdouble>::span_rows(to_cdouble(sub.basis())) : Subspace<cdouble>(d.rank));
    }
    return d;
}

}  // namespace periods
