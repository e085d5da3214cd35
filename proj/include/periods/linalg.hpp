#pragma once

// Gaussian elimination and subspace arithmetic over the fields in
// matrix.hpp.  Exact fields give canonical reduced echelon forms, so subspace
// equality is matrix equality; floating fields use a relative tolerance.

#include "periods/matrix.hpp"

#include <optional>
#include <utility>

namespace periods {

template <class T>
double default_tolerance() {
    if constexpr (field_traits<T>::exact)
        return 0.0;
    else
        return field_traits<T>::default_tol;
}

template <class T>
struct Echelon {
    Matrix<T> rows;                   // nonzero rows only, reduced
    std::vector<std::size_t> pivots;  // pivot column per row
};

template <class T>
Echelon<T> rref(Matrix<T> m, double tol = default_tolerance<T>()) {
    using F = field_traits<T>;
    const std::size_t R = m.rows(), C = m.cols();
    double scale = 0;
    if constexpr (!F::exact) {
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t c = 0; c < C; ++c) scale = std::max(scale, F::magnitude(m(r, c)));
        if (scale == 0) scale = 1;
    }
    const double thresh = tol * scale;
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < C && lead < R; ++c) {
        std::size_t best = R;
        if constexpr (F::exact) {
            for (std::size_t r = lead; r < R; ++r)
                if (!F::is_zero(m(r, c))) {
                    best = r;
                    break;
                }
        } else {
            double bm = thresh;
            for (std::size_t r = lead; r < R; ++r) {
                double mag = F::magnitude(m(r, c));
                if (mag > bm) {
                    bm = mag;
                    best = r;
                }
            }
        }
        if (best == R) {
            if constexpr (!F::exact)
                for (std::size_t r = lead; r < R; ++r) m(r, c) = F::zero();
            continue;
        }
        if (best != lead)
            for (std::size_t k = 0; k < C; ++k) std::swap(m(best, k), m(lead, k));
        T inv = F::one() / m(lead, c);
        for (std::size_t k = c; k < C; ++k) m(lead, k) *= inv;
        for (std::size_t r = 0; r < R; ++r) {
            if (r == lead || F::is_zero(m(r, c), 0)) continue;
            T f = m(r, c);
            for (std::size_t k = c; k < C; ++k) m(r, k) -= f * m(lead, k);
            if constexpr (!F::exact) m(r, c) = F::zero();
        }
        pivots.push_back(c);
        ++lead;
    }
    Matrix<T> out(pivots.size(), C);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t k = 0; k < C; ++k) out(r, k) = m(r, k);
    return {std::move(out), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& m, double tol = default_tolerance<T>()) {
    return rref(m, tol).pivots.size();
}

/// Rows of the result span { x : m x = 0 }.
template <class T>
Matrix<T> nullspace(const Matrix<T>& m, double tol = default_tolerance<T>()) {
    using F = field_traits<T>;
    auto e = rref(m, tol);
    const std::size_t C = m.cols();
    std::vector<bool> is_pivot(C, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Matrix<T> out(C - e.pivots.size(), C);
    std::size_t k = 0;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_pivot[f]) continue;
        out(k, f) = F::one();
        for (std::size_t r = 0; r < e.pivots.size(); ++r) out(k, e.pivots[r]) = -e.rows(r, f);
        ++k;
    }
    return out;
}

/// Solves a x = b for column vector x, or nullopt if inconsistent.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b,
                                    double tol = default_tolerance<T>()) {
    auto e = rref(hcat(a, Matrix<T>::column(b)), tol);
    const std::size_t n = a.cols();
    std::vector<T> x(n, field_traits<T>::zero());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == n) return std::nullopt;
        x[e.pivots[r]] = e.rows(r, n);
    }
    return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, double tol = default_tolerance<T>()) {
    if (!a.square()) throw InputError("inverse of non-square matrix");
    const std::size_t n = a.rows();
    auto e = rref(hcat(a, Matrix<T>::identity(n)), tol);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw InputError("singular matrix");
    Matrix<T> inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.rows(r, n + c);
    return inv;
}

/// Subspace of T^n held as a reduced echelon basis (rows).
template <class T>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient, double tol = default_tolerance<T>())
        : n_(ambient), basis_(0, ambient), tol_(tol) {}

    static Subspace span_rows(const Matrix<T>& rows, double tol = default_tolerance<T>()) {
        Subspace s(rows.cols(), tol);
        auto e = rref(rows, tol);
        s.basis_ = std::move(e.rows);
        s.pivots_ = std::move(e.pivots);
        return s;
    }
    static Subspace span_columns(const Matrix<T>& cols, double tol = default_tolerance<T>()) {
        return span_rows(cols.transpose(), tol);
    }
    static Subspace span(std::size_t ambient, const std::vector<std::vector<T>>& vs,
                         double tol = default_tolerance<T>()) {
        Matrix<T> m(vs.size(), ambient);
        for (std::size_t r = 0; r < vs.size(); ++r) {
            if (vs[r].size() != ambient) throw InputError("vector length mismatch");
            for (std::size_t c = 0; c < ambient; ++c) m(r, c) = vs[r][c];
        }
        return vs.empty() ? Subspace(ambient, tol) : span_rows(m, tol);
    }
    static Subspace full(std::size_t ambient, double tol = default_tolerance<T>()) {
        return span_rows(Matrix<T>::identity(ambient), tol);
    }

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return basis_.rows(); }
    double tolerance() const { return tol_; }
    const Matrix<T>& basis() const { return basis_; }
    Matrix<T> basis_columns() const { return basis_.transpose(); }
    std::vector<std::vector<T>> vectors() const {
        std::vector<std::vector<T>> out;
        for (std::size_t r = 0; r < dim(); ++r) out.push_back(basis_.row(r));
        return out;
    }

    /// Component of v outside the span (zero iff v is contained).
    std::vector<T> residual(std::vector<T> v) const {
        for (std::size_t r = 0; r < dim(); ++r) {
            T f = v[pivots_[r]];
            if (field_traits<T>::is_zero(f, 0)) continue;
            for (std::size_t c = 0; c < n_; ++c) v[c] -= f * basis_(r, c);
        }
        return v;
    }

    bool contains(const std::vector<T>& v) const {
        if (v.size() != n_) throw InputError("vector length mismatch");
        auto res = residual(v);
        if constexpr (field_traits<T>::exact) {
            for (const auto& x : res)
                if (!field_traits<T>::is_zero(x)) return false;
            return true;
        } else {
            double vn = 0, rn = 0;
            for (const auto& x : v) vn = std::max(vn, field_traits<T>::magnitude(x));
            for (const auto& x : res) rn = std::max(rn, field_traits<T>::magnitude(x));
            return rn <= tol_ * std::max(1.0, vn);
        }
    }

    bool subset_of(const Subspace& o) const {
        check(o);
        for (std::size_t r = 0; r < dim(); ++r)
            if (!o.contains(basis_.row(r))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.n_ == b.n_ && a.dim() == b.dim() && a.subset_of(b);
    }

    friend Subspace operator+(const Subspace& a, const Subspace& b) {
        a.check(b);
        return span_rows(vcat(a.basis_, b.basis_), std::max(a.tol_, b.tol_));
    }

    /// Rows spanning { y : <u, y> = 0 for all u } under the bilinear pairing.
    Matrix<T> annihilator() const {
        if (dim() == 0) return Matrix<T>::identity(n_);
        return nullspace(basis_, tol_);
    }

    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        a.check(b);
        double tol = std::max(a.tol_, b.tol_);
        Matrix<T> eqs = vcat(a.annihilator(), b.annihilator());
        if (eqs.rows() == 0) return full(a.n_, tol);
        return span_rows(nullspace(eqs, tol), tol);
    }

    /// { m x : x in this } for a linear map acting on column vectors.
    Subspace image(const Matrix<T>& m) const {
        if (m.cols() != n_) throw InputError("image: dimension mismatch");
        if (dim() == 0) return Subspace(m.rows(), tol_);
        return span_columns(m * basis_columns(), tol_);
    }

    /// { x : m x in target }.
    static Subspace preimage(const Matrix<T>& m, const Subspace& target) {
        if (m.rows() != target.n_) throw InputError("preimage: dimension mismatch");
        if (target.dim() == target.n_) return full(m.cols(), target.tol_);
        return span_rows(nullspace(target.annihilator() * m, target.tol_), target.tol_);
    }

    Subspace conj() const { return span_rows(basis_.conj(), tol_); }

    /// Vectors of this space completing a basis of `sub` (which must lie inside).
    Matrix<T> complement_of(const Subspace& sub) const {
        check(sub);
        Subspace acc = sub;
        std::vector<std::vector<T>> extra;
        for (std::size_t r = 0; r < dim(); ++r) {
            auto v = basis_.row(r);
            if (acc.contains(v)) continue;
            extra.push_back(v);
            acc = acc + span(n_, std::vector<std::vector<T>>{v}, tol_);
        }
        Matrix<T> out(extra.size(), n_);
        for (std::size_t r = 0; r < extra.size(); ++r)
            for (std::size_t c = 0; c < n_; ++c) out(r, c) = extra[r][c];
        return out;
    }

private:
    void check(const Subspace& o) const {
        if (n_ != o.n_) throw InputError("subspaces live in different ambient spaces");
    }

    std::size_t n_ = 0;
    Matrix<T> basis_;
    std::vector<std::size_t> pivots_;
    double tol_ = default_tolerance<T>();
};

using RationalSubspace = Subspace<Rational>;

}  // namespace periods
