#pragma once

// Regular singular systems t v'(t) = v(t) A(t) with nilpotent A(0).
//
// v is a row vector and matrices act on the right.  Solutions have the form
// v(t) = v0 t^{A0} P(t) with P(0) = I; substituting gives
//   (n + ad_{A0}) P_n = sum_{j=1}^{n} P_{n-j} A_j,   ad_{A0}(X) = A0 X - X A0.
// The transpose dictionary for column vectors is A -> A^T, P -> P^T.

#include "periods/linalg.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <string>
#include <vector>

namespace periods {

/// Truncated matrix power series A0 + A1 t + ... + AM t^M.
class MatrixSeries {
public:
    MatrixSeries() = default;
    explicit MatrixSeries(std::vector<Matrix<Rational>> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw InputError("matrix series needs at least one coefficient");
        for (const auto& m : c_)
            if (!m.square() || m.rows() != c_[0].rows()) throw InputError("matrix series coefficients must be square of one size");
    }

    std::size_t dim() const { return c_.front().rows(); }
    unsigned order() const { return static_cast<unsigned>(c_.size()) - 1; }
    const Matrix<Rational>& operator[](std::size_t n) const { return c_.at(n); }
    /// Coefficient n, or zero beyond the stored order.
    Matrix<Rational> coeff(std::size_t n) const { return n < c_.size() ? c_[n] : Matrix<Rational>(dim(), dim()); }
    const std::vector<Matrix<Rational>>& coeffs() const { return c_; }

    /// Same series padded with zeros (or truncated) to order M.
    MatrixSeries with_order(unsigned M) const {
        std::vector<Matrix<Rational>> c;
        for (unsigned n = 0; n <= M; ++n) c.push_back(coeff(n));
        return MatrixSeries(std::move(c));
    }

    friend bool operator==(const MatrixSeries& a, const MatrixSeries& b) { return a.c_ == b.c_; }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& m : c_) arr.push_back(periods::to_json(m));
        return {{"coefficients", arr}};
    }
    /// {"coefficients": [A0, A1, ...]} with matrices as rows of rational strings.
    static MatrixSeries from_json(const nlohmann::json& j) {
        if (!j.contains("coefficients")) throw InputError("system JSON needs \"coefficients\"");
        std::vector<Matrix<Rational>> c;
        for (const auto& m : j.at("coefficients")) c.push_back(rational_matrix_from_json(m));
        return MatrixSeries(std::move(c));
    }

private:
    std::vector<Matrix<Rational>> c_;
};

namespace detail {

inline Matrix<Rational> ad(const Matrix<Rational>& a, const Matrix<Rational>& x) { return a * x - x * a; }

/// Smallest d with ad_{a}^d = 0 on End V (bounded by 2 * nilpotency index - 1).
inline unsigned ad_nilpotency(const Matrix<Rational>& a) {
    const std::size_t n = a.rows();
    for (unsigned d = 0;; ++d) {
        bool zero = true;
        for (std::size_t i = 0; i < n && zero; ++i)
            for (std::size_t j = 0; j < n && zero; ++j) {
                Matrix<Rational> e(n, n);
                e(i, j) = 1;
                for (unsigned r = 0; r < d; ++r) e = ad(a, e);
                zero = e.is_zero();
            }
        if (zero) return d;
        if (d > 2 * n) throw InputError("A0 is not nilpotent");
    }
}

inline void require_nilpotent(const Matrix<Rational>& a0) {
    auto p = power(a0, static_cast<unsigned>(a0.rows()));
    if (!p.is_zero()) throw InputError("A0 is not nilpotent: A0^" + std::to_string(a0.rows()) + " != 0");
}

}  // namespace detail

/// The log exponent in the regularized-limit bound: the smallest d with ad_{A0}^{d+1} = 0.
inline unsigned limit_log_power(const Matrix<Rational>& a0) {
    unsigned d = detail::ad_nilpotency(a0);
    return d == 0 ? 0 : d - 1;
}

/// P with P0 = I through order M, using (n + ad)^{-1} = sum_m (-1)^m ad^m / n^{m+1}.
/// A is padded with zeros past its stored order.
inline MatrixSeries regularize(const MatrixSeries& A, unsigned order = 10) {
    const auto& a0 = A[0];
    detail::require_nilpotent(a0);
    const std::size_t n = A.dim();
    const unsigned depth = detail::ad_nilpotency(a0);
    std::vector<Matrix<Rational>> P{Matrix<Rational>::identity(n)};
    for (unsigned k = 1; k <= order; ++k) {
        Matrix<Rational> rhs(n, n);
        for (unsigned j = 1; j <= k && j <= A.order(); ++j) rhs += P[k - j] * A[j];
        Matrix<Rational> term = rhs * Rational(1, k);
        Matrix<Rational> sum = term;
        for (unsigned m = 1; m < depth; ++m) {
            term = detail::ad(a0, term) * Rational(-1, k);
            sum += term;
        }
        P.push_back(std::move(sum));
    }
    return MatrixSeries(std::move(P));
}

/// Same recursion solved as a dense linear system (n I + A0 (x) I - I (x) A0^T) vec P = vec rhs.
inline MatrixSeries regularize_dense(const MatrixSeries& A, unsigned order = 10) {
    const auto& a0 = A[0];
    detail::require_nilpotent(a0);
    const std::size_t n = A.dim(), nn = n * n;
    std::vector<Matrix<Rational>> P{Matrix<Rational>::identity(n)};
    for (unsigned k = 1; k <= order; ++k) {
        Matrix<Rational> rhs(n, n);
        for (unsigned j = 1; j <= k && j <= A.order(); ++j) rhs += P[k - j] * A[j];
        Matrix<Rational> L(nn, nn);
        std::vector<Rational> b(nn);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t row = i * n + j;
                b[row] = rhs(i, j);
                L(row, row) += k;
                for (std::size_t m = 0; m < n; ++m) {
                    L(row, m * n + j) += a0(i, m);  // (A0 X)_{ij}
                    L(row, i * n + m) -= a0(m, j);  // (X A0)_{ij}
                }
            }
        auto x = solve(L, b);
        if (!x) throw std::logic_error("singular Sylvester system");
        Matrix<Rational> Pk(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) Pk(i, j) = (*x)[i * n + j];
        P.push_back(std::move(Pk));
    }
    return MatrixSeries(std::move(P));
}

/// D(t) = t P'(t) + A0 P(t) - P(t) A(t) through order M; the defect of
/// v0 t^{A0} P(t) in the ODE is v0 t^{A0} D(t).
inline MatrixSeries ode_defect(const MatrixSeries& A, const MatrixSeries& P) {
    const unsigned M = P.order();
    std::vector<Matrix<Rational>> D;
    for (unsigned k = 0; k <= M; ++k) {
        Matrix<Rational> d = P[k] * Rational(k) + A[0] * P[k];
        for (unsigned j = 0; j <= k && j <= A.order(); ++j) d -= P[k - j] * A[j];
        D.push_back(std::move(d));
    }
    return MatrixSeries(std::move(D));
}

// --- numerical evaluation --------------------------------------------------

namespace detail {

inline Matrix<Complex> scale(Matrix<Complex> m, const Complex& s) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) *= s;
    return m;
}

/// exp(s X) for nilpotent X (finite sum).
inline Matrix<Complex> nilpotent_exp(const Matrix<Complex>& x, const Complex& s) {
    const std::size_t n = x.rows();
    Matrix<Complex> result = Matrix<Complex>::identity(n);
    Matrix<Complex> term = result;
    for (std::size_t j = 1; j <= n; ++j) {
        term = scale(term * x, s / Complex(static_cast<long>(j)));
        result += term;
    }
    return result;
}

inline Matrix<Complex> row_vector(const std::vector<Complex>& v) {
    Matrix<Complex> m(1, v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
    return m;
}

}  // namespace detail

/// t^{A0} = exp(log(t) A0) on the principal branch plus `branch` turns.
inline Matrix<Complex> t_power(const Matrix<Rational>& a0, const Complex& t, unsigned digits, long branch = 0) {
    WorkingPrecision wp(digits);
    Complex lt = log(t);
    if (branch) lt += Complex(Real(0), 2 * real_pi(digits) * branch);
    return detail::nilpotent_exp(to_complex(a0, digits), lt);
}

/// P(t) as the truncated sum.
inline Matrix<Complex> evaluate(const MatrixSeries& P, const Complex& t, unsigned digits) {
    WorkingPrecision wp(digits);
    const std::size_t n = P.dim();
    Matrix<Complex> acc(n, n);
    for (unsigned k = P.order() + 1; k-- > 0;) acc = detail::scale(acc, t) + to_complex(P[k], digits);
    return acc;
}

struct MonodromyLog {
    Matrix<Complex> N;         // P(t)^{-1} A0 P(t)
    Real remainder_bound;      // ||P_M|| |t|^M, the last computed term
    bool warning = false;
    std::string message;
};

inline MonodromyLog monodromy_log(const MatrixSeries& A, const Complex& t, unsigned digits, double tol = 1e-10,
                                  unsigned order = 10) {
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    auto P = regularize(A, order);
    auto Pt = evaluate(P, t, work);
    MonodromyLog out;
    out.N = inverse(Pt, 0.0) * to_complex(A[0], work) * Pt;
    out.remainder_bound = Real(P[P.order()].norm_inf()) * boost::multiprecision::pow(t.abs(), Real(P.order()));
    if (out.remainder_bound > tol) {
        out.warning = true;
        out.message = "|t| too large for order " + std::to_string(P.order()) + ": remainder estimate " +
                      to_scientific(out.remainder_bound, 3);
    }
    return out;
}

/// v0 t^{A0} P(t) for a row vector v0.
inline std::vector<Complex> solution(const std::vector<Rational>& v0, const MatrixSeries& P, const Matrix<Rational>& a0,
                                     const Complex& t, unsigned digits) {
    WorkingPrecision wp(digits);
    std::vector<Complex> v;
    for (const auto& x : v0) v.push_back(Complex::from_rational(x, 0, digits));
    auto m = detail::row_vector(v) * t_power(a0, t, digits) * evaluate(P, t, digits);
    return m.row(0);
}

struct RaySample {
    Real abs_t;
    Real residual;  // || v(t) t^{-A0} - v0 ||
    Real scaled;    // residual / (|t| log^k (1/|t|))
};

struct RegularizedLimit {
    std::vector<Complex> estimate;  // v(t) t^{-A0} at the smallest sample
    std::vector<RaySample> samples;
    unsigned log_power = 0;      // k used for the scaled residuals
    unsigned max_log_power = 0;  // ad-nilpotency bound on k
    Real fitted_c;               // largest scaled residual
    Real spread = 1;             // largest / smallest scaled residual
    bool decreasing = true;
    bool stable = true;          // spread <= 2
    bool exact = false;          // every residual is at rounding level
    bool ok = true;
    std::string message;
};

namespace detail {

inline void fill_scaled(RegularizedLimit& out, unsigned k) {
    out.log_power = k;
    Real lo = -1, hi = 0;
    for (auto& s : out.samples) {
        Real L = -boost::multiprecision::log(s.abs_t);
        s.scaled = s.residual / (s.abs_t * boost::multiprecision::pow(L, Real(k)));
        lo = lo < 0 ? s.scaled : std::min(lo, s.scaled);
        hi = std::max(hi, s.scaled);
    }
    out.fitted_c = hi;
    out.spread = lo > 0 ? Real(hi / lo) : Real(std::numeric_limits<double>::infinity());
}

}  // namespace detail

/// Evaluates v(t) t^{-A0} along t = r e^{2 pi i angle} for the given radii (decreasing).
/// With log_power < 0 the exponent k in |t| log^k(1/|t|) is fitted: the k in
/// [0, max_log_power] whose scaled residuals have the smallest spread.
inline RegularizedLimit regularized_limit(const std::vector<Rational>& v0, const MatrixSeries& A, const Real& angle_turns,
                                          const std::vector<Real>& radii, unsigned digits, int log_power = -1,
                                          unsigned order = 10) {
    if (v0.size() != A.dim()) throw InputError("v0 has the wrong length");
    if (radii.empty()) throw InputError("no sample radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] >= radii[i - 1]) throw InputError("sample radii must decrease");
    if (radii.front() >= 1 || radii.back() <= 0) throw InputError("sample radii must lie in (0, 1)");
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    auto P = regularize(A, order);
    RegularizedLimit out;
    out.max_log_power = limit_log_power(A[0]);
    Complex dir = unit_root(angle_turns);
    std::vector<Complex> v0c;
    for (const auto& x : v0) v0c.push_back(Complex::from_rational(x, 0, work));
    const auto a0 = to_complex(A[0], work);
    out.samples.resize(radii.size());
    std::vector<std::vector<Complex>> regs(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        WorkingPrecision local(work);
        Complex t = dir * radii[i];
        auto v = solution(v0, P, A[0], t, work);
        auto tinv = detail::nilpotent_exp(a0, -log(t));
        regs[i] = (detail::row_vector(v) * tinv).row(0);
        Real res = 0;
        for (std::size_t c = 0; c < regs[i].size(); ++c) res += (regs[i][c] - v0c[c]).abs();
        out.samples[i] = {radii[i], res, Real(0)};
    }
    out.estimate = regs.back();

    Real noise = pow10_real(-static_cast<long>(digits), work);
    out.exact = true;
    for (const auto& s : out.samples) out.exact = out.exact && s.residual <= noise;
    for (std::size_t i = 1; i < out.samples.size(); ++i)
        if (out.samples[i].residual > out.samples[i - 1].residual) out.decreasing = false;
    if (out.exact) {
        out.decreasing = true;
        out.log_power = log_power < 0 ? 0 : static_cast<unsigned>(log_power);
        out.fitted_c = 0;
        out.spread = 1;
        return out;
    }
    if (log_power >= 0) {
        detail::fill_scaled(out, static_cast<unsigned>(log_power));
    } else {
        unsigned best = 0;
        Real best_spread = -1;
        for (unsigned k = 0; k <= out.max_log_power; ++k) {
            detail::fill_scaled(out, k);
            if (best_spread < 0 || out.spread < best_spread) {
                best = k;
                best_spread = out.spread;
            }
        }
        detail::fill_scaled(out, best);
    }
    out.stable = out.spread <= 2;
    if (!out.decreasing) {
        out.ok = false;
        out.message = "residuals do not decrease along the ray";
    } else if (!out.stable) {
        out.ok = false;
        out.message = "fitted constant varies by a factor " + to_scientific(out.spread, 3) + " across samples";
    }
    return out;
}

struct ConnectionResidue {
    Matrix<Rational> residue;  // -A0, the residue of d - N dt/t at 0
    MatrixSeries frame_change;  // P(t): Deligne frame versus the given trivialization
};

inline ConnectionResidue connection_residue(const MatrixSeries& A, unsigned order = 10) {
    return {-A[0], regularize(A, order)};
}

/// The system for w = v g: t w' = w g^{-1} A g.
inline MatrixSeries gauge_transform(const MatrixSeries& A, const Matrix<Rational>& g) {
    auto gi = inverse(g);
    std::vector<Matrix<Rational>> c;
    for (const auto& m : A.coeffs()) c.push_back(gi * m * g);
    return MatrixSeries(std::move(c));
}

// --- numerical ODE oracles (double precision RK4) ---------------------------

namespace detail {

using cd = std::complex<double>;

inline std::vector<cd> rowmul(const std::vector<cd>& v, const std::vector<std::vector<cd>>& m) {
    std::vector<cd> r(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i) r[j] += v[i] * m[i][j];
    return r;
}

inline std::vector<std::vector<cd>> eval_double(const MatrixSeries& A, cd t) {
    const std::size_t n = A.dim();
    std::vector<std::vector<cd>> m(n, std::vector<cd>(n));
    for (unsigned k = A.order() + 1; k-- > 0;)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = m[i][j] * t + A[k](i, j).convert_to<double>();
    return m;
}

// RK4 for dv/ds = v F(s).
template <class F>
std::vector<cd> rk4(std::vector<cd> v, double s0, double s1, unsigned steps, F&& field) {
    const double h = (s1 - s0) / steps;
    auto axpy = [](const std::vector<cd>& a, const std::vector<cd>& b, cd c) {
        std::vector<cd> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
        return r;
    };
    for (unsigned k = 0; k < steps; ++k) {
        double s = s0 + k * h;
        auto k1 = rowmul(v, field(s));
        auto k2 = rowmul(axpy(v, k1, h / 2), field(s + h / 2));
        auto k3 = rowmul(axpy(v, k2, h / 2), field(s + h / 2));
        auto k4 = rowmul(axpy(v, k3, h), field(s + h));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return v;
}

inline std::vector<cd> to_cd(const std::vector<Complex>& v) {
    std::vector<cd> r;
    for (const auto& z : v) r.push_back(to_cdouble(z));
    return r;
}

}  // namespace detail

/// Integrates t v' = v A(t) on the real axis from t0 to t1 (in log t) starting
/// from the series solution at t0, and returns the largest deviation from the
/// series solution at t1.
inline double ode_oracle_deviation(const std::vector<Rational>& v0, const MatrixSeries& A, double t0, double t1,
                                   unsigned steps = 4000) {
    auto P = regularize(A, 40);
    const unsigned work = 40;
    WorkingPrecision wp(work);
    auto start = detail::to_cd(solution(v0, P, A[0], Complex(Real(t0)), work));
    auto end = detail::to_cd(solution(v0, P, A[0], Complex(Real(t1)), work));
    auto v = detail::rk4(start, std::log(t0), std::log(t1), steps,
                         [&](double s) { return detail::eval_double(A, std::exp(s)); });
    double dev = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dev = std::max(dev, std::abs(v[i] - end[i]));
    return dev;
}

/// Continues v counterclockwise once around |t| = r (dv/dtheta = i v A(t)) and
/// compares with v exp(2 pi i N(t)); returns the largest deviation.
inline double circle_monodromy_deviation(const std::vector<Rational>& v0, const MatrixSeries& A, double r,
                                         unsigned steps = 4000) {
    const unsigned work = 40;
    WorkingPrecision wp(work);
    auto P = regularize(A, 40);
    Complex t{Real(r)};
    auto v = solution(v0, P, A[0], t, work);
    auto N = monodromy_log(A, t, work, 1e-10, 40).N;
    Complex two_pi_i(Real(0), 2 * real_pi(work));
    auto expected = (detail::row_vector(v) * detail::nilpotent_exp(N, two_pi_i)).row(0);
    const detail::cd I(0, 1);
    auto got = detail::rk4(detail::to_cd(v), 0.0, 2 * M_PI, steps, [&](double th) {
        auto m = detail::eval_double(A, r * std::exp(I * th));
        for (auto& row : m)
            for (auto& x : row) x *= I;
        return m;
    });
    auto exp_cd = detail::to_cd(expected);
    double dev = 0;
    for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - exp_cd[i]));
    return dev;
}

}  // namespace periods
