#pragma once

// Dense matrices over an arbitrary field, with field traits that tell the
// elimination routines whether zero tests are exact or tolerance-based.

#include "periods/scalar.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace periods {

template <class T>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return 0; }
    static Rational one() { return 1; }
    static bool is_zero(const Rational& x, double = 0) { return x == 0; }
    static double magnitude(const Rational& x) { return abs(x).convert_to<double>(); }
    static Rational conj(const Rational& x) { return x; }
};

template <>
struct field_traits<GaussianRational> {
    static constexpr bool exact = true;
    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {1}; }
    static bool is_zero(const GaussianRational& x, double = 0) { return x.is_zero(); }
    static double magnitude(const GaussianRational& x) {
        return std::sqrt(x.norm().convert_to<double>());
    }
    static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
};

template <>
struct field_traits<std::complex<double>> {
    static constexpr bool exact = false;
    static constexpr double default_tol = 1e-8;
    static std::complex<double> zero() { return {}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static bool is_zero(const std::complex<double>& x, double tol) { return std::abs(x) <= tol; }
    static double magnitude(const std::complex<double>& x) { return std::abs(x); }
    static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
};

template <>
struct field_traits<Complex> {
    static constexpr bool exact = false;
    static constexpr double default_tol = 1e-20;
    static Complex zero() { return {}; }
    static Complex one() { return {1}; }
    static bool is_zero(const Complex& x, double tol) { return x.abs() <= tol; }
    static double magnitude(const Complex& x) { return x.abs().convert_to<double>(); }
    static Complex conj(const Complex& x) { return x.conj(); }
};

/// Row-major dense matrix.  Column vectors are n x 1 matrices.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, field_traits<T>::zero()) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw InputError("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field_traits<T>::one();
        return m;
    }

    static Matrix column(const std::vector<T>& v) {
        Matrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> row(std::size_t r) const {
        return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
    }
    std::vector<T> col(std::size_t c) const {
        std::vector<T> v;
        v.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
        return v;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix conj() const {
        Matrix m = *this;
        for (auto& x : m.data_) x = field_traits<T>::conj(x);
        return m;
    }

    Matrix adjoint() const { return conj().transpose(); }

    bool is_zero(double tol = 0) const {
        for (const auto& x : data_)
            if (!field_traits<T>::is_zero(x, tol)) return false;
        return true;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& x : m.data_) x = -x;
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (field_traits<T>::is_zero(aik, 0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Largest absolute row sum.
    double norm_inf() const {
        double best = 0;
        for (std::size_t r = 0; r < rows_; ++r) {
            double s = 0;
            for (std::size_t c = 0; c < cols_; ++c) s += field_traits<T>::magnitude((*this)(r, c));
            best = std::max(best, s);
        }
        return best;
    }

    template <class U, class F>
    Matrix<U> map(F&& f) const {
        Matrix<U> m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = f((*this)(r, c));
        return m;
    }

    /// Horizontal concatenation [a | b].
    friend Matrix hcat(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) throw InputError("hcat row mismatch");
        Matrix m(a.rows_, a.cols_ + b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
            for (std::size_t c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
        }
        return m;
    }

    /// Vertical concatenation.
    friend Matrix vcat(const Matrix& a, const Matrix& b) {
        if (a.rows_ == 0) return b;
        if (b.rows_ == 0) return a;
        if (a.cols_ != b.cols_) throw InputError("vcat column mismatch");
        Matrix m(a.rows_ + b.rows_, a.cols_);
        std::copy(a.data_.begin(), a.data_.end(), m.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(), m.data_.begin() + a.data_.size());
        return m;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned k) {
    Matrix<T> r = Matrix<T>::identity(m.rows());
    for (unsigned i = 0; i < k; ++i) r = r * m;
    return r;
}

template <class T>
std::vector<T> apply(const Matrix<T>& m, const std::vector<T>& v) {
    return (m * Matrix<T>::column(v)).col(0);
}

inline Matrix<Complex> to_complex(const Matrix<Rational>& m, unsigned digits) {
    WorkingPrecision wp(digits);
    return m.map<Complex>([](const Rational& q) {
        return Complex(Real(numerator(q)) / Real(denominator(q)));
    });
}

inline Matrix<std::complex<double>> to_cdouble(const Matrix<Rational>& m) {
    return m.map<std::complex<double>>(
        [](const Rational& q) { return std::complex<double>(q.convert_to<double>(), 0.0); });
}

inline Matrix<std::complex<double>> to_cdouble(const Matrix<GaussianRational>& m) {
    return m.map<std::complex<double>>([](const GaussianRational& q) { return to_cdouble(q); });
}

inline Matrix<GaussianRational> to_gaussian(const Matrix<Rational>& m) {
    return m.map<GaussianRational>([](const Rational& q) { return GaussianRational(q); });
}

inline std::string to_string(const Matrix<Rational>& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r ? "; " : "");
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << to_string(m(r, c));
    }
    os << ']';
    return os.str();
}

/// Row-major array of rational strings "p/q" (integers and decimals accepted).
inline nlohmann::json to_json(const Matrix<Rational>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Rational rational_from_json(const nlohmann::json& x) {
    if (x.is_string()) return parse_rational(x.get<std::string>());
    if (x.is_number_integer()) return Rational(x.get<long long>());
    if (x.is_number()) return parse_rational(x.dump());
    throw InputError("matrix entry must be a number or a rational string");
}

inline Matrix<Rational> rational_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw InputError("matrix JSON must be an array of rows");
    std::size_t cols = j.empty() ? 0 : j[0].size();
    Matrix<Rational> m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError("ragged matrix JSON");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
    }
    return m;
}

}  // namespace periods
