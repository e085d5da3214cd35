#pragma once

// Transport of the KZ series T along paths in C - {0,1}.
//
// T is the solution of dT = T (X0 dz/z + X1 dz/(1-z)) with T(start) = 1, so
// the coefficient of a word is the iterated integral with the first letter
// innermost, and T(a then b) = T(a) T(b).  Paths are polygonal after arcs
// are replaced by inscribed chords; each segment is walked with local power
// series steps of length at most half the distance to {0,1}.

#include "periods/freealg.hpp"
#include "periods/linalg.hpp"
#include "periods/mzv.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <variant>
#include <vector>

namespace periods {

struct PathSegment {
    Complex from, to;
};

/// Circular arc c + r e^{2 pi i theta}, theta from `from_turns` to `to_turns`.
struct PathArc {
    Complex center;
    Real radius;
    Real from_turns, to_turns;
};

using PathPiece = std::variant<PathSegment, PathArc>;

inline Complex arc_point(const PathArc& a, const Real& turns) { return a.center + unit_root(turns) * a.radius; }

inline Complex piece_start(const PathPiece& p) {
    if (auto s = std::get_if<PathSegment>(&p)) return s->from;
    const auto& a = std::get<PathArc>(p);
    return arc_point(a, a.from_turns);
}

inline Complex piece_end(const PathPiece& p) {
    if (auto s = std::get_if<PathSegment>(&p)) return s->to;
    const auto& a = std::get<PathArc>(p);
    return arc_point(a, a.to_turns);
}

namespace detail {

/// Distance from s to the segment [a,b].
inline Real segment_distance(const Complex& a, const Complex& b, const Complex& s) {
    Complex d = b - a;
    Real len2 = d.norm();
    if (len2 == 0) return (s - a).abs();
    Complex rel = s - a;
    Real t = (rel.real() * d.real() + rel.imag() * d.imag()) / len2;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    return (s - (a + d * t)).abs();
}

inline const std::vector<Complex>& singular_points() {
    static const std::vector<Complex> pts{Complex(0), Complex(1)};
    return pts;
}

}  // namespace detail

class PathSpec {
public:
    PathSpec() = default;

    /// The real segment [a,b] inside (0,1).
    static PathSpec real_segment(const Real& a, const Real& b) {
        if (a <= 0 || a >= 1 || b <= 0 || b >= 1) throw InputError("real segment must lie in (0,1)");
        PathSpec p;
        p.add_segment(Complex(a), Complex(b));
        return p;
    }

    PathSpec& add_segment(const Complex& from, const Complex& to) {
        pieces_.emplace_back(PathSegment{from, to});
        return *this;
    }
    PathSpec& add_arc(const Complex& center, const Real& radius, const Real& from_turns, const Real& to_turns) {
        if (radius <= 0) throw InputError("arc radius must be positive");
        pieces_.emplace_back(PathArc{center, radius, from_turns, to_turns});
        return *this;
    }
    /// Appends a segment from the current end point.
    PathSpec& line_to(const Complex& to) { return add_segment(end(), to); }

    const std::vector<PathPiece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    Complex start() const {
        if (empty()) throw InputError("empty path");
        return piece_start(pieces_.front());
    }
    Complex end() const {
        if (empty()) throw InputError("empty path");
        return piece_end(pieces_.back());
    }

    /// First this path, then `o`.
    PathSpec then(const PathSpec& o) const {
        PathSpec r = *this;
        r.pieces_.insert(r.pieces_.end(), o.pieces_.begin(), o.pieces_.end());
        return r;
    }

    PathSpec reversed() const {
        PathSpec r;
        for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
            if (auto s = std::get_if<PathSegment>(&*it))
                r.add_segment(s->to, s->from);
            else {
                const auto& a = std::get<PathArc>(*it);
                r.add_arc(a.center, a.radius, a.to_turns, a.from_turns);
            }
        }
        return r;
    }

    /// Throws InputError if a piece meets 0 or 1 or consecutive pieces do
    /// not share end points (relative tolerance `tol`).
    void validate(double tol = 1e-20) const {
        if (empty()) throw InputError("empty path");
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (i > 0) {
                Complex gap = piece_end(pieces_[i - 1]) - piece_start(pieces_[i]);
                Real scale = std::max(Real(1), piece_start(pieces_[i]).abs());
                if (gap.abs() > tol * scale)
                    throw InputError("path pieces " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                     " do not share an end point");
            }
            for (const auto& s : detail::singular_points()) {
                if (auto seg = std::get_if<PathSegment>(&pieces_[i])) {
                    if (detail::segment_distance(seg->from, seg->to, s) == 0)
                        throw InputError("path segment passes through a singular point");
                } else {
                    const auto& a = std::get<PathArc>(pieces_[i]);
                    if ((s - a.center).abs() == a.radius)
                        throw InputError("path arc passes through a singular point");
                }
            }
        }
    }

    /// Vertices of the polygonal replacement: arcs become chains of chords
    /// fine enough that no chord cuts off 0 or 1.
    std::vector<Complex> polygon() const {
        validate();
        std::vector<Complex> v{start()};
        for (const auto& p : pieces_) {
            if (auto s = std::get_if<PathSegment>(&p)) {
                v.push_back(s->to);
                continue;
            }
            const auto& a = std::get<PathArc>(p);
            Real span = a.to_turns - a.from_turns;
            long n = std::max(4L, static_cast<long>(std::ceil(abs(span).convert_to<double>() * 16)));
            while (!chords_clear(a, n)) {
                n *= 2;
                if (n > (1L << 20)) throw InputError("arc too close to a singular point");
            }
            for (long j = 1; j <= n; ++j) v.push_back(arc_point(a, a.from_turns + span * j / n));
        }
        return v;
    }

    /// True when every vertex and piece lies on the real axis.
    bool is_real() const {
        for (const auto& p : pieces_) {
            auto s = std::get_if<PathSegment>(&p);
            if (!s || s->from.imag() != 0 || s->to.imag() != 0) return false;
        }
        return true;
    }

    nlohmann::json to_json(unsigned digits = 40) const {
        auto cx = [&](const Complex& z) {
            return nlohmann::json::array({to_scientific(z.real(), digits), to_scientific(z.imag(), digits)});
        };
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pieces_) {
            if (auto s = std::get_if<PathSegment>(&p)) {
                arr.push_back({{"kind", "segment"}, {"from", cx(s->from)}, {"to", cx(s->to)}});
            } else {
                const auto& a = std::get<PathArc>(p);
                arr.push_back({{"kind", "arc"},
                               {"center", cx(a.center)},
                               {"radius", to_scientific(a.radius, digits)},
                               {"from_turns", to_scientific(a.from_turns, digits)},
                               {"to_turns", to_scientific(a.to_turns, digits)}});
            }
        }
        return {{"arcs", arr}};
    }

    /// Accepts {"segment": [a, b]} for a real segment or {"arcs": [...]}.
    /// Numbers may be JSON numbers or strings ("1/3", "0.25", "1e-6").
    static PathSpec from_json(const nlohmann::json& j, unsigned digits = 40) {
        auto real = [&](const nlohmann::json& x) {
            if (x.is_string()) return parse_real(x.get<std::string>(), digits);
            if (x.is_number()) return parse_real(x.dump(), digits);
            throw InputError("path coordinate must be a number or string");
        };
        auto cx = [&](const nlohmann::json& x) {
            if (x.is_array() && x.size() == 2) return Complex(real(x[0]), real(x[1]));
            WorkingPrecision wp(digits);
            return Complex(real(x), Real(0));
        };
        PathSpec p;
        if (j.contains("segment")) {
            const auto& s = j.at("segment");
            if (!s.is_array() || s.size() != 2) throw InputError("\"segment\" must be [a, b]");
            return real_segment(real(s[0]), real(s[1]));
        }
        if (!j.contains("arcs") || !j.at("arcs").is_array()) throw InputError("path JSON needs \"arcs\" or \"segment\"");
        for (const auto& a : j.at("arcs")) {
            std::string kind = a.value("kind", std::string("segment"));
            if (kind == "segment")
                p.add_segment(cx(a.at("from")), cx(a.at("to")));
            else if (kind == "arc")
                p.add_arc(cx(a.at("center")), real(a.at("radius")), real(a.at("from_turns")), real(a.at("to_turns")));
            else
                throw InputError("unknown arc kind '" + kind + "'");
        }
        p.validate(1e-12);
        return p;
    }

private:
    static bool chords_clear(const PathArc& a, long n) {
        Real span = a.to_turns - a.from_turns;
        Real half = abs(span) / (2 * n);
        Real depth = a.radius * boost::multiprecision::cos(2 * boost::math::constants::pi<Real>() * half);
        for (long j = 0; j < n; ++j) {
            Real mid = a.from_turns + span * (2 * j + 1) / (2 * n);
            Complex u = unit_root(mid);
            for (const auto& s : detail::singular_points()) {
                Complex rel = s - a.center;
                if (rel.abs() > a.radius) continue;
                Real along = rel.real() * u.real() + rel.imag() * u.imag();
                if (along >= depth) return false;
            }
        }
        return true;
    }

    std::vector<PathPiece> pieces_;
};

struct TransportOptions {
    double min_distance = 1e-40;  // closest allowed approach to 0 or 1
    unsigned long max_steps = 200000;
};

struct TransportStats {
    unsigned long steps = 0;
    unsigned long rejected = 0;
    unsigned order = 0;
};

namespace detail {

inline Real magnitude(const Real& x) { return abs(x); }
inline Real magnitude(const Complex& x) { return x.abs(); }

/// Dense-indexed coefficient vector walked along straight segments.
template <class Sc>
class Walker {
public:
    Walker(unsigned cutoff, unsigned work, const TransportOptions& opt)
        : cutoff_(cutoff), work_(work), opt_(opt), n_(Word::dense_size(cutoff)) {
        parent_.resize(n_);
        letter_.resize(n_);
        for (std::size_t i = 1; i < n_; ++i) {
            Word w = Word::from_dense_index(i);
            parent_[i] = w.prefix(w.size() - 1).dense_index();
            letter_[i] = w.back();
        }
        order_ = static_cast<unsigned>(std::ceil((work + 5) * 3.3219)) + 8 * cutoff + 20;
        eps_ = pow10_real(-static_cast<long>(work) + static_cast<long>(work / 6), work);
        state_.assign(n_, Sc(Real(0)));
        state_[0] = Sc(Real(1));
        coef_.assign(n_, std::vector<Sc>(order_ + 1, Sc(Real(0))));
    }

    const std::vector<Sc>& state() const { return state_; }
    const TransportStats& stats() const { return stats_; }

    void walk(const Sc& from, const Sc& to) {
        Sc z = from;
        for (;;) {
            Sc rest = to - z;
            Real remaining = magnitude(rest);
            if (remaining == 0) return;
            Real rho = std::min(magnitude(z), magnitude(Sc(Real(1)) - z));
            if (rho < opt_.min_distance)
                throw ConvergenceError("step-size failure: path comes within " +
                                       to_scientific(rho, 3) + " of a singular point");
            Real len = std::min(remaining, Real(rho / 2));
            bool last = len == remaining;
            for (;;) {
                if (++stats_.steps > opt_.max_steps) throw ConvergenceError("step-size failure: too many steps");
                Sc h = rest;
                if (!last) h = rest * (len / remaining);
                if (step(z, h)) {
                    if (last)
                        z = to;
                    else
                        z = z + h;
                    break;
                }
                ++stats_.rejected;
                len /= 2;
                last = false;
            }
            if (last) return;
        }
    }

private:
    // One power-series step from z by h; returns false if the tail is too large.
    bool step(const Sc& z, const Sc& h) {
        const unsigned P = order_;
        Sc inv0 = Sc(Real(1)) / z;
        Sc inv1 = Sc(Real(1)) / (Sc(Real(1)) - z);
        std::vector<Sc> hk(P + 1, Sc(Real(0)));
        for (unsigned k = 0; k <= P; ++k) hk[k] = h / Real(k + 1);
        coef_[0][0] = Sc(Real(1));
        for (unsigned k = 1; k <= P; ++k) coef_[0][k] = Sc(Real(0));
        Real tail = 0, scale = 1;
        std::vector<Sc> next(n_, Sc(Real(0)));
        next[0] = Sc(Real(1));
        for (std::size_t i = 1; i < n_; ++i) {
            const auto& a = coef_[parent_[i]];
            auto& b = coef_[i];
            b[0] = state_[i];
            // g = a * f_letter in scaled form; b_{k+1} = g_k h/(k+1)
            Sc g = Sc(Real(0));
            for (unsigned k = 0; k < P; ++k) {
                if (letter_[i] == 0)
                    g = (a[k] - g * h) * inv0;
                else
                    g = (a[k] + g * h) * inv1;
                b[k + 1] = g * hk[k];
            }
            Sc sum = b[P];
            for (unsigned k = P; k-- > 0;) sum += b[k];
            next[i] = sum;
            tail = std::max(tail, magnitude(b[P]) + magnitude(b[P - 1]));
            scale = std::max(scale, magnitude(sum));
        }
        if (tail > eps_ * scale) return false;
        state_ = std::move(next);
        stats_.order = P;
        return true;
    }

    unsigned cutoff_, work_;
    TransportOptions opt_;
    std::size_t n_;
    std::vector<std::size_t> parent_;
    std::vector<int> letter_;
    unsigned order_ = 0;
    Real eps_;
    std::vector<Sc> state_;
    std::vector<std::vector<Sc>> coef_;
    TransportStats stats_;
};

inline ComplexSeries to_series(const std::vector<Real>& v, unsigned cutoff, unsigned digits) {
    ComplexSeries s(cutoff, digits);
    for (std::size_t i = 0; i < v.size(); ++i) s.set(Word::from_dense_index(i), Complex(v[i]));
    return s;
}
inline ComplexSeries to_series(const std::vector<Complex>& v, unsigned cutoff, unsigned digits) {
    ComplexSeries s(cutoff, digits);
    for (std::size_t i = 0; i < v.size(); ++i) s.set(Word::from_dense_index(i), v[i]);
    return s;
}

}  // namespace detail

/// T along the path, truncated at `cutoff`, to `digits` digits.
inline ComplexSeries transport(const PathSpec& path, unsigned cutoff, unsigned digits,
                               const TransportOptions& opt = {}, TransportStats* stats = nullptr) {
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    auto poly = path.polygon();
    for (auto& z : poly) z.round_to(work);
    if (path.is_real()) {
        detail::Walker<Real> w(cutoff, work, opt);
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) w.walk(poly[i].real(), poly[i + 1].real());
        if (stats) *stats = w.stats();
        return detail::to_series(w.state(), cutoff, digits);
    }
    detail::Walker<Complex> w(cutoff, work, opt);
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) w.walk(poly[i], poly[i + 1]);
    if (stats) *stats = w.stats();
    return detail::to_series(w.state(), cutoff, digits);
}

/// Largest violation of c(u) c(v) = sum over shuffle(u,v) of c(w), |u|+|v| <= max_len.
inline Real group_like_defect(const ComplexSeries& s, unsigned max_len) {
    WorkingPrecision wp(s.digits());
    Real worst = (s.constant_term() - Complex(1)).abs();
    for (const auto& u : all_words(max_len))
        for (const auto& v : all_words(max_len - u.size())) {
            if (u.empty() || v.empty() || u > v) continue;
            Complex rhs(0);
            for (const auto& [w, m] : shuffle(u, v)) rhs += s.coefficient(w) * Real(m);
            worst = std::max(worst, (s.coefficient(u) * s.coefficient(v) - rhs).abs());
        }
    return worst;
}

// --- associator ----------------------------------------------------------

/// t^{X0} T([t, 1-t]) t^{X1}.
inline ComplexSeries regularized_sample(const Real& t, unsigned cutoff, unsigned digits,
                                        const TransportOptions& opt = {}) {
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    Real tt(t);
    tt.precision(work);
    auto T = transport(PathSpec::real_segment(tt, 1 - tt), cutoff, digits + 10, opt);
    auto left = scalar_power(Complex(tt), ComplexSeries::generator(0, cutoff, work));
    auto right = scalar_power(Complex(tt), ComplexSeries::generator(1, cutoff, work));
    auto r = left * T * right;
    ComplexSeries out(cutoff, digits);
    for (const auto& [w, c] : r.terms()) out.set(w, c);
    return out;
}

struct AssociatorOptions {
    unsigned first_exponent = 20;  // samples at t = 2^{-first_exponent - j}
    int log_power = -1;            // k in the model t * sum_{j<=k} a_j log^j(1/t); -1 means cutoff
    bool richardson = true;
    unsigned residual_from = 10, residual_to = 20;  // residual report on t = 2^{-e}
    TransportOptions transport;
};

struct ResidualSample {
    unsigned exponent;  // t = 2^{-exponent}
    Real residual;      // max coefficient distance to the extrapolated limit
    Real scaled;        // residual / (t log^k(1/t))
};

struct AssociatorResult {
    ComplexSeries phi;
    bool extrapolated = false;
    Real error_estimate;  // disagreement of two extrapolations (or last two samples)
    unsigned log_power = 0;
    std::vector<ResidualSample> residuals;
};

namespace detail {

/// Weights lambda with sum lambda_j F(t_j) = the constant term of the model
/// F(t) = c + t sum_{i<=k} a_i L^i, L = log(1/t).
inline std::vector<Real> richardson_weights(const std::vector<Real>& ts, unsigned k) {
    const std::size_t n = ts.size();
    Matrix<Complex> m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Real L = -boost::multiprecision::log(ts[j]);
        m(j, 0) = Complex(Real(1));
        Real p = ts[j];
        for (unsigned i = 0; i <= k; ++i) {
            m(j, i + 1) = Complex(p);
            p *= L;
        }
    }
    auto inv = inverse(m.transpose(), 0.0);
    // lambda solves m^T lambda = e_0
    std::vector<Real> lambda(n);
    for (std::size_t j = 0; j < n; ++j) lambda[j] = inv(j, 0).real();
    return lambda;
}

inline ComplexSeries combine(const std::vector<ComplexSeries>& xs, const std::vector<Real>& w) {
    ComplexSeries r(xs.front().cutoff(), xs.front().digits());
    for (std::size_t j = 0; j < xs.size(); ++j) r += xs[j] * Complex(w[j]);
    return r;
}

inline Real pow2_neg(unsigned e, unsigned work) {
    WorkingPrecision wp(work);
    return boost::multiprecision::pow(Real(2), -Real(e));
}

}  // namespace detail

/// The regularized limit lim t^{X0} T([t,1-t]) t^{X1}.
inline AssociatorResult associator(unsigned cutoff, unsigned digits, const AssociatorOptions& opt = {}) {
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    AssociatorResult res;
    res.log_power = opt.log_power < 0 ? cutoff : static_cast<unsigned>(opt.log_power);
    const unsigned k = res.log_power;

    std::map<unsigned, ComplexSeries> samples;
    auto sample = [&](unsigned e) -> const ComplexSeries& {
        auto it = samples.find(e);
        if (it == samples.end())
            it = samples.emplace(e, regularized_sample(detail::pow2_neg(e, work), cutoff, digits + 10, opt.transport)).first;
        return it->second;
    };

    const unsigned e0 = opt.first_exponent;
    if (opt.richardson) {
        auto extrapolate = [&](unsigned first) {
            std::vector<Real> ts;
            std::vector<ComplexSeries> xs;
            for (unsigned j = 0; j < k + 2; ++j) {
                ts.push_back(detail::pow2_neg(first + j, work));
                xs.push_back(sample(first + j));
            }
            return detail::combine(xs, detail::richardson_weights(ts, k));
        };
        auto a = extrapolate(e0);
        auto b = extrapolate(e0 + 1);
        res.phi = b;
        res.error_estimate = max_abs_difference(a, b);
        res.extrapolated = true;
    } else {
        res.phi = sample(e0 + 1);
        res.error_estimate = max_abs_difference(sample(e0), sample(e0 + 1));
    }

    for (unsigned e = opt.residual_from; e <= opt.residual_to && opt.residual_to > 0; ++e) {
        Real t = detail::pow2_neg(e, work);
        Real L = -boost::multiprecision::log(t);
        Real r = max_abs_difference(sample(e), res.phi);
        res.residuals.push_back({e, r, r / (t * boost::multiprecision::pow(L, Real(k)))});
    }

    ComplexSeries out(cutoff, digits);
    for (const auto& [w, c] : res.phi.terms()) out.set(w, c);
    res.phi = out;
    return res;
}

/// Phi assembled from shuffle-regularized multiple zeta values.
inline ComplexSeries associator_from_zeta(unsigned cutoff, unsigned digits) {
    ZetaEvaluator ev(digits);
    ComplexSeries phi(cutoff, digits);
    for (const auto& w : all_words(cutoff)) {
        auto z = ev.regularized(w);
        phi.set(w, Complex(z.value));
    }
    return phi;
}

// --- local monodromy -----------------------------------------------------

struct MonodromyOptions {
    unsigned radius_exponent = 64;  // circle radius 2^{-radius_exponent}
    double tolerance = 1e-8;
    TransportOptions transport;
};

struct MonodromyResult {
    int cusp = 0;
    ComplexSeries expected;     // exp(2 pi i X0) or exp(-2 pi i X1)
    ComplexSeries transported;  // regularized loop transport
    Real residual;
    bool ok = false;
};

/// exp(2 pi i X0) for cusp 0, exp(-2 pi i X1) for cusp 1 (counterclockwise loops).
inline ComplexSeries monodromy_exponential(int cusp, unsigned cutoff, unsigned digits) {
    WorkingPrecision wp(digits);
    Real two_pi = 2 * boost::math::constants::pi<Real>();
    Complex c(Real(0), cusp == 0 ? two_pi : Real(-two_pi));
    return exp(ComplexSeries::generator(cusp, cutoff, digits) * c);
}

/// Counterclockwise circle of radius r around the cusp, based at r resp. 1-r.
inline PathSpec cusp_loop(int cusp, const Real& r, bool clockwise = false) {
    PathSpec p;
    Real from = cusp == 0 ? Real(0) : Real("0.5");
    Real to = clockwise ? Real(from - 1) : Real(from + 1);
    p.add_arc(Complex(Real(cusp)), r, from, to);
    return p;
}

inline MonodromyResult local_monodromy(int cusp, unsigned cutoff, unsigned digits, const MonodromyOptions& opt = {}) {
    if (cusp != 0 && cusp != 1) throw InputError("cusp must be 0 or 1");
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    Real r = detail::pow2_neg(opt.radius_exponent, work);
    auto T = transport(cusp_loop(cusp, r), cutoff, digits + 10, opt.transport);
    auto x = ComplexSeries::generator(cusp, cutoff, work);
    // conjugate the local solution r^{+-X} away: r^{X0} T r^{-X0}, r^{-X1} T r^{X1}
    Complex rc(r);
    auto a = scalar_power(rc, cusp == 0 ? x : -x);
    auto b = scalar_power(rc, cusp == 0 ? -x : x);
    MonodromyResult res;
    res.cusp = cusp;
    auto reg = a * T * b;
    res.expected = monodromy_exponential(cusp, cutoff, digits);
    res.transported = ComplexSeries(cutoff, digits);
    for (const auto& [w, c] : reg.terms()) res.transported.set(w, c);
    res.residual = max_abs_difference(res.transported, res.expected);
    res.ok = res.residual <= opt.tolerance;
    return res;
}

struct ConjugationCheck {
    ComplexSeries transported;  // regularized T([t,1-t] sigma [1-t,t])
    ComplexSeries predicted;    // Phi e^{2 pi i X1} Phi^{-1}
    Real residual;
};

/// Compares the regularized transport along [0,1], a clockwise circle around
/// 1, and back, with Phi e^{2 pi i X1} Phi^{-1}.
inline ConjugationCheck conjugated_loop_check(const ComplexSeries& phi, unsigned digits, unsigned t_exponent = 40,
                                              const TransportOptions& topt = {}) {
    const unsigned cutoff = phi.cutoff();
    const unsigned work = guarded_digits(digits);
    WorkingPrecision wp(work);
    Real t = detail::pow2_neg(t_exponent, work);
    PathSpec there = PathSpec::real_segment(t, 1 - t);
    PathSpec path = there.then(cusp_loop(1, t, true)).then(there.reversed());
    auto T = transport(path, cutoff, digits + 10, topt);
    auto x0 = ComplexSeries::generator(0, cutoff, work);
    auto reg = scalar_power(Complex(t), x0) * T * scalar_power(Complex(t), -x0);
    ConjugationCheck out;
    out.transported = ComplexSeries(cutoff, digits);
    for (const auto& [w, c] : reg.terms()) out.transported.set(w, c);
    ComplexSeries p(cutoff, work);
    for (const auto& [w, c] : phi.terms()) p.set(w, c);
    auto e = monodromy_exponential(1, cutoff, work);
    // monodromy_exponential gives exp(-2 pi i X1); the clockwise loop needs its inverse
    auto pred = p * inverse(e) * inverse(p);
    out.predicted = ComplexSeries(cutoff, digits);
    for (const auto& [w, c] : pred.terms()) out.predicted.set(w, c);
    out.residual = max_abs_difference(out.transported, out.predicted);
    return out;
}

}  // namespace periods
