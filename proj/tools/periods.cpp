// periods: command-line front end.  Exit status 0 on success, 1 when a
// computation fails or a validator rejects its input, 2 on usage errors.

#include "periods/cache.hpp"
#include "periods/delext.hpp"
#include "periods/hodge.hpp"
#include "periods/kz.hpp"
#include "periods/linfilt.hpp"
#include "periods/relations.hpp"
#include "periods_config.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace periods;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "periods/1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    json config;
    bool as_json = false;
    std::optional<unsigned> digits, cutoff;
    std::optional<std::string> bound;
    std::string cache_path, config_path;

    unsigned get_digits(const char* key = "digits") const { return digits.value_or(config.at(key).get<unsigned>()); }
    unsigned get_cutoff(const char* key = "cutoff") const { return cutoff.value_or(config.at(key).get<unsigned>()); }
    Integer get_bound() const {
        std::string s = bound.value_or(config.at("bound").dump());
        Rational q = parse_rational(s);
        if (denominator(q) != 1 || q < 1) throw InputError("--bound must be a positive integer");
        return numerator(q);
    }

    std::unique_ptr<CacheStore> open_cache() const {
        std::string p = cache_path;
        if (p.empty())
            if (const char* env = std::getenv("PERIODS_CACHE")) p = env;
        if (p.empty()) p = config.value("cache", std::string());
        if (p.empty()) return nullptr;
        auto c = std::make_unique<CacheStore>(p);
        if (c->quarantined())
            std::cerr << "periods: " << c->quarantined() << " damaged cache line(s) moved to " << p
                      << ".quarantine\n";
        return c;
    }
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    auto j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InputError(path + " is not valid JSON");
    return j;
}

json envelope(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

void emit(const Settings& s, const json& j, const std::string& text) {
    if (s.as_json)
        std::cout << j.dump(2) << '\n';
    else
        std::cout << text;
}

json report_json(const HodgeReport& r) { return r.to_json(); }

std::string report_text(const HodgeReport& r, const std::string& indent = "") {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << indent << (c.pass ? "pass  " : "FAIL  ") << c.axiom;
        if (!c.pass && !c.witness.empty()) os << "  witness " << c.witness;
        if (!c.pass && !c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    return os.str();
}

std::string complex_text(const Complex& z, unsigned digits) {
    std::string re = to_decimal(z.real(), digits);
    if (z.imag() == 0) return re;
    std::string im = to_decimal(abs(z.imag()), digits);
    return re + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

json complex_matrix_json(const Matrix<Complex>& m, unsigned digits) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back({to_scientific(m(r, c).real(), digits), to_scientific(m(r, c).imag(), digits)});
        rows.push_back(row);
    }
    return rows;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(parse_rational(item));
    }
    if (out.empty()) throw InputError("empty vector '" + text + "'");
    return out;
}

/// "0.001" or "0.001,0.002" (real, imaginary).
cdouble parse_cdouble(const std::string& text) {
    auto v = parse_rational_list(text);
    if (v.size() > 2) throw InputError("complex value takes at most two components");
    return {v[0].convert_to<double>(), v.size() == 2 ? v[1].convert_to<double>() : 0.0};
}

ShiftConvention parse_convention(const std::string& s) {
    if (s == "standard") return ShiftConvention::standard;
    if (s == "printed") return ShiftConvention::printed;
    throw UsageError("--convention must be 'standard' or 'printed'");
}

// --- zeta -------------------------------------------------------------------

int cmd_zeta(const Settings& s, const std::string& index_text, const std::string& word_text) {
    if (index_text.empty() == word_text.empty()) throw UsageError("zeta needs exactly one of --index or --word");
    unsigned digits = s.get_digits();
    Word w;
    if (!index_text.empty()) {
        auto idx = CompositionIndex::parse(index_text);
        if (!idx.admissible()) throw DivergenceError(idx.str() + " diverges (last part must exceed 1); pass --word for the regularized value");
        w = word_of_index(idx);
    } else {
        w = Word::parse(word_text);
    }
    json j = envelope("zeta");
    j["word"] = w.str();
    j["digits"] = digits;
    std::string value, bound;
    if (convergent_word(w)) {
        auto idx = index_of_word(w);
        auto cache = s.open_cache();
        ZetaSource src(cache.get());
        auto e = src.entry(idx, digits);
        WorkingPrecision wp(digits + 10);
        value = to_decimal(parse_real(e.value, digits + 10), digits);
        bound = e.error_bound;
        j["index"] = idx.str();
        j["regularized"] = false;
    } else {
        ZetaEvaluator ev(digits);
        auto z = ev.regularized(w);
        value = to_decimal(z.value, digits);
        bound = to_scientific(z.error_bound, 3);
        j["index"] = nullptr;
        j["regularized"] = true;
    }
    j["value"] = value;
    j["error_bound"] = bound;
    emit(s, j, value + "\n");
    return 0;
}

// --- assoc ------------------------------------------------------------------

int cmd_assoc(const Settings& s, const std::string& path_file, const std::string& method) {
    unsigned cutoff = s.get_cutoff(), digits = s.get_digits();
    json j = envelope("assoc");
    j["cutoff"] = cutoff;
    j["digits"] = digits;
    ComplexSeries series;
    if (!path_file.empty()) {
        auto path = PathSpec::from_json(load_json_file(path_file), guarded_digits(digits));
        series = transport(path, cutoff, digits);
        j["method"] = "path transport";
    } else if (method == "zeta") {
        series = associator_from_zeta(cutoff, digits);
        j["method"] = "zeta";
    } else if (method == "transport") {
        auto r = associator(cutoff, digits);
        series = r.phi;
        j["method"] = r.extrapolated ? "transport with Richardson step" : "transport";
        j["error_estimate"] = to_scientific(r.error_estimate, 3);
        j["log_power"] = r.log_power;
        json res = json::array();
        for (const auto& x : r.residuals)
            res.push_back({{"exponent", x.exponent},
                           {"residual", to_scientific(x.residual, 3)},
                           {"scaled", to_scientific(x.scaled, 3)}});
        j["residuals"] = res;
    } else {
        throw UsageError("--method must be 'transport' or 'zeta'");
    }
    j["series"] = to_json(series);
    std::ostringstream os;
    for (const auto& [w, c] : series.terms())
        os << (w.empty() ? std::string("1") : w.str()) << "  " << complex_text(c, std::min(digits, 20u)) << '\n';
    emit(s, j, os.str());
    return 0;
}

// --- monodromy --------------------------------------------------------------

int cmd_monodromy(const Settings& s, int cusp, const std::string& system_file, const std::string& t_text) {
    unsigned digits = s.get_digits();
    json j = envelope("monodromy");
    j["digits"] = digits;
    if (!system_file.empty()) {
        if (t_text.empty()) throw UsageError("monodromy --system needs --t");
        auto A = MatrixSeries::from_json(load_json_file(system_file));
        auto tv = parse_rational_list(t_text);
        WorkingPrecision wp(guarded_digits(digits));
        Complex t = Complex::from_rational(tv[0], tv.size() > 1 ? tv[1] : Rational(0), guarded_digits(digits));
        auto m = monodromy_log(A, t, digits, 1e-10, s.config.at("order").get<unsigned>());
        j["kind"] = "conjugated residue";
        j["N"] = complex_matrix_json(m.N, digits);
        j["remainder_bound"] = to_scientific(m.remainder_bound, 3);
        j["warning"] = m.warning ? json(m.message) : json(nullptr);
        j["ok"] = true;
        if (m.warning) std::cerr << "periods: " << m.message << '\n';
        std::ostringstream os;
        for (std::size_t r = 0; r < m.N.rows(); ++r) {
            for (std::size_t c = 0; c < m.N.cols(); ++c) os << (c ? "  " : "") << complex_text(m.N(r, c), 12);
            os << '\n';
        }
        emit(s, j, os.str());
        return 0;
    }
    unsigned cutoff = s.cutoff.value_or(s.config.at("monodromy_cutoff").get<unsigned>());
    auto r = local_monodromy(cusp, cutoff, digits);
    j["kind"] = "loop transport";
    j["cusp"] = cusp;
    j["cutoff"] = cutoff;
    j["residual"] = to_scientific(r.residual, 3);
    j["ok"] = r.ok;
    j["transported"] = to_json(r.transported);
    j["expected"] = to_json(r.expected);
    std::ostringstream os;
    os << "loop around " << cusp << " vs " << (cusp == 0 ? "exp(2 pi i X0)" : "exp(-2 pi i X1)") << ": residual "
       << to_scientific(r.residual, 3) << (r.ok ? "  ok\n" : "  FAIL\n");
    emit(s, j, os.str());
    return r.ok ? 0 : 1;
}

// --- wfilt ------------------------------------------------------------------

int cmd_wfilt(const Settings& s, const std::string& matrix_file, std::optional<int> shift_opt,
              const std::string& conv_text) {
    auto mj = load_json_file(matrix_file);
    if (mj.is_object() && mj.contains("matrix")) mj = mj["matrix"];
    auto N = rational_matrix_from_json(mj);
    if (!N.square()) throw InputError("matrix must be square");
    int k = shift_opt.value_or(s.config.at("shift").get<int>());
    auto conv = parse_convention(conv_text.empty() ? s.config.at("convention").get<std::string>() : conv_text);
    auto W = weight_filtration(N);
    auto Wk = shift_filtration(W, k, conv);
    auto rep = verify_weight_properties(N, Wk, k);
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json e{{"property", c.property}, {"index", c.index}, {"pass", c.pass}};
        if (c.witness) {
            json wv = json::array();
            for (const auto& x : *c.witness) wv.push_back(to_string(x));
            e["witness"] = wv;
        }
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    json j = envelope("wfilt");
    j["shift"] = k;
    j["convention"] = conv == ShiftConvention::standard ? "standard" : "printed";
    j["jumps"] = Wk.jumps();
    j["filtration"] = Wk.to_json();
    j["checks"] = checks;
    j["ok"] = rep.ok;
    std::ostringstream os;
    os << "jumps:";
    for (int n : Wk.jumps()) os << ' ' << n << " (dim Gr " << Wk.graded_dim(n) << ')';
    os << '\n';
    for (const auto& c : rep.failures()) os << "FAIL  " << c.property << " at " << c.index << '\n';
    os << (rep.ok ? "all properties hold\n" : "");
    emit(s, j, os.str());
    return rep.ok ? 0 : 1;
}

// --- regularize -------------------------------------------------------------

int cmd_regularize(const Settings& s, const std::string& system_file, std::optional<unsigned> order_opt,
                   const std::string& v0_text, std::optional<double> angle_opt) {
    auto A = MatrixSeries::from_json(load_json_file(system_file));
    unsigned order = order_opt.value_or(s.config.at("order").get<unsigned>());
    auto P = regularize(A, order);
    auto D = ode_defect(A, P);
    bool defect_zero = true;
    for (unsigned i = 0; i <= D.order(); ++i) defect_zero &= D[i].is_zero();
    json j = envelope("regularize");
    j["order"] = order;
    j["P"] = P.to_json();
    j["defect_vanishes"] = defect_zero;
    j["residue"] = to_json(connection_residue(A, order).residue);
    bool ok = defect_zero;
    std::ostringstream os;
    for (unsigned i = 0; i <= P.order(); ++i) os << "P_" << i << " = " << to_string(P[i]) << '\n';
    os << "ODE defect through t^" << order << (defect_zero ? ": zero\n" : ": NONZERO\n");
    if (!v0_text.empty()) {
        unsigned digits = s.get_digits();
        auto v0 = parse_rational_list(v0_text);
        double angle = angle_opt.value_or(s.config.at("angle_turns").get<double>());
        auto ex = s.config.at("radius_exponents");
        std::vector<Real> radii;
        for (int e = ex[0].get<int>(); e <= ex[1].get<int>(); ++e) radii.push_back(pow10_real(-e, guarded_digits(digits)));
        WorkingPrecision wp(guarded_digits(digits));
        auto lim = regularized_limit(v0, A, parse_real(std::to_string(angle), guarded_digits(digits)), radii, digits, -1,
                                     order);
        json est = json::array(), samples = json::array();
        for (const auto& z : lim.estimate) est.push_back({to_scientific(z.real(), digits), to_scientific(z.imag(), digits)});
        for (const auto& x : lim.samples)
            samples.push_back({{"abs_t", to_scientific(x.abs_t, 3)},
                               {"residual", to_scientific(x.residual, 3)},
                               {"scaled", to_scientific(x.scaled, 3)}});
        j["limit"] = {{"estimate", est},
                      {"samples", samples},
                      {"log_power", lim.log_power},
                      {"max_log_power", lim.max_log_power},
                      {"fitted_c", to_scientific(lim.fitted_c, 3)},
                      {"spread", to_scientific(lim.spread, 3)},
                      {"exact", lim.exact},
                      {"ok", lim.ok},
                      {"message", lim.message}};
        ok = ok && lim.ok;
        os << "regularized limit: ";
        for (std::size_t i = 0; i < lim.estimate.size(); ++i) os << (i ? ", " : "") << complex_text(lim.estimate[i], 15);
        os << "\n  residual ~ C |t| log^" << lim.log_power << "(1/|t|), C <= " << to_scientific(lim.fitted_c, 3)
           << ", spread " << to_scientific(lim.spread, 3) << (lim.ok ? "  ok" : "  FAIL: " + lim.message) << '\n';
    }
    j["ok"] = ok;
    emit(s, j, os.str());
    return ok ? 0 : 1;
}

// --- hodge / orbit ----------------------------------------------------------

int cmd_hodge_check(const Settings& s, const std::string& file) {
    auto in = load_json_file(file);
    json j = envelope("hodge check");
    HodgeReport rep;
    std::string kind;
    if (in.contains("period_matrix")) {
        const auto& pm = in["period_matrix"];
        Matrix<GaussianRational> om(pm.size(), pm.empty() ? 0 : pm[0].size());
        for (std::size_t r = 0; r < om.rows(); ++r)
            for (std::size_t c = 0; c < om.cols(); ++c) om(r, c) = detail::gaussian_from_json(pm[r][c]);
        rep = validate_period_matrix(om);
        kind = "period matrix";
    } else if (in.contains("W")) {
        auto m = mhs_from_json(in);
        rep = validate_mhs(m);
        kind = "mixed Hodge structure";
    } else {
        bool form = false;
        auto ph = hodge_from_json(in, &form);
        rep = form ? validate_polarized(ph) : validate_hodge(ph.hodge);
        kind = form ? "polarized Hodge structure" : "Hodge structure";
    }
    j["kind"] = kind;
    j["report"] = report_json(rep);
    j["ok"] = rep.ok;
    emit(s, j, kind + ": " + (rep.ok ? "valid" : "INVALID") + "\n" + report_text(rep, "  "));
    return rep.ok ? 0 : 1;
}

int cmd_orbit_check(const Settings& s, const std::string& file, const std::string& t_text, const std::string& conv_text,
                    const std::string& scan_text) {
    auto d = orbit_from_json(load_json_file(file));
    auto conv = parse_convention(conv_text.empty() ? s.config.at("convention").get<std::string>() : conv_text);
    cdouble t = parse_cdouble(t_text);
    if (std::abs(t) == 0 || std::abs(t) >= 1) throw InputError("--t must satisfy 0 < |t| < 1");
    auto rep = nilpotent_orbit_check(d, t, conv);
    json j = envelope("orbit check");
    j["t"] = {t.real(), t.imag()};
    j["convention"] = conv == ShiftConvention::standard ? "standard" : "printed";
    j["report"] = rep.to_json();
    j["ok"] = rep.ok;
    std::ostringstream os;
    os << "limit MHS at t = " << t.real() << (t.imag() != 0 ? "," + std::to_string(t.imag()) : "") << ": "
       << (rep.ok ? "valid" : "INVALID") << '\n'
       << report_text(rep.structure, "  ") << report_text(rep.mhs, "  ") << "  fiber polarized: "
       << (rep.fiber.ok ? "yes" : "no") << '\n';
    if (!scan_text.empty()) {
        std::vector<double> Ls;
        for (const auto& q : parse_rational_list(scan_text)) Ls.push_back(q.convert_to<double>());
        double turns = std::arg(t) / (2 * M_PI);
        json scan = json::array();
        os << "fiber scan (log 1/|t| : polarized)\n";
        for (auto [L, ok] : orbit_fiber_scan(d, turns, Ls)) {
            scan.push_back({{"log_inv_abs_t", L}, {"polarized", ok}});
            os << "  " << L << " : " << (ok ? "yes" : "no") << '\n';
        }
        j["scan"] = scan;
    }
    emit(s, j, os.str());
    return rep.ok ? 0 : 1;
}

// --- relations / dims -------------------------------------------------------

/// "zeta(2)*zeta(3)", "pi^2", "zeta(1,2)", "1".
std::function<Real(unsigned, ZetaSource&)> parse_term(const std::string& text) {
    std::vector<std::pair<std::optional<CompositionIndex>, unsigned>> factors;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = pos;
        int depth = 0;
        while (end < text.size() && !(text[end] == '*' && depth == 0)) {
            depth += text[end] == '(' ? 1 : text[end] == ')' ? -1 : 0;
            ++end;
        }
        std::string f = text.substr(pos, end - pos);
        f.erase(0, f.find_first_not_of(' '));
        f.erase(f.find_last_not_of(' ') + 1);
        unsigned power = 1;
        if (auto caret = f.rfind('^'); caret != std::string::npos && f.find(')', caret) == std::string::npos) {
            power = static_cast<unsigned>(std::stoul(f.substr(caret + 1)));
            f = f.substr(0, caret);
        }
        if (f == "pi")
            factors.emplace_back(std::nullopt, power);
        else if (f == "1")
            ;
        else if (f.rfind("zeta", 0) == 0)
            factors.emplace_back(CompositionIndex::parse(f), power);
        else
            throw InputError("unknown factor '" + f + "' (use zeta(...), pi, pi^k)");
        pos = end + 1;
    }
    for (const auto& [idx, p] : factors)
        if (idx && !idx->admissible()) throw DivergenceError(idx->str() + " diverges");
    return [factors](unsigned d, ZetaSource& src) {
        WorkingPrecision wp(guarded_digits(d));
        Real x = 1;
        for (const auto& [idx, p] : factors) {
            Real f = idx ? src.value(*idx, d) : real_pi(guarded_digits(d));
            for (unsigned i = 0; i < p; ++i) x *= f;
        }
        return x;
    };
}

int cmd_relations(const Settings& s, std::optional<unsigned> weight, const std::vector<std::string>& values) {
    if (!weight == values.empty()) throw UsageError("relations needs exactly one of --weight or --values");
    unsigned digits = s.get_digits("relation_digits");
    Integer bound = s.get_bound();
    auto cache = s.open_cache();
    ZetaSource src(cache.get());
    json j = envelope("relations");
    std::ostringstream os;
    std::vector<Relation> found;
    if (weight) {
        auto e = mzn_span_experiment(*weight, digits, bound,
                                     [&](const CompositionIndex& idx, unsigned d) { return src.value(idx, d); });
        j["experiment"] = e.to_json();
        found = e.relations;
        os << "weight " << e.weight << ": " << e.labels.size() << " values, detected dimension " << e.dimension()
           << " (upper-bound estimate), d_" << e.weight << " = " << e.zagier_bound << '\n';
        os << "basis:";
        for (const auto& b : e.basis) os << ' ' << b;
        os << '\n';
        for (const auto& r : e.relations) os << "  " << r.str() << '\n';
    } else {
        std::vector<std::function<Real(unsigned, ZetaSource&)>> terms;
        for (const auto& v : values) terms.push_back(parse_term(v));
        RelationProblem p;
        p.labels = values;
        p.digits = digits;
        p.bound = bound;
        p.evaluate = [&](unsigned d) {
            std::vector<Real> out;
            for (auto& t : terms) out.push_back(t(d, src));
            return out;
        };
        auto r = find_relation(p);
        j["relation"] = r ? r->to_json() : json(nullptr);
        if (r) found.push_back(*r);
        os << (r ? r->str() : std::string("no relation with coefficients up to ") + bound.str()) << '\n';
    }
    if (cache)
        for (const auto& r : found) cache->add_relation(r);
    emit(s, j, os.str());
    return 0;
}

int cmd_dims(const Settings& s, std::optional<unsigned> max_opt, bool list) {
    unsigned m = max_opt.value_or(s.config.at("dims_max").get<unsigned>());
    auto d = zagier_dimensions(m);
    json j = envelope("dims");
    j["max"] = m;
    j["dimensions"] = d;
    std::ostringstream os;
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << '\n';
    if (list) {
        json mono = json::array();
        for (unsigned w = 0; w <= m; ++w) {
            auto ms = zagier_monomials(w);
            mono.push_back(ms);
            os << w << ':';
            for (const auto& x : ms) os << "  " << x;
            os << '\n';
        }
        j["monomials"] = mono;
    }
    emit(s, j, os.str());
    return 0;
}

json load_config(const std::string& path) {
    json base = json::parse(periods_default_config());
    std::string p = path;
    if (p.empty())
        if (const char* env = std::getenv("PERIODS_CONFIG")) p = env;
    if (p.empty()) return base;
    auto over = load_json_file(p);
    if (!over.is_object()) throw InputError("config file must hold a JSON object");
    for (auto& [k, v] : over.items()) {
        if (!base.contains(k)) throw InputError("unknown config key '" + k + "'");
        base[k] = v;
    }
    return base;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periods, limit mixed Hodge structures and multiple zeta values"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.add_flag("--json", s.as_json, "Machine-readable output");
    app.add_option("--digits", s.digits, "Decimal digits");
    app.add_option("--cutoff", s.cutoff, "Word length cutoff");
    app.add_option("--bound", s.bound, "Coefficient bound for relations");
    app.add_option("--cache", s.cache_path, "Cache file (default: $PERIODS_CACHE)");
    app.add_option("--config", s.config_path, "Defaults file (default: $PERIODS_CONFIG, else built in)");

    std::string index, word;
    auto* zeta_cmd = app.add_subcommand("zeta", "Multiple zeta value");
    zeta_cmd->add_option("--index", index, "Composition, e.g. 1,2");
    zeta_cmd->add_option("--word", word, "Word in 0/1, e.g. 110");

    std::string path_file, method = "transport";
    auto* assoc_cmd = app.add_subcommand("assoc", "Drinfeld associator, or transport along a path");
    assoc_cmd->add_option("--path", path_file, "Path JSON (arc list); transports along it instead");
    assoc_cmd->add_option("--method", method, "transport | zeta")->check(CLI::IsMember({"transport", "zeta"}));

    int cusp = 0;
    std::string system_file, t_text;
    auto* mono_cmd = app.add_subcommand("monodromy", "Local monodromy of the KZ series, or N(t) of a system");
    mono_cmd->add_option("--cusp", cusp, "0 or 1")->check(CLI::IsMember({0, 1}));
    mono_cmd->add_option("--system", system_file, "Matrix series JSON");
    mono_cmd->add_option("--t", t_text, "Evaluation point re[,im]");

    std::string matrix_file, conv_text;
    std::optional<int> shift;
    auto* wfilt_cmd = app.add_subcommand("wfilt", "Monodromy weight filtration of a nilpotent matrix");
    wfilt_cmd->add_option("--matrix", matrix_file, "Matrix JSON")->required();
    wfilt_cmd->add_option("--shift", shift, "Center k");
    wfilt_cmd->add_option("--convention", conv_text, "standard | printed");

    std::string reg_system, v0_text;
    std::optional<unsigned> order;
    std::optional<double> angle;
    auto* reg_cmd = app.add_subcommand("regularize", "Deligne regularization P(t) of t v' = v A");
    reg_cmd->add_option("--system", reg_system, "Matrix series JSON")->required();
    reg_cmd->add_option("--order", order, "Truncation order M");
    reg_cmd->add_option("--v0", v0_text, "Initial row vector; also computes the regularized limit");
    reg_cmd->add_option("--angle", angle, "Ray angle in turns for the limit");

    std::string hodge_file;
    auto* hodge_cmd = app.add_subcommand("hodge", "Hodge structure validators");
    hodge_cmd->require_subcommand(1);
    auto* hodge_check = hodge_cmd->add_subcommand("check", "Validate a fixture file");
    hodge_check->add_option("--file", hodge_file, "Fixture JSON")->required();

    std::string orbit_file, orbit_t, orbit_conv, scan_text;
    auto* orbit_cmd = app.add_subcommand("orbit", "Nilpotent orbit checks");
    orbit_cmd->require_subcommand(1);
    auto* orbit_check = orbit_cmd->add_subcommand("check", "Limit MHS check at t");
    orbit_check->add_option("--file", orbit_file, "Orbit JSON")->required();
    orbit_check->add_option("--t", orbit_t, "Parameter re[,im]")->required();
    orbit_check->add_option("--convention", orbit_conv, "standard | printed");
    orbit_check->add_option("--scan", scan_text, "Comma list of log(1/|t|) for a fiber scan");

    std::optional<unsigned> weight;
    std::vector<std::string> values;
    auto* rel_cmd = app.add_subcommand("relations", "Integer relations among MZVs");
    rel_cmd->add_option("--weight", weight, "Run the span experiment at this weight");
    rel_cmd->add_option("--values", values, "Terms such as zeta(2) pi^2 zeta(2)*zeta(3)");

    std::optional<unsigned> dims_max;
    bool dims_list = false;
    auto* dims_cmd = app.add_subcommand("dims", "Weight-graded dimensions d_m");
    dims_cmd->add_option("--max", dims_max, "Largest weight");
    dims_cmd->add_flag("--list", dims_list, "Also list the monomials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        s.config = load_config(s.config_path);
        if (*zeta_cmd) return cmd_zeta(s, index, word);
        if (*assoc_cmd) return cmd_assoc(s, path_file, method);
        if (*mono_cmd) return cmd_monodromy(s, cusp, system_file, t_text);
        if (*wfilt_cmd) return cmd_wfilt(s, matrix_file, shift, conv_text);
        if (*reg_cmd) return cmd_regularize(s, reg_system, order, v0_text, angle);
        if (*hodge_check) return cmd_hodge_check(s, hodge_file);
        if (*orbit_check) return cmd_orbit_check(s, orbit_file, orbit_t, orbit_conv, scan_text);
        if (*rel_cmd) return cmd_relations(s, weight, values);
        if (*dims_cmd) return cmd_dims(s, dims_max, dims_list);
    } catch (const UsageError& e) {
        std::cerr << "periods: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "periods: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
