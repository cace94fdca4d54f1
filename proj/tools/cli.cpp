#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qdelta/deltarep.hpp"
#include "qdelta/errors.hpp"
#include "qdelta/numeric_text.hpp"
#include "qdelta/qcalc.hpp"
#include "qdelta/superstat.hpp"
#include "qdelta/testfns.hpp"
#include "qdelta/ultra.hpp"

namespace qdelta::cli {

namespace {

using json = nlohmann::ordered_json;
using quadrature::QuadratureConfig;

// Bad flags or flag combinations, reported with exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- output

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    json doc;
    Table table;
    int exit_code = kOk;
    std::string note;  // written to stderr when non-empty
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

// nlohmann's serializer prints the shortest round-trip form; floats here are
// written at 17 significant digits like the CSV output.
void render_json(const json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + json(it.key()).dump() + ": ";
                render_json(it.value(), out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                render_json(j[i], out, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_real(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(double v) { return format_real(v); }
std::string cell(Complex z) { return format_complex(z); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------- parsing

template <class Int>
Int parse_integer(const std::string& text, const char* flag) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError(std::string(flag) + " expects an integer, got '" + text + "'");
    }
    return value;
}

double parse_flag_real(const std::string& text, const char* flag) {
    double v = 0.0;
    try {
        v = parse_real(text);
    } catch (const DomainError&) {
        throw UsageError(std::string(flag) + " expects a real number, got '" + text + "'");
    }
    if (!std::isfinite(v)) throw UsageError(std::string(flag) + " must be finite");
    return v;
}

Complex parse_flag_complex(const std::string& text, const char* flag) {
    Complex z;
    try {
        z = parse_complex(text);
    } catch (const DomainError&) {
        throw UsageError(std::string(flag) + " expects a complex number a+bi, got '" + text + "'");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw UsageError(std::string(flag) + " must be finite");
    return z;
}

std::vector<double> parse_flag_list(const std::string& text, const char* flag) {
    try {
        return parse_real_list(text);
    } catch (const DomainError&) {
        throw UsageError(std::string(flag) + " expects comma-separated reals, got '" + text + "'");
    }
}

std::vector<Complex> parse_complex_list(const std::string& text, const char* flag) {
    std::vector<Complex> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(parse_flag_complex(text.substr(start, comma - start), flag));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

const std::string& required(const std::optional<std::string>& v, const char* flag, const std::string& context) {
    if (!v) throw UsageError(std::string(flag) + " is required for " + context);
    return *v;
}

// q = 1 is accepted as the classical limit where the operation has one.
QParam make_q(double q, bool allow_limit) {
    if (allow_limit && q == 1.0) return QParam::limit();
    return QParam(q);
}

std::map<std::string, double> parse_fields(std::string_view body, const std::string& label) {
    std::map<std::string, double> fields;
    while (!body.empty()) {
        const std::size_t comma = body.find(',');
        const std::string_view item = body.substr(0, comma);
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw UsageError("malformed field '" + std::string(item) + "' in " + label);
        fields[std::string(item.substr(0, eq))] = parse_flag_real(std::string(item.substr(eq + 1)), "--density");
    }
    return fields;
}

qcalc::Density parse_density(const std::string& label) {
    const std::size_t colon = label.find(':');
    const std::string kind = label.substr(0, colon);
    const auto fields = parse_fields(colon == std::string::npos ? "" : std::string_view(label).substr(colon + 1), label);
    auto get = [&](const char* key, double fallback) {
        const auto it = fields.find(key);
        return it == fields.end() ? fallback : it->second;
    };
    if (kind == "uniform") return qcalc::uniform_density(get("a", 0.0), get("b", 1.0));
    if (kind == "gauss") return qcalc::gaussian_density(get("sigma", 1.0));
    if (kind == "qgauss") return qcalc::q_gaussian_pdf(make_q(get("q", 1.5), true), get("beta", 1.0));
    throw UsageError("unknown density '" + label + "' (expected uniform:a=..,b=.. | gauss:sigma=.. | qgauss:q=..,beta=..)");
}

// ---------------------------------------------------------------- options

struct Common {
    std::string format;
    std::optional<std::string> output;
    std::optional<std::string> abs_tol;
    std::optional<std::string> rel_tol;
    std::optional<std::string> max_subdivisions;

    QuadratureConfig config(double default_abs, double default_rel) const {
        QuadratureConfig cfg;
        cfg.abs_tol = abs_tol ? parse_flag_real(*abs_tol, "--abs-tol") : default_abs;
        cfg.rel_tol = rel_tol ? parse_flag_real(*rel_tol, "--rel-tol") : default_rel;
        if (max_subdivisions) cfg.max_subdivisions = parse_integer<int>(*max_subdivisions, "--max-subdivisions");
        cfg.validate();
        return cfg;
    }
    QuadratureConfig config() const { return config(1e-10, 1e-8); }
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--output", c.output, "Write results to this file instead of stdout");
    sub->add_option("--abs-tol", c.abs_tol, "Absolute quadrature tolerance");
    sub->add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance");
    sub->add_option("--max-subdivisions", c.max_subdivisions, "Quadrature subdivision budget");
}

// ---------------------------------------------------------------- eval

struct EvalOpts {
    Common common;
    std::string fn;
    std::optional<std::string> q, x, z, k, eps, L;
    std::string method = "closed";
};

Output cmd_eval(const EvalOpts& o) {
    const std::string ctx = "eval --fn " + o.fn;
    const double qv = parse_flag_real(required(o.q, "--q", ctx), "--q");
    if (o.method != "closed" && o.method != "quad") throw UsageError("--method must be closed or quad");
    const QuadratureConfig cfg = o.common.config();

    json inputs = json::object();
    std::map<std::string, std::string> cols;
    std::optional<double> real_value;
    Complex value;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool uses_method = false;

    if (o.fn == "qexp") {
        const double x = parse_flag_real(required(o.x, "--x", ctx), "--x");
        inputs["x"] = x;
        cols["x"] = cell(x);
        real_value = qcalc::q_exp(make_q(qv, true), x);
    } else if (o.fn == "qexp-complex") {
        const Complex z = parse_flag_complex(required(o.z, "--z", ctx), "--z");
        inputs["z"] = format_complex(z);
        cols["x"] = cell(z);
        value = qcalc::q_exp_complex(make_q(qv, true), z);
    } else if (o.fn == "eq") {
        const Complex k = parse_flag_complex(required(o.k, "--k", ctx), "--k");
        const double x = parse_flag_real(required(o.x, "--x", ctx), "--x");
        inputs["k"] = format_complex(k);
        inputs["x"] = x;
        cols["k"] = cell(k);
        cols["x"] = cell(x);
        value = ultra::eval_Eq(QParam(qv), k, x);
    } else if (o.fn == "fq") {
        const Complex k = parse_flag_complex(required(o.k, "--k", ctx), "--k");
        inputs["k"] = format_complex(k);
        cols["k"] = cell(k);
        uses_method = true;
        const QParam q(qv);
        require_delta_window(q);
        if (o.method == "closed") {
            value = ultra::Fq_closed_form(q, k);
        } else {
            const auto r = ultra::integrate_Eq_over_x(q, k, cfg);
            value = r.value;
            error_estimate = r.error_estimate;
            evaluations = r.evaluations;
        }
    } else if (o.fn == "ireg") {
        const double k = parse_flag_real(required(o.k, "--k", ctx), "--k");
        const double eps = parse_flag_real(required(o.eps, "--eps", ctx), "--eps");
        inputs["k"] = k;
        inputs["epsilon"] = eps;
        cols["k"] = cell(k);
        cols["epsilon"] = cell(eps);
        uses_method = true;
        const auto r = deltarep::regularized_integral(
            deltarep::RegularizedFamily(QParam(qv), eps), k,
            o.method == "closed" ? deltarep::Method::ClosedForm : deltarep::Method::Quadrature, cfg);
        real_value = r.value.real();
        error_estimate = r.error_estimate;
        evaluations = r.evaluations;
    } else if (o.fn == "truncated") {
        const double k = parse_flag_real(required(o.k, "--k", ctx), "--k");
        const double L = parse_flag_real(required(o.L, "--L", ctx), "--L");
        inputs["k"] = k;
        inputs["L"] = L;
        cols["k"] = cell(k);
        cols["L"] = cell(L);
        value = deltarep::truncated_integral(QParam(qv), k, L);
    } else {
        throw UsageError("unknown --fn '" + o.fn + "' (qexp, qexp-complex, eq, fq, ireg, truncated)");
    }

    Output out;
    const std::string value_text = real_value ? cell(*real_value) : cell(value);
    out.doc["command"] = "eval";
    out.doc["fn"] = o.fn;
    out.doc["q"] = qv;
    out.doc["inputs"] = inputs;
    out.doc["method"] = uses_method ? json(o.method) : json(nullptr);
    out.doc["value"] = real_value ? json(*real_value) : json(value_text);
    out.doc["error_estimate"] = error_estimate;
    out.doc["evaluations"] = evaluations;

    out.table.header = {"fn", "q", "x", "k", "epsilon", "L", "method", "value", "error_estimate", "evaluations"};
    out.table.rows.push_back({o.fn, cell(qv), cols["x"], cols["k"], cols["epsilon"], cols["L"],
                              uses_method ? o.method : "", value_text, cell(error_estimate), cell(evaluations)});
    return out;
}

// ---------------------------------------------------------------- pair

struct PairOpts {
    Common common;
    std::string mode;
    std::optional<std::string> q;
    std::string testfn = "gauss:a=1";
    std::string zeta = "1";
    std::string eps = "1e-4";
};

Output cmd_pair(const PairOpts& o) {
    if (o.mode != "contour" && o.mode != "real") throw UsageError("--mode must be contour or real");
    const QParam q(parse_flag_real(required(o.q, "--q", "pair"), "--q"));
    require_delta_window(q);
    const testfns::TestFunction phi = testfns::parse_test_function(o.testfn);
    const QuadratureConfig cfg = o.common.config();
    const Complex expected = (2.0 * std::numbers::pi / (2.0 - q.value())) * phi.value_at_zero;

    Complex value;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;
    std::optional<double> zeta, eps;
    if (o.mode == "contour") {
        zeta = parse_flag_real(o.zeta, "--zeta");
        const auto r = ultra::contour_pair(ultra::fq_rep(q), phi, ultra::ContourSpec{*zeta}, cfg);
        value = r.value;
        error_estimate = r.error_estimate;
        evaluations = r.evaluations;
        converged = r.converged;
    } else {
        eps = parse_flag_real(o.eps, "--eps");
        const auto r = deltarep::delta_pair(deltarep::RegularizedFamily(q, *eps), phi, cfg);
        value = r.value;
        error_estimate = r.error_estimate;
        evaluations = r.evaluations;
        converged = r.converged;
    }
    const double abs_error = std::abs(value - expected);

    Output out;
    out.doc["command"] = "pair";
    out.doc["mode"] = o.mode;
    out.doc["q"] = q.value();
    out.doc["testfn"] = phi.label;
    out.doc["zeta"] = zeta ? json(*zeta) : json(nullptr);
    out.doc["epsilon"] = eps ? json(*eps) : json(nullptr);
    out.doc["value"] = format_complex(value);
    out.doc["expected"] = format_complex(expected);
    out.doc["abs_error"] = abs_error;
    out.doc["error_estimate"] = error_estimate;
    out.doc["evaluations"] = evaluations;
    out.doc["converged"] = converged;

    out.table.header = {"mode",  "q",         "testfn",         "zeta",        "epsilon",  "value",
                        "expected", "abs_error", "error_estimate", "evaluations", "converged"};
    out.table.rows.push_back({o.mode, cell(q.value()), phi.label, zeta ? cell(*zeta) : "", eps ? cell(*eps) : "",
                              cell(value), cell(expected), cell(abs_error), cell(error_estimate), cell(evaluations),
                              cell(converged)});
    return out;
}

// ---------------------------------------------------------------- sweep

struct SweepOpts {
    Common common;
    std::optional<std::string> q;
    std::string testfn = "gauss:a=1";
    std::optional<std::string> schedule;
};

Output cmd_sweep(const SweepOpts& o) {
    const QParam q(parse_flag_real(required(o.q, "--q", "sweep"), "--q"));
    require_delta_window(q);
    const testfns::TestFunction phi = testfns::parse_test_function(o.testfn);
    const std::vector<double> schedule =
        o.schedule ? parse_flag_list(*o.schedule, "--schedule") : deltarep::default_eps_schedule();
    const deltarep::SweepTable table = deltarep::convergence_sweep(q, phi, schedule, o.common.config());

    Output out;
    out.doc["command"] = "sweep";
    out.doc["q"] = table.q;
    out.doc["testfn"] = table.testfn;
    out.doc["limit"] = format_complex(table.limit);
    out.doc["slope"] = table.slope ? real_or_null(*table.slope) : json(nullptr);
    out.doc["converged_rows"] = static_cast<std::int64_t>(table.converged_rows());
    json rows = json::array();
    out.table.header = {"epsilon", "value", "abs_error", "slope_running", "evaluations", "converged"};
    for (const auto& r : table.rows) {
        json row;
        row["epsilon"] = r.epsilon;
        row["value"] = format_complex(r.value);
        row["abs_error"] = real_or_null(r.abs_error);
        row["slope_running"] = r.slope_running ? real_or_null(*r.slope_running) : json(nullptr);
        row["evaluations"] = r.evaluations;
        row["converged"] = r.converged;
        rows.push_back(row);
        out.table.rows.push_back({cell(r.epsilon), cell(r.value), cell(r.abs_error),
                                  r.slope_running ? cell(*r.slope_running) : "", cell(r.evaluations),
                                  cell(r.converged)});
    }
    out.doc["rows"] = rows;
    if (2 * table.converged_rows() < table.rows.size()) {
        out.exit_code = kComputationError;
        out.note = "sweep: only " + std::to_string(table.converged_rows()) + " of " +
                   std::to_string(table.rows.size()) + " rows converged";
    }
    return out;
}

// ---------------------------------------------------------------- contour-check

struct ContourOpts {
    Common common;
    std::string suite = "all";
    std::string q = "1.5";
    std::string testfn = "gauss:a=1";
    std::string zetas = "0.5,1,2";
    std::string poly = "3,2,0,1";
};

Output cmd_contour_check(const ContourOpts& o) {
    if (o.suite != "all" && o.suite != "zeta" && o.suite != "pseudo-poly") {
        throw UsageError("--suite must be zeta, pseudo-poly or all");
    }
    const QParam q(parse_flag_real(o.q, "--q"));
    require_delta_window(q);
    const testfns::TestFunction phi = testfns::parse_test_function(o.testfn);
    const std::vector<double> zetas = parse_flag_list(o.zetas, "--zeta");
    const std::vector<Complex> poly = parse_complex_list(o.poly, "--poly");
    const QuadratureConfig cfg = o.common.config();
    const ultra::UltraRep fq = ultra::fq_rep(q);

    Output out;
    out.doc["command"] = "contour-check";
    out.doc["suite"] = o.suite;
    out.doc["q"] = q.value();
    out.doc["testfn"] = phi.label;
    out.table.header = {"suite", "rep", "zeta", "poly", "value", "reference", "residual"};
    json rows = json::array();
    auto emit = [&](const char* suite, const std::string& rep, double zeta, const std::string& poly_label,
                    Complex value, Complex reference, double residual) {
        json row;
        row["suite"] = suite;
        row["rep"] = rep;
        row["zeta"] = zeta;
        row["poly"] = poly_label.empty() ? json(nullptr) : json(poly_label);
        row["value"] = format_complex(value);
        row["reference"] = format_complex(reference);
        row["residual"] = real_or_null(residual);
        rows.push_back(row);
        out.table.rows.push_back(
            {suite, rep, cell(zeta), poly_label, cell(value), cell(reference), cell(residual)});
    };

    if (o.suite != "pseudo-poly") {
        const Complex expected = (2.0 * std::numbers::pi / (2.0 - q.value())) * phi.value_at_zero;
        std::optional<Complex> first;
        double spread = 0.0;
        for (double zeta : zetas) {
            const Complex v = ultra::contour_pair(fq, phi, ultra::ContourSpec{zeta}, cfg).value;
            if (!first) first = v;
            spread = std::max(spread, std::abs(v - *first) / std::max(std::abs(*first), 1.0));
            emit("zeta", fq.label, zeta, "", v, expected, std::abs(v - expected) / std::max(std::abs(expected), 1.0));
        }
        out.doc["zeta_spread"] = spread;
    }
    if (o.suite != "zeta") {
        double worst = 0.0;
        for (const ultra::UltraRep& rep : {fq, ultra::dirac_rep()}) {
            for (double zeta : zetas) {
                const ultra::ContourSpec spec{zeta};
                const Complex base = ultra::contour_pair(rep, phi, spec, cfg).value;
                const Complex shifted = ultra::contour_pair(ultra::plus_polynomial(rep, poly), phi, spec, cfg).value;
                const double residual = std::abs(shifted - base);
                worst = std::max(worst, residual);
                emit("pseudo-poly", rep.label, zeta, o.poly, shifted, base, residual);
            }
        }
        out.doc["max_invariance_residual"] = worst;
    }
    out.doc["rows"] = rows;
    return out;
}

// ---------------------------------------------------------------- superstat

struct SuperstatOpts {
    Common common;
    std::string n = "2";
    std::string b = "1";
    std::string emax = "10";
    std::string points = "21";
    std::string mode = "plain";
    bool mc = false;
    std::string energy = "1";
    std::string samples = "1000000";
    std::string seed = "7";
};

Output cmd_superstat(const SuperstatOpts& o) {
    const double n = parse_flag_real(o.n, "--n");
    const double b = parse_flag_real(o.b, "--b");
    if (o.mode != "plain" && o.mode != "haar") throw UsageError("--mode must be plain or haar");
    const superstat::MixingDensity f = superstat::gamma_mixing(n, b);
    Output out;
    out.doc["command"] = "superstat";

    if (o.mc) {
        if (o.mode != "plain") throw UsageError("--mc estimates the plain-mode factor only");
        const double e = parse_flag_real(o.energy, "--E");
        const auto samples = parse_integer<std::int64_t>(o.samples, "--samples");
        const auto seed = parse_integer<std::uint64_t>(o.seed, "--seed");
        const auto est = superstat::mc_generalized_factor(f, e, samples, seed);
        const double closed = std::exp(-n * std::log1p(e / b));
        const double z = est.standard_error > 0.0 ? (est.estimate - closed) / est.standard_error : 0.0;
        out.doc["method"] = "monte-carlo";
        out.doc["mode"] = "plain";
        out.doc["shape"] = n;
        out.doc["rate"] = b;
        out.doc["energy"] = e;
        out.doc["samples"] = est.samples;
        out.doc["seed"] = seed;
        out.doc["estimate"] = est.estimate;
        out.doc["standard_error"] = est.standard_error;
        out.doc["closed_form"] = closed;
        out.doc["z_score"] = z;
        out.table.header = {"shape", "rate", "energy", "samples", "seed", "estimate", "standard_error",
                            "closed_form", "z_score"};
        out.table.rows.push_back({cell(n), cell(b), cell(e), cell(est.samples), std::to_string(seed),
                                  cell(est.estimate), cell(est.standard_error), cell(closed), cell(z)});
        return out;
    }

    const double emax = parse_flag_real(o.emax, "--emax");
    const auto points = parse_integer<int>(o.points, "--points");
    if (emax < 0.0) throw UsageError("--emax must be >= 0");
    if (points < 1) throw UsageError("--points must be >= 1");
    std::vector<double> grid;
    if (emax == 0.0 || points == 1) {
        grid.push_back(emax);
    } else {
        for (int i = 0; i < points; ++i) grid.push_back(emax * i / (points - 1));
    }
    const QuadratureConfig cfg = o.common.config(1e-14, 1e-12);

    out.doc["method"] = "quadrature";
    out.doc["mode"] = o.mode;
    out.doc["shape"] = n;
    out.doc["rate"] = b;
    json rows = json::array();
    if (o.mode == "haar") {
        out.table.header = {"energy", "factor", "error_estimate", "evaluations"};
        for (double e : grid) {
            const auto r = superstat::generalized_factor(f, e, superstat::WeightMode::Haar, cfg);
            json row;
            row["energy"] = e;
            row["factor"] = r.value;
            row["error_estimate"] = r.error_estimate;
            row["evaluations"] = r.evaluations;
            rows.push_back(row);
            out.table.rows.push_back({cell(e), cell(r.value), cell(r.error_estimate), cell(r.evaluations)});
        }
        out.doc["rows"] = rows;
        return out;
    }

    const auto report = superstat::gamma_matches_qexp(n, b, grid, cfg);
    out.doc["q"] = report.mapping.q;
    out.doc["beta_q"] = report.mapping.beta_q;
    out.doc["max_rel_dev"] = report.max_rel_dev;
    out.table.header = {"energy", "factor", "closed_form", "q_exponential", "rel_dev"};
    for (const auto& r : report.rows) {
        json row;
        row["energy"] = r.energy;
        row["factor"] = r.factor;
        row["closed_form"] = r.closed_form;
        row["q_exponential"] = r.q_exponential;
        row["rel_dev"] = r.rel_dev;
        rows.push_back(row);
        out.table.rows.push_back(
            {cell(r.energy), cell(r.factor), cell(r.closed_form), cell(r.q_exponential), cell(r.rel_dev)});
    }
    out.doc["rows"] = rows;
    return out;
}

// ---------------------------------------------------------------- entropy

struct EntropyOpts {
    Common common;
    std::string check = "value";
    std::string density = "gauss:sigma=1";
    std::string q = "2";
    std::string delta = "1e-4";
    std::string beta = "1";
    std::string scale = "1e-2";
    std::string constraint = "escort";
};

Output cmd_entropy(const EntropyOpts& o) {
    const QuadratureConfig cfg = o.common.config();
    Output out;
    out.doc["command"] = "entropy";
    out.doc["check"] = o.check;

    if (o.check == "value") {
        const double qv = parse_flag_real(o.q, "--q");
        const qcalc::Density f = parse_density(o.density);
        const auto h = qcalc::tsallis_entropy(make_q(qv, true), f, cfg);
        const auto s = qcalc::shannon_entropy(f, cfg);
        out.doc["density"] = f.label;
        out.doc["q"] = qv;
        out.doc["tsallis"] = h.value;
        out.doc["error_estimate"] = h.error_estimate;
        out.doc["shannon"] = s.value;
        out.table.header = {"density", "q", "tsallis", "error_estimate", "shannon"};
        out.table.rows.push_back({f.label, cell(qv), cell(h.value), cell(h.error_estimate), cell(s.value)});
    } else if (o.check == "limit") {
        const double d = parse_flag_real(o.delta, "--delta");
        if (!(d > 0.0 && d < 0.5)) throw UsageError("--delta must lie in (0, 0.5)");
        const qcalc::Density f = parse_density(o.density);
        const double hp = qcalc::tsallis_entropy(QParam(1.0 + d), f, cfg).value;
        const double hm = qcalc::tsallis_entropy(QParam(1.0 - d), f, cfg).value;
        const double central = 0.5 * (hp + hm);
        const double s = qcalc::shannon_entropy(f, cfg).value;
        out.doc["density"] = f.label;
        out.doc["delta"] = d;
        out.doc["central"] = central;
        out.doc["shannon"] = s;
        out.doc["abs_diff"] = std::abs(central - s);
        out.table.header = {"density", "delta", "central", "shannon", "abs_diff"};
        out.table.rows.push_back({f.label, cell(d), cell(central), cell(s), cell(std::abs(central - s))});
    } else if (o.check == "maximality") {
        const double qv = parse_flag_real(o.q, "--q");
        const double beta = parse_flag_real(o.beta, "--beta");
        const double scale = parse_flag_real(o.scale, "--scale");
        qcalc::MomentConstraint constraint;
        if (o.constraint == "escort") {
            constraint = qcalc::MomentConstraint::Escort;
        } else if (o.constraint == "linear") {
            constraint = qcalc::MomentConstraint::Linear;
        } else {
            throw UsageError("--constraint must be escort or linear");
        }
        const auto rep = qcalc::entropy_maximality_check(QParam(qv), beta, qcalc::default_perturbations(), scale,
                                                         cfg, constraint);
        out.doc["q"] = rep.q;
        out.doc["beta"] = rep.beta;
        out.doc["scale"] = rep.scale;
        out.doc["constraint"] = o.constraint;
        out.doc["tolerance"] = rep.tolerance;
        out.doc["reference_entropy"] = rep.reference_entropy;
        out.doc["reference_moment"] = rep.reference_moment;
        out.doc["any_exceeds"] = rep.any_exceeds;
        json rows = json::array();
        out.table.header = {"perturbation", "entropy", "delta", "iterations", "exceeds"};
        for (const auto& p : rep.outcomes) {
            json row;
            row["perturbation"] = p.label;
            row["entropy"] = p.entropy;
            row["delta"] = p.delta;
            row["iterations"] = p.projection_iterations;
            row["exceeds"] = p.exceeds;
            rows.push_back(row);
            out.table.rows.push_back({p.label, cell(p.entropy), cell(p.delta),
                                      cell(static_cast<std::int64_t>(p.projection_iterations)), cell(p.exceeds)});
        }
        out.doc["rows"] = rows;
    } else {
        throw UsageError("--check must be value, limit or maximality");
    }
    return out;
}

// ---------------------------------------------------------------- driver

int emit(const Output& result, const Common& common, std::ostream& out, std::ostream& err) {
    std::string text;
    if (common.format == "json") {
        render_json(result.doc, text, 0);
        text += '\n';
    } else {
        text = render_csv(result.table);
    }
    if (common.output) {
        std::ofstream file(*common.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << *common.output << " for writing\n";
            return kUsageError;
        }
        file << text;
    } else {
        out << text;
    }
    if (!result.note.empty()) err << result.note << '\n';
    return result.exit_code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for q-exponential delta representations"};
    app.name("qdelta");
    app.require_subcommand(1, 1);

    EvalOpts eval;
    auto* s_eval = app.add_subcommand("eval", "Evaluate a single function value");
    s_eval->add_option("--fn", eval.fn, "qexp | qexp-complex | eq | fq | ireg | truncated")->required();
    s_eval->add_option("--q", eval.q, "Nonextensivity index q");
    s_eval->add_option("--x", eval.x, "Real argument");
    s_eval->add_option("--z", eval.z, "Complex argument a+bi");
    s_eval->add_option("--k", eval.k, "Wave number (complex a+bi for eq/fq)");
    s_eval->add_option("--eps", eval.eps, "Regularisation epsilon");
    s_eval->add_option("--L", eval.L, "Half-width of the truncated integral");
    s_eval->add_option("--method", eval.method, "closed | quad")->capture_default_str();
    add_common(s_eval, eval.common, "csv");

    PairOpts pair;
    auto* s_pair = app.add_subcommand("pair", "Pair a delta representative with a test function");
    s_pair->add_option("--mode", pair.mode, "contour | real")->required();
    s_pair->add_option("--q", pair.q, "Nonextensivity index, 1 < q < 2");
    s_pair->add_option("--testfn", pair.testfn, "Test function label")->capture_default_str();
    s_pair->add_option("--zeta", pair.zeta, "Contour height (contour mode)")->capture_default_str();
    s_pair->add_option("--eps", pair.eps, "Regularisation epsilon (real mode)")->capture_default_str();
    add_common(s_pair, pair.common, "csv");

    SweepOpts sweep;
    auto* s_sweep = app.add_subcommand("sweep", "Real-axis pairing over a decreasing epsilon schedule");
    s_sweep->add_option("--q", sweep.q, "Nonextensivity index, 1 < q < 2");
    s_sweep->add_option("--testfn", sweep.testfn, "Test function label")->capture_default_str();
    s_sweep->add_option("--schedule", sweep.schedule, "Comma-separated epsilons, strictly decreasing");
    add_common(s_sweep, sweep.common, "csv");

    ContourOpts contour;
    auto* s_contour = app.add_subcommand("contour-check", "Contour-height and pseudo-polynomial invariance suites");
    s_contour->add_option("--suite", contour.suite, "zeta | pseudo-poly | all")->capture_default_str();
    s_contour->add_option("--q", contour.q, "Nonextensivity index, 1 < q < 2")->capture_default_str();
    s_contour->add_option("--testfn", contour.testfn, "Test function label")->capture_default_str();
    s_contour->add_option("--zeta", contour.zetas, "Comma-separated contour heights")->capture_default_str();
    s_contour->add_option("--poly", contour.poly, "Ascending polynomial coefficients")->capture_default_str();
    add_common(s_contour, contour.common, "csv");

    SuperstatOpts sup;
    auto* s_sup = app.add_subcommand("superstat", "Gamma-mixture statistical factors");
    s_sup->add_option("--n", sup.n, "Gamma shape")->capture_default_str();
    s_sup->add_option("--b", sup.b, "Gamma rate")->capture_default_str();
    s_sup->add_option("--emax", sup.emax, "Largest energy of the grid")->capture_default_str();
    s_sup->add_option("--points", sup.points, "Number of grid energies")->capture_default_str();
    s_sup->add_option("--mode", sup.mode, "plain | haar")->capture_default_str();
    s_sup->add_flag("--mc", sup.mc, "Monte Carlo estimate at a single energy");
    s_sup->add_option("--E", sup.energy, "Energy for --mc")->capture_default_str();
    s_sup->add_option("--samples", sup.samples, "Monte Carlo sample count")->capture_default_str();
    s_sup->add_option("--seed", sup.seed, "Monte Carlo seed")->capture_default_str();
    add_common(s_sup, sup.common, "json");

    EntropyOpts ent;
    auto* s_ent = app.add_subcommand("entropy", "Tsallis and Shannon entropies");
    s_ent->add_option("--check", ent.check, "value | limit | maximality")->capture_default_str();
    s_ent->add_option("--density", ent.density, "uniform:a=,b= | gauss:sigma= | qgauss:q=,beta=")
        ->capture_default_str();
    s_ent->add_option("--q", ent.q, "Entropic index (q-Gaussian index for maximality)")->capture_default_str();
    s_ent->add_option("--delta", ent.delta, "Half-step of the central difference in q")->capture_default_str();
    s_ent->add_option("--beta", ent.beta, "q-Gaussian beta (maximality)")->capture_default_str();
    s_ent->add_option("--scale", ent.scale, "Perturbation amplitude (maximality)")->capture_default_str();
    s_ent->add_option("--constraint", ent.constraint, "escort | linear")->capture_default_str();
    add_common(s_ent, ent.common, "csv");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    const Common* common = nullptr;
    try {
        Output result;
        if (*s_eval) {
            common = &eval.common;
            result = cmd_eval(eval);
        } else if (*s_pair) {
            common = &pair.common;
            result = cmd_pair(pair);
        } else if (*s_sweep) {
            common = &sweep.common;
            result = cmd_sweep(sweep);
        } else if (*s_contour) {
            common = &contour.common;
            result = cmd_contour_check(contour);
        } else if (*s_sup) {
            common = &sup.common;
            result = cmd_superstat(sup);
        } else {
            common = &ent.common;
            result = cmd_entropy(ent);
        }
        return emit(result, *common, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "computation failed: " << e.what() << '\n';
        return kComputationError;
    }
}

}  // namespace qdelta::cli
