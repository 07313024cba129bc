#include "saddle/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "saddle/error.hpp"
#include "saddle/expansion.hpp"
#include "saddle/genfun.hpp"
#include "saddle/quadrature.hpp"

namespace saddle::cli {

using nlohmann::json;

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

namespace {

std::string fmt_complex(Complex c) {
    return format_number(c.real()) + (c.imag() < 0 ? " - " : " + ") + format_number(std::abs(c.imag())) + "i";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidProblem("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidProblem(std::string("malformed JSON: ") + e.what());
    }
}

Complex read_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
    throw InvalidProblem("complex numbers are written as a number or {\"re\": .., \"im\": ..}");
}

struct Perturbation {
    int point = 0;
    int term = 0;
    Complex add{};
};

struct Problem {
    std::string name;
    std::vector<std::string> variables;
    Expr phase;
    Expr amplitude;
    Domain domain;
    std::vector<std::vector<double>> seeds;
    int order = 2;
    std::vector<double> lambdas;
    std::vector<int> terms;
    QuadOptions quad;
    double slope_margin = 0.15;
    std::optional<Perturbation> perturb;
    std::optional<std::string> csv;
};

std::vector<double> parse_seed(const std::string& text, const std::vector<std::string>& names) {
    std::vector<double> x(names.size(), std::nan(""));
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidProblem("seed entries are name=value: " + item);
        const std::string name = item.substr(0, eq);
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw InvalidProblem("seed names unknown variable " + name);
        try {
            x[it - names.begin()] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw InvalidProblem("seed value is not a number: " + item);
        }
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (std::isnan(x[j])) throw InvalidProblem("seed is missing variable " + names[j]);
    }
    return x;
}

Problem load_problem(const json& j, const Options& options) {
    Problem p;
    try {
        p.name = j.value("name", "problem");
        p.variables = j.at("variables").get<std::vector<std::string>>();
        const int d = static_cast<int>(p.variables.size());
        if (d < 1 || d > kMaxDim) throw InvalidProblem("between 1 and 8 variables are supported");
        if (j.contains("dimension") && j.at("dimension").get<int>() != d) {
            throw InvalidProblem("dimension does not match the number of variables");
        }
        Bindings bindings;
        if (j.contains("bindings")) {
            for (const auto& [name, text] : j.at("bindings").items()) {
                bindings[name] = parse(text.get<std::string>(), p.variables, bindings);
            }
        }
        p.phase = parse(j.at("phase").get<std::string>(), p.variables, bindings);
        p.amplitude = parse(j.value("amplitude", std::string("1")), p.variables, bindings);

        const json& dom = j.at("domain");
        const std::string kind = dom.value("kind", std::string("box"));
        if (kind == "box") p.domain.kind = Domain::Kind::Box;
        else if (kind == "halfspace_box") p.domain.kind = Domain::Kind::HalfspaceBox;
        else throw InvalidProblem("domain kind must be box or halfspace_box");
        for (const auto& b : dom.at("bounds")) {
            const auto v = b.get<std::vector<double>>();
            if (v.size() != 2 || !(v[1] > v[0])) throw InvalidProblem("each bound is [lo, hi] with hi > lo");
            p.domain.bounds.push_back({v[0], v[1]});
        }
        if (p.domain.dim() != d) throw InvalidProblem("domain bounds do not match the number of variables");

        if (j.contains("seeds")) {
            for (const auto& s : j.at("seeds")) {
                auto v = s.get<std::vector<double>>();
                if (static_cast<int>(v.size()) != d) throw InvalidProblem("seed dimension mismatch");
                p.seeds.push_back(std::move(v));
            }
        }
        for (const auto& s : options.seeds) p.seeds.push_back(parse_seed(s, p.variables));

        p.order = options.order.value_or(j.value("order", 2));
        if (p.order < 0 || p.order > 12) throw InvalidProblem("order must be between 0 and 12");
        p.lambdas = j.value("lambdas", std::vector<double>{});
        for (const double l : p.lambdas) {
            if (!(l > 0.0)) throw InvalidProblem("lambda values must be positive");
        }
        p.terms = j.value("terms", std::vector<int>{1, 2, 3});
        if (j.contains("tolerance")) {
            p.quad.abs_tol = j.at("tolerance").value("abs", p.quad.abs_tol);
            p.quad.rel_tol = j.at("tolerance").value("rel", p.quad.rel_tol);
        }
        if (options.tol) p.quad.rel_tol = *options.tol;
        p.slope_margin = j.value("slope_margin", 0.15);
        if (j.contains("perturb")) {
            const json& q = j.at("perturb");
            p.perturb = Perturbation{q.value("point", 0), q.value("term", 0), read_complex(q.at("add"))};
        }
        if (j.contains("output") && j.at("output").contains("csv")) {
            p.csv = j.at("output").at("csv").get<std::string>();
        }
        if (options.csv_path) p.csv = options.csv_path;
    } catch (const json::exception& e) {
        throw InvalidProblem(std::string("problem file: ") + e.what());
    }
    return p;
}

// Runs `body`, mapping library errors onto exit codes.
int guarded(std::ostream& err, std::string& message, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        message = e.what();
        err << "parse error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const InvalidProblem& e) {
        message = e.what();
        err << "invalid problem: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const InadmissiblePhase& e) {
        message = e.what();
        err << "inadmissible phase: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DimensionMismatch& e) {
        message = e.what();
        err << "dimension mismatch: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DegenerateHessian& e) {
        message = e.what();
        err << "degenerate stationary point: " << e.what() << '\n';
        return kDegenerate;
    } catch (const NoStationaryPoints& e) {
        message = e.what();
        err << "no stationary points: " << e.what() << " (best gradient residual "
            << format_number(e.best_residual()) << ")\n";
        return kNoStationaryPoints;
    } catch (const BudgetExceeded& e) {
        message = e.what();
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const UnsupportedGeometry& e) {
        message = e.what();
        err << "unsupported geometry: " << e.what() << '\n';
        return kUnsupportedGeometry;
    } catch (const SingularPoint& e) {
        message = e.what();
        err << "singular point: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const Error& e) {
        message = e.what();
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

class Expectations {
public:
    explicit Expectations(json block) : block_(std::move(block)) {}

    const json& block() const { return block_; }
    bool has(const char* key) const { return block_.is_object() && block_.contains(key); }
    void fail(std::string what) { mismatches_.push_back(std::move(what)); }

    // Final exit code for the run.
    int finish(int code, const std::string& message, const Options& options, std::ostream& out) {
        if (!options.check_expectations) return code;
        const int want = block_.is_object() ? block_.value("exit_code", 0) : 0;
        if (code != want) fail("exit code " + std::to_string(code) + ", expected " + std::to_string(want));
        if (has("error_contains")) {
            const auto needle = block_.at("error_contains").get<std::string>();
            if (message.find(needle) == std::string::npos) fail("error message lacks \"" + needle + "\"");
        }
        for (const auto& m : mismatches_) out << "expect: MISMATCH " << m << '\n';
        if (mismatches_.empty()) out << "expect: ok\n";
        return mismatches_.empty() ? kOk : kCheckFailed;
    }

private:
    json block_;
    std::vector<std::string> mismatches_;
};

json expect_block(const std::string& path) {
    try {
        const json j = read_json(path);
        return j.contains("expect") ? j.at("expect") : json::object();
    } catch (const Error&) {
        return json::object();
    }
}

Expansion build_expansion(const Problem& p) {
    Expansion e = expand(p.phase, p.amplitude, p.domain, p.order, p.seeds);
    if (p.perturb) {
        const auto& q = *p.perturb;
        if (q.point < 0 || q.point >= static_cast<int>(e.points.size()) || q.term < 0 ||
            q.term >= static_cast<int>(e.points[q.point].coefficients.size())) {
            throw InvalidProblem("perturb names a coefficient that does not exist");
        }
        e.points[q.point].coefficients[q.term] += q.add;
    }
    return e;
}

void print_expansion(const Problem& p, const Expansion& e, std::ostream& out) {
    out << "problem: " << p.name << '\n';
    out << "dimension " << e.dim << ", order L = " << p.order << ", stationary points " << e.points.size() << '\n';
    for (std::size_t k = 0; k < e.points.size(); ++k) {
        const auto& pt = e.points[k];
        out << "point " << k << ": (";
        for (std::size_t j = 0; j < pt.report.location.size(); ++j) {
            out << (j ? ", " : "") << p.variables[j] << " = " << format_number(pt.report.location[j].real());
        }
        out << ")\n";
        out << "  phi(x) = " << fmt_complex(pt.report.phi_value) << "  (prefactor exp(-lambda*phi(x)))\n";
        if (pt.report.boundary_half) {
            out << "  boundary: face " << p.variables[pt.report.face->axis]
                << (pt.report.face->side > 0 ? " = lower bound" : " = upper bound") << ", half-space factor 1/2";
            out << (pt.extended_beyond_leading ? "; terms past c_0 extended by the flattened-face push-forward\n"
                                               : "; leading term only\n");
        } else {
            out << "  boundary: interior\n";
        }
        out << "  det H = " << fmt_complex(pt.report.hessian.det) << ", orientation "
            << (pt.orientation > 0 ? "+1" : "-1") << ", Morse residual " << format_number(pt.morse_residual)
            << '\n';
        out << "  l  power           re                  im\n";
        for (std::size_t l = 0; l < pt.coefficients.size(); ++l) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-2zu lambda^-%-6s  %-19s %s\n", l,
                          ((e.dim + static_cast<int>(l)) % 2 ? std::to_string(e.dim + l) + "/2"
                                                              : std::to_string((e.dim + l) / 2))
                              .c_str(),
                          format_number(pt.coefficients[l].real()).c_str(),
                          format_number(pt.coefficients[l].imag()).c_str());
            out << line;
        }
    }
}

void check_coefficients(const Expansion& e, Expectations& expect) {
    if (expect.has("points")) {
        const int want = expect.block().at("points").get<int>();
        if (static_cast<int>(e.points.size()) != want) {
            expect.fail(std::to_string(e.points.size()) + " points, expected " + std::to_string(want));
        }
    }
    if (!expect.has("coefficients")) return;
    for (const auto& c : expect.block().at("coefficients")) {
        const int k = c.value("point", 0), l = c.value("l", 0);
        const double tol = c.value("tol", 1e-10);
        if (k >= static_cast<int>(e.points.size()) || l >= static_cast<int>(e.points[k].coefficients.size())) {
            expect.fail("coefficient point " + std::to_string(k) + " l " + std::to_string(l) + " missing");
            continue;
        }
        const Complex got = e.points[k].coefficients[l];
        const Complex want = read_complex(c.at("value"));
        if (std::abs(got - want) > tol) {
            expect.fail("c_" + std::to_string(l) + " at point " + std::to_string(k) + " = " + fmt_complex(got) +
                        ", expected " + fmt_complex(want));
        }
    }
}

}  // namespace

int run_expand(const std::string& path, const Options& options, std::ostream& out, std::ostream& err) {
    Expectations expect(expect_block(path));
    std::string message;
    const int code = guarded(err, message, [&] {
        const Problem p = load_problem(read_json(path), options);
        const Expansion e = build_expansion(p);
        print_expansion(p, e, out);
        check_coefficients(e, expect);
        return int{kOk};
    });
    return expect.finish(code, message, options, out);
}

int run_verify(const std::string& path, const Options& options, std::ostream& out, std::ostream& err) {
    Expectations expect(expect_block(path));
    std::string message;
    const int code = guarded(err, message, [&] {
        const Problem p = load_problem(read_json(path), options);
        if (p.lambdas.empty()) throw InvalidProblem("verify needs a non-empty lambdas ladder");
        const Expansion e = build_expansion(p);
        check_coefficients(e, expect);
        const int d = e.dim;
        const int available = e.available_terms();
        std::vector<int> terms;
        for (const int n : p.terms) {
            if (n < 1) throw InvalidProblem("terms must be positive");
            if (n <= available) terms.push_back(n);
            else out << "note: N = " << n << " skipped, only " << available << " terms available\n";
        }

        struct Row {
            double lambda;
            Complex quad;
            double est;
            std::vector<Complex> partial;
        };
        std::vector<Row> rows;
        bool budget = false;
        for (const double lambda : p.lambdas) {
            const QuadratureResult q = integrate(p.phase, p.amplitude, p.domain, lambda, p.quad);
            budget = budget || q.budget_exceeded;
            Row r{lambda, q.value, q.abs_error_estimate, {}};
            for (const int n : terms) r.partial.push_back(evaluate_partial_sum(e, lambda, n));
            rows.push_back(std::move(r));
        }

        out << "verify: " << p.name << "  (d = " << d << ", L = " << p.order << ", points " << e.points.size()
            << ")\n";
        out << "lambda        quadrature                              error estimate\n";
        for (const auto& r : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%-13s %-39s %s\n", format_number(r.lambda).c_str(),
                          fmt_complex(r.quad).c_str(), format_number(r.est).c_str());
            out << line;
        }

        bool all_pass = true;
        std::vector<std::string> slope_text(terms.size());
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const int n = terms[t];
            const double threshold = -(d + n) / 2.0 + p.slope_margin;
            std::vector<std::pair<double, double>> ladder;
            int above_floor = 0;
            for (const auto& r : rows) {
                const double error = std::abs(r.quad - r.partial[t]);
                const double floor = 10.0 * r.est + 1e-12 * std::abs(r.quad);
                if (error > floor) {
                    ladder.emplace_back(r.lambda, error);
                    ++above_floor;
                }
            }
            std::string status;
            if (above_floor < 3) {
                // Remainder indistinguishable from quadrature noise.
                slope_text[t] = "EXACT";
                status = "PASS (remainder below the quadrature noise floor)";
            } else {
                const double slope = decay_slope(ladder);
                slope_text[t] = format_number(slope);
                const bool pass = slope <= threshold;
                all_pass = all_pass && pass;
                status = std::string(pass ? "PASS" : "FAIL") + " (slope " + slope_text[t] + ", threshold " +
                         format_number(threshold) + ")";
            }
            out << "N = " << n << ": " << status << '\n';
        }

        if (p.csv) {
            std::ofstream csv(*p.csv);
            if (!csv) throw InvalidProblem("cannot write " + *p.csv);
            csv << "lambda,N,quadrature_re,quadrature_im,partial_sum_re,partial_sum_im,abs_error,fitted_slope_per_N\r\n";
            for (std::size_t t = 0; t < terms.size(); ++t) {
                for (const auto& r : rows) {
                    const Complex s = r.partial[t];
                    csv << csv_field(format_number(r.lambda)) << ',' << terms[t] << ','
                        << csv_field(format_number(r.quad.real())) << ',' << csv_field(format_number(r.quad.imag()))
                        << ',' << csv_field(format_number(s.real())) << ',' << csv_field(format_number(s.imag()))
                        << ',' << csv_field(format_number(std::abs(r.quad - s))) << ','
                        << csv_field(slope_text[t]) << "\r\n";
                }
            }
        }
        if (budget) {
            err << "quadrature budget exceeded; the report above is partial\n";
            return int{kBudgetExceeded};
        }
        out << (all_pass ? "verify: PASS\n" : "verify: FAIL\n");
        return all_pass ? int{kOk} : int{kCheckFailed};
    });
    return expect.finish(code, message, options, out);
}

int run_genfun(const std::string& path, const Options& options, std::ostream& out, std::ostream& err) {
    Expectations expect(expect_block(path));
    std::string message;
    const int code = guarded(err, message, [&] {
        const json j = read_json(path);
        GenFunProblem p;
        std::vector<double> kappas;
        std::vector<int> ss;
        std::vector<double> us;
        BoundarySide side = BoundarySide::Lower;
        std::string name;
        try {
            name = j.value("name", "genfun");
            const std::vector<std::string> z{j.value("variable", std::string("z"))};
            p.v1 = parse(j.at("v1").get<std::string>(), z);
            p.v2 = parse(j.at("v2").get<std::string>(), z);
            kappas = j.at("kappa").get<std::vector<double>>();
            ss = j.at("s").get<std::vector<int>>();
            us = j.value("boundary_u", std::vector<double>{});
            const std::string b = j.value("boundary_side", std::string("lower"));
            if (b == "upper") side = BoundarySide::Upper;
            else if (b != "lower") throw InvalidProblem("boundary_side is lower or upper");
        } catch (const json::exception& e) {
            throw InvalidProblem(std::string("problem file: ") + e.what());
        }
        if (kappas.empty() || ss.empty()) throw InvalidProblem("kappa and s lists must be non-empty");
        for (const int s : ss) {
            if (s < 1) throw InvalidProblem("s values must be positive");
        }
        const GenFunDerivatives g = validate(p);
        const double inv_delta = 1.0 / std::abs(g.delta());
        const double kb = side == BoundarySide::Lower ? g.lower() : g.upper();
        const double var = boundary_variance(p, side);

        out << "genfun: " << name << '\n';
        out << "v1'(1) = " << format_number(g.v1p) << ", v2'(1) = " << format_number(g.v2p)
            << ", interval (" << format_number(g.lower()) << ", " << format_number(g.upper()) << ")\n";

        const int s_max = *std::max_element(ss.begin(), ss.end());
        int r_max = 0;
        for (const double k : kappas) r_max = std::max(r_max, static_cast<int>(std::lround(k * s_max)));
        for (const double u : us) {
            for (const int s : ss) r_max = std::max(r_max, r_for(p, s, u, side));
        }
        r_max = std::max(r_max, static_cast<int>(std::lround(kb * s_max)));
        const CoefficientTable table = exact_coefficients(p, r_max, s_max);

        std::optional<double> prediction;
        double worst_scaled = 0.0;
        out << "kappa     s      r      a_rs                 a_rs*|delta|     (a_rs*|delta|-1)*s\n";
        for (const double kappa : kappas) {
            GenFunProblem pk = p;
            pk.kappa = kappa;
            std::string note;
            bool interior = false;
            try {
                const double pred = saddle_prediction(pk);
                prediction = pred;
                interior = true;
                note = "central constant " + format_number(pred) + " (pipeline agrees)";
            } catch (const BoundaryDirection&) {
                if (std::abs(kappa - g.lower()) <= 1e-12 || std::abs(kappa - g.upper()) <= 1e-12) {
                    note = "boundary branch: kappa is an endpoint; pipeline constant " +
                           format_number(pipeline_constant(pk, kappa)) + " = 1/2 of the central constant";
                } else {
                    note = "boundary branch: kappa outside the interval; no central prediction "
                           "(coefficients are exponentially small relative to it)";
                }
            }
            out << "# kappa = " << format_number(kappa) << ": " << note << '\n';
            for (const int s : ss) {
                const int r = static_cast<int>(std::lround(kappa * s));
                const double a = table.at(r, s).real();
                const double ratio = a / inv_delta;
                char line[160];
                std::snprintf(line, sizeof line, "%-9s %-6d %-6d %-20s %-16s %s\n", format_number(kappa).c_str(), s,
                              r, format_number(a).c_str(), format_number(ratio).c_str(),
                              interior ? format_number((ratio - 1.0) * s).c_str() : "-");
                out << line;
                if (interior) worst_scaled = std::max(worst_scaled, std::abs(ratio - 1.0) * s);
            }
        }

        out << "boundary (" << (side == BoundarySide::Lower ? "lower" : "upper") << " endpoint kappa_b = "
            << format_number(kb) << ", sigma_b^2 = " << format_number(var) << ")\n";
        const double endpoint = pipeline_constant(p, kb);
        out << "pipeline at kappa_b: " << format_number(endpoint) << " (central/2 = " << format_number(0.5 * inv_delta)
            << ")\n";
        double boundary_gap = 0.0;
        if (!us.empty()) {
            if (!(var > 0.0)) {
                out << "note: sigma_b^2 = 0, no Gaussian window; rows use r = round(kappa_b s)\n";
            }
            out << "u         s      r      a_rs*|delta|     Phi(u)\n";
            for (const double u : us) {
                for (const int s : ss) {
                    const int r = r_for(p, s, u, side);
                    if (r < 0) throw InvalidProblem("boundary_u places r below 0");
                    const double ratio = table.at(r, s).real() * std::abs(g.delta());
                    const double lim = boundary_limit(p, u) * std::abs(g.delta());
                    char line[160];
                    std::snprintf(line, sizeof line, "%-9s %-6d %-6d %-16s %s\n", format_number(u).c_str(), s, r,
                                  format_number(ratio).c_str(), format_number(lim).c_str());
                    out << line;
                    if (s == s_max) boundary_gap = std::max(boundary_gap, std::abs(ratio - lim));
                }
            }
        }

        if (expect.has("prediction")) {
            const double want = expect.block().at("prediction").get<double>();
            if (!prediction || std::abs(*prediction - want) > 1e-8) expect.fail("central prediction differs");
        }
        if (expect.has("ratio_band")) {
            const double c = expect.block().at("ratio_band").get<double>();
            if (worst_scaled > c) {
                expect.fail("|a_rs*|delta| - 1|*s reaches " + format_number(worst_scaled) + " > " + format_number(c));
            }
        }
        if (expect.has("boundary_band")) {
            const double b = expect.block().at("boundary_band").get<double>();
            if (boundary_gap > b) {
                expect.fail("boundary ratio off Phi(u) by " + format_number(boundary_gap) + " at s = " +
                            std::to_string(s_max));
            }
        }
        if (expect.has("endpoint_pipeline")) {
            const double want = expect.block().at("endpoint_pipeline").get<double>();
            if (std::abs(endpoint - want) > 1e-8) expect.fail("endpoint pipeline constant differs");
        }
        return int{kOk};
    });
    return expect.finish(code, message, options, out);
}

}  // namespace saddle::cli
