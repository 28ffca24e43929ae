// Command-line front end: beta, census, exact, mc, bounds, threshold, verify.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aniso/bounds.hpp"
#include "aniso/contours.hpp"
#include "aniso/errors.hpp"
#include "aniso/exact_connectivity.hpp"
#include "aniso/mc_engine.hpp"
#include "aniso/records.hpp"
#include "aniso/verify.hpp"

using namespace aniso;

namespace {

enum Exit { kOk = 0, kInvariant = 1, kUsage = 2, kBudget = 3, kDomain = 4 };

struct Settings {
    std::optional<double> p_h, p_v, eta;
    std::string x, y = "0,0", region = "-1,3,-1,3", engine = "auto", rho, format = "json", out;
    std::optional<std::uint64_t> n, seed, budget;
    std::optional<int> n_max;
    unsigned threads = 0;
    std::vector<int> positional;
    bool fast = false, paired = false;
    std::string inject_fault;
};

std::vector<int> parse_ints(const std::string& s, std::size_t count, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(what + ": cannot parse '" + s + "' as " + std::to_string(count) + " integers");
        }
    }
    if (out.size() != count)
        throw UsageError(what + ": expected " + std::to_string(count) + " comma-separated integers, got '" + s + "'");
    return out;
}

Vertex parse_vertex(const std::string& s, const std::string& what) {
    const auto v = parse_ints(s, 2, what);
    return {v[0], v[1]};
}

LatticeRegion parse_region(const std::string& s) {
    const auto v = parse_ints(s, 4, "--region");
    return {v[0], v[1], v[2], v[3]};
}

Params parse_params(const Settings& s) {
    if (!s.p_h) throw UsageError("--p-h is required");
    if (s.eta && s.p_v) throw UsageError("give either --p-v or --eta, not both");
    if (s.eta) return params_from_eta(*s.p_h, *s.eta);
    if (!s.p_v) throw UsageError("--p-v or --eta is required");
    return make_params(*s.p_h, *s.p_v);
}

std::pair<int, int> parse_rho(const std::string& s) {
    if (s.empty()) throw UsageError("--rho is required");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return {std::stoi(s), 1};
        return {std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1))};
    } catch (const std::exception&) {
        throw UsageError("--rho: cannot parse '" + s + "'");
    }
}

Vertex target_of(const Settings& s) {
    if (s.positional.size() == 2) return {s.positional[0], s.positional[1]};
    if (!s.positional.empty()) throw UsageError("expected two coordinates x1 x2");
    if (s.x.empty()) throw UsageError("--x is required");
    return parse_vertex(s.x, "--x");
}

Json config_json(const std::string& command, const Settings& s) {
    Json c{{"command", command}};
    if (s.p_h) c["p_h"] = *s.p_h;
    if (s.p_v) c["p_v"] = *s.p_v;
    if (s.eta) c["eta"] = *s.eta;
    if (!s.x.empty()) c["x"] = s.x;
    if (!s.positional.empty()) c["positional"] = s.positional;
    if (command == "exact" || command == "mc") {
        c["y"] = s.y;
        c["region"] = s.region;
    }
    if (command == "exact") c["engine"] = s.engine;
    if (!s.rho.empty()) c["rho"] = s.rho;
    if (s.n) c["n"] = *s.n;
    if (s.seed) c["seed"] = *s.seed;
    if (s.n_max) c["n_max"] = *s.n_max;
    if (s.budget) c["budget"] = *s.budget;
    if (s.paired) c["paired"] = true;
    if (s.fast) c["fast"] = true;
    if (!s.inject_fault.empty()) c["inject_fault"] = s.inject_fault;
    c["threads"] = s.threads;
    c["format"] = s.format;
    return c;
}

class Output {
public:
    Output(const std::string& command, const Settings& s) : command_(command), settings_(s) {
        if (s.format != "json" && s.format != "csv") throw UsageError("--format must be json or csv");
    }

    [[nodiscard]] bool csv() const { return settings_.format == "csv"; }

    void emit_json(const Json& result) {
        Json doc{{"tool", kToolVersion}, {"config", config_json(command_, settings_)}, {"result", result}};
        write(doc.dump(2) + "\n");
    }

    void emit_csv(const std::string& body) {
        write("# tool: " + std::string(kToolVersion) + "\n# config: " + config_json(command_, settings_).dump() +
              "\n" + body);
    }

private:
    void write(const std::string& text) {
        if (settings_.out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(settings_.out);
        if (!f) throw UsageError("cannot open output file " + settings_.out);
        f << text;
    }

    std::string command_;
    const Settings& settings_;
};

int cmd_beta(const Settings& s) {
    Output out("beta", s);
    if (!s.rho.empty()) {
        const auto [num, den] = parse_rho(s.rho);
        if (den != 1) throw UsageError("the alpha table needs an integer --rho");
        const auto rep = alpha_sequence(num, s.n_max.value_or(4));
        if (out.csv()) {
            std::string body = "n,alpha,root\n";
            for (const auto& row : rep.rows)
                body += std::to_string(row.n) + "," + row.alpha.str() + "," + format_double(row.root) + "\n";
            out.emit_csv(body);
        } else {
            out.emit_json(to_json(rep));
        }
        return rep.supermultiplicativity_violations.empty() && rep.bound_violations.empty() ? kOk : kInvariant;
    }
    const Vertex x = target_of(s);
    const BigInt b = beta(x);
    if (out.csv())
        out.emit_csv("x1,x2,beta\n" + std::to_string(x.x) + "," + std::to_string(x.y) + "," + b.str() + "\n");
    else
        out.emit_json({{"x", to_json(x)}, {"beta", b.str()}});
    return kOk;
}

int cmd_census(const Settings& s) {
    Output out("census", s);
    const Vertex x = target_of(s);
    const int norm = norm_x(x);
    if (!s.n_max) throw UsageError("--n-max is required");
    if (*s.n_max < norm)
        throw UsageError("--n-max " + std::to_string(*s.n_max) + " is below ||x|| = " + std::to_string(norm));
    CensusOptions opts;
    opts.threads = s.threads;
    if (s.budget) opts.node_budget = *s.budget;
    const auto c = census(x, *s.n_max, opts);
    std::vector<LemmaReport> lemma;
    bool all = true;
    for (int m = 0; m <= std::min(*s.n_max - norm, norm / 2); ++m) {
        lemma.push_back(verify_counting_lemma(x, m, c));
        all = all && lemma.back().holds;
    }
    if (out.csv()) {
        std::string body = census_csv(c) + "\nm,lhs,rhs,holds\n";
        for (const auto& r : lemma)
            body += std::to_string(r.m) + "," + r.lhs.str() + "," + r.rhs.str() + "," + (r.holds ? "true" : "false") +
                    "\n";
        out.emit_csv(body);
    } else {
        Json rows = Json::array();
        for (const auto& r : lemma) rows.push_back(to_json(r));
        out.emit_json({{"census", to_json(c)}, {"lemma", rows}});
    }
    return all ? kOk : kInvariant;
}

int cmd_exact(const Settings& s) {
    Output out("exact", s);
    const auto region = parse_region(s.region);
    const auto params = parse_params(s);
    const Vertex x = s.x.empty() ? Vertex{0, 0} : parse_vertex(s.x, "--x");
    const Vertex y = parse_vertex(s.y, "--y");
    ExactLimits limits;
    limits.threads = s.threads;
    if (s.budget) limits.max_edges = *s.budget;
    ExactResult r;
    if (s.engine == "brute_force")
        r = tau_fN_bruteforce(region, params, x, y, limits);
    else if (s.engine == "rational")
        r = tau_fN_bruteforce_rational(region, params, x, y, limits);
    else if (s.engine == "transfer")
        r = tau_fN_transfer(region, params, x, y, limits);
    else if (s.engine == "auto")
        r = region.edge_count() <= 20 ? tau_fN_bruteforce(region, params, x, y, limits)
                                      : tau_fN_transfer(region, params, x, y, limits);
    else
        throw UsageError("--engine must be auto, brute_force, rational or transfer");
    if (out.csv())
        out.emit_csv(exact_csv_header() + "\n" + exact_csv_row(r) + "\n");
    else
        out.emit_json(to_json(r));
    return kOk;
}

int cmd_mc(const Settings& s) {
    Output out("mc", s);
    if (!s.seed) throw UsageError("mc requires --seed for reproducibility");
    if (!s.n) throw UsageError("mc requires --n");
    const auto region = parse_region(s.region);
    const auto params = parse_params(s);
    McOptions opts{s.threads};
    if (s.paired) {
        const Vertex x = parse_vertex(s.x.empty() ? "1,2" : s.x, "--x");
        const auto e = estimate_pair_difference(region, params, x, *s.n, *s.seed, opts);
        if (out.csv())
            out.emit_csv("seed,n,d_hat,std_err,ci_lo,ci_hi,reflection_mismatches\n" + std::to_string(e.seed) + "," +
                         std::to_string(e.n_samples) + "," + format_double(e.d_hat) + "," + format_double(e.std_err) +
                         "," + format_double(e.ci_lo) + "," + format_double(e.ci_hi) + "," +
                         std::to_string(e.reflection_mismatches) + "\n");
        else
            out.emit_json(to_json(e));
        return e.reflection_mismatches == 0 ? kOk : kInvariant;
    }
    const Vertex x = s.x.empty() ? Vertex{0, 0} : parse_vertex(s.x, "--x");
    const Vertex y = parse_vertex(s.y, "--y");
    const auto e = estimate_tau_fN(region, params, x, y, *s.n, *s.seed, opts);
    if (out.csv())
        out.emit_csv(estimate_csv_header() + "\n" + estimate_csv_row(e) + "\n");
    else
        out.emit_json(to_json(e));
    return kOk;
}

int cmd_bounds(const Settings& s) {
    Output out("bounds", s);
    const auto params = parse_params(s);
    const auto r = inequality_certificate(params, target_of(s));
    if (out.csv())
        out.emit_csv(bounds_csv_header() + "\n" + bounds_csv_row(r) + "\n");
    else
        out.emit_json(to_json(r));
    return kOk;
}

int cmd_threshold(const Settings& s) {
    Output out("threshold", s);
    if (!s.eta) throw UsageError("--eta is required");
    const auto [num, den] = parse_rho(s.rho);
    const int n_max = s.n_max.value_or(3);
    const auto r = s.p_h ? threshold_at(*s.p_h, *s.eta, num, den, n_max) : p_star_search(*s.eta, num, den, n_max);
    if (out.csv())
        out.emit_csv(threshold_csv_header() + "\n" + threshold_csv_rows(r));
    else
        out.emit_json(to_json(r));
    return kOk;
}

int cmd_verify(const Settings& s) {
    if (!s.inject_fault.empty() && s.inject_fault != "beta")
        throw UsageError("--inject-fault supports only 'beta'");
    VerifyOptions opts;
    opts.fast = s.fast;
    opts.corrupt_beta = s.inject_fault == "beta";
    opts.threads = s.threads;
    const auto checks = run_verify(opts);
    bool all = true;
    std::ostringstream table;
    for (const auto& c : checks) {
        all = all && c.passed;
        char line[256];
        std::snprintf(line, sizeof line, "%-4s  %-45s %10.1f ms  ", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                      c.runtime_ms);
        table << line << c.detail << "\n";
    }
    std::cout << table.str();
    if (!all) {
        for (const auto& c : checks)
            if (!c.passed) std::cerr << "invariant failed: " << c.name << "\n";
    }
    return all ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic bond percolation: contour census, exact finite-volume connectivity, "
                 "Monte Carlo and closed-form bounds"};
    app.set_version_flag("--version", kToolVersion);
    app.set_config("--config", "", "flat key=value file; flags win over it, and it wins over ANISO_* variables");
    app.require_subcommand(1);

    Settings s;
    // Comma lists such as 1,2 arrive split when read from a config file; join them back.
    auto coordinates = [](CLI::Option* opt) {
        opt->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join)->expected(1, 4);
    };
    app.add_option("--p-h", s.p_h, "open probability of horizontal edges")->envname("ANISO_P_H");
    app.add_option("--p-v", s.p_v, "open probability of vertical edges")->envname("ANISO_P_V");
    app.add_option("--eta", s.eta, "lambda_v / lambda_h; derives p_v from p_h")->envname("ANISO_ETA");
    coordinates(app.add_option("--x", s.x, "target vertex x1,x2")->envname("ANISO_X"));
    coordinates(app.add_option("--y", s.y, "second vertex for exact/mc, default 0,0")->envname("ANISO_Y"));
    coordinates(app.add_option("--region", s.region, "box x_lo,x_hi,y_lo,y_hi")->envname("ANISO_REGION"));
    app.add_option("--n", s.n, "Monte Carlo sample count")->envname("ANISO_N");
    app.add_option("--seed", s.seed, "Monte Carlo seed")->envname("ANISO_SEED");
    app.add_option("--n-max", s.n_max, "census length cap, or largest n on the slope line")->envname("ANISO_N_MAX");
    app.add_option("--rho", s.rho, "slope, an integer or num/den")->envname("ANISO_RHO");
    app.add_option("--engine", s.engine, "auto, brute_force, rational or transfer")->envname("ANISO_ENGINE");
    app.add_option("--out", s.out, "write output to this file")->envname("ANISO_OUT");
    app.add_option("--format", s.format, "json or csv")->envname("ANISO_FORMAT");
    app.add_option("--threads", s.threads, "worker cap, 0 = all cores")->envname("ANISO_THREADS");
    app.add_option("--budget", s.budget, "census node budget, or brute-force edge cap for exact")
        ->envname("ANISO_BUDGET");

    auto* beta_cmd = app.add_subcommand("beta", "number of minimal contours, or the alpha_n table with --rho");
    auto* census_cmd = app.add_subcommand("census", "contour census with the counting-lemma table");
    auto* exact_cmd = app.add_subcommand("exact", "exact finite-volume truncated connectivity");
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate, or the paired x/x' difference with --paired");
    auto* bounds_cmd = app.add_subcommand("bounds", "lower and upper bounds and the inequality certificate");
    auto* threshold_cmd = app.add_subcommand("threshold", "p* search along a slope, or rows at a fixed --p-h");
    auto* verify_cmd = app.add_subcommand("verify", "cross-engine invariant suite");
    for (auto* sub : {beta_cmd, census_cmd, exact_cmd, mc_cmd, bounds_cmd, threshold_cmd, verify_cmd})
        sub->fallthrough();
    for (auto* sub : {beta_cmd, census_cmd, bounds_cmd})
        sub->add_option("coords", s.positional, "x1 x2")->expected(0, 2);
    mc_cmd->add_flag("--paired", s.paired, "estimate P(0<->x) - P(0<->x')");
    verify_cmd->add_flag("--fast", s.fast, "desk-scale subset");
    verify_cmd->add_option("--inject-fault", s.inject_fault, "test mode: corrupt 'beta'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*beta_cmd) return cmd_beta(s);
        if (*census_cmd) return cmd_census(s);
        if (*exact_cmd) return cmd_exact(s);
        if (*mc_cmd) return cmd_mc(s);
        if (*bounds_cmd) return cmd_bounds(s);
        if (*threshold_cmd) return cmd_threshold(s);
        if (*verify_cmd) return cmd_verify(s);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvariant;
    }
    return kUsage;
}
