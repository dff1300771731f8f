// Command line front end: exact arithmetic scans over polynomial values and
// elliptic curve families.
//
// Exit codes: 0 success, 1 usage error, 2 domain rejection (a hypothesis of
// the requested computation is violated), 3 internal or effort-cap error.

#include "gpftk/arith.hpp"
#include "gpftk/bounds.hpp"
#include "gpftk/ellcurve.hpp"
#include "gpftk/families.hpp"
#include "gpftk/integer.hpp"
#include "gpftk/poly_parse.hpp"
#include "gpftk/polyz.hpp"
#include "gpftk/scan.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace gpftk;

struct ScanFlags {
    std::string out;
    std::string format = "csv";
    std::string resume;
    int chunk = 1024;
    int threads = 1;
    std::uint64_t seed = arith::FactorConfig{}.seed;
    std::uint64_t rho_cap = arith::FactorConfig{}.max_rho_iterations;
    std::int64_t abort_during_chunk = -1;
};

void add_scan_flags(CLI::App* cmd, ScanFlags& sf) {
    cmd->add_option("--out", sf.out, "write records to this file (enables checkpointing)");
    cmd->add_option("--format", sf.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--resume", sf.resume, "resume from this checkpoint file");
    cmd->add_option("--chunk", sf.chunk, "rows per checkpointed chunk")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", sf.threads, "parallel chunk workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", sf.seed, "seed for the factoring rho stage");
    cmd->add_option("--rho-cap", sf.rho_cap, "factoring effort cap (rho iterations)");
    cmd->add_option("--abort-during-chunk", sf.abort_during_chunk,
                    "testing hook: die while writing this chunk")
        ->group("");
}

void fill_config(scan::ScanConfig& cfg, const ScanFlags& sf, std::int64_t from, std::int64_t to) {
    cfg.from = from;
    cfg.to = to;
    cfg.out_path = sf.out;
    cfg.format = sf.format;
    cfg.chunk_size = sf.chunk;
    cfg.threads = sf.threads;
    cfg.factor.seed = sf.seed;
    cfg.factor.max_rho_iterations = sf.rho_cap;
    cfg.abort_during_chunk = sf.abort_during_chunk;
    if (!sf.resume.empty() && sf.resume != cfg.checkpoint_path())
        throw usage_error("--resume must name the checkpoint of --out (" + cfg.checkpoint_path() +
                          ")");
}

// Summary goes to stdout when records went to a file, otherwise to stderr so
// that piped record output stays clean.
std::FILE* summary_stream(const scan::ScanConfig& cfg) {
    return cfg.out_path.empty() ? stderr : stdout;
}

void print_common_summary(std::FILE* os, const scan::ScanOutcome& oc) {
    std::fprintf(os, "rows: ok=%llu zero_value=%llu bad_fiber=%llu factor_cap=%llu\n",
                 static_cast<unsigned long long>(oc.summary.rows_ok),
                 static_cast<unsigned long long>(oc.summary.rows_zero),
                 static_cast<unsigned long long>(oc.summary.rows_bad_fiber),
                 static_cast<unsigned long long>(oc.summary.rows_capped));
}

void print_minima(std::FILE* os, const scan::SummaryState& s) {
    std::fprintf(os, "running minima of gpf (%zu):\n", s.minima.size());
    for (const auto& [n, g] : s.minima)
        std::fprintf(os, "  n=%lld  gpf=%s\n", static_cast<long long>(n), g.str().c_str());
}

Int parse_int(const std::string& text) {
    try {
        return Int(text);
    } catch (const std::exception&) {
        throw usage_error("not an integer: '" + text + "'");
    }
}

int cmd_factor(const std::string& m_text, std::uint64_t seed, std::uint64_t cap) {
    Int m = parse_int(m_text);
    arith::FactorConfig cfg{seed, cap};
    arith::Factorization f = arith::factorize(m, cfg);
    std::string repr = f.sign < 0 ? "-1" : "";
    for (const auto& pp : f.factors) {
        if (!repr.empty()) repr += " * ";
        repr += pp.prime.str();
        if (pp.exponent > 1) repr += "^" + std::to_string(pp.exponent);
    }
    if (repr.empty()) repr = "1";
    std::printf("%s = %s\n", m.str().c_str(), repr.c_str());
    std::printf("gpf: %s\n", arith::greatest_prime_factor(m, cfg).str().c_str());
    std::printf("rad: %s\n", arith::radical(m, cfg).str().c_str());
    std::printf("valuation_product: %s\n", arith::valuation_product(m, cfg).str().c_str());
    if (!f.certified) std::printf("note: largest factors are probable primes (error < 2^-128)\n");
    return 0;
}

int cmd_gpf_scan(const std::string& poly_text, std::int64_t from, std::int64_t to,
                 const ScanFlags& sf) {
    scan::ScanConfig cfg;
    cfg.kind = scan::ScanConfig::Kind::gpf;
    cfg.F = poly::parse_poly(poly_text);
    fill_config(cfg, sf, from, to);
    std::FILE* os = summary_stream(cfg);
    scan::ScanRunner runner(cfg);
    scan::ScanOutcome oc = runner.run(!sf.resume.empty());
    print_common_summary(os, oc);
    print_minima(os, oc.summary);
    return 0;
}

int cmd_condition_check(const std::string& poly_text, std::int64_t from, std::int64_t to,
                        const ScanFlags& sf) {
    scan::ScanConfig cfg;
    cfg.kind = scan::ScanConfig::Kind::condition;
    cfg.F = poly::parse_poly(poly_text);
    fill_config(cfg, sf, from, to);
    std::FILE* os = summary_stream(cfg);
    scan::ScanRunner runner(cfg);
    scan::ScanOutcome oc = runner.run(!sf.resume.empty());
    print_common_summary(os, oc);
    if (oc.summary.has_mu)
        std::fprintf(os, "max mu_emp: %s at n=%lld\n",
                     scan::detail::fmt_double(oc.summary.max_mu).c_str(),
                     static_cast<long long>(oc.summary.max_mu_n));
    else
        std::fprintf(os, "max mu_emp: none (no rows with |F(n)| >= 2)\n");
    std::fprintf(os, "mu_emp histogram (bin width 0.05, last bin >= 1.0):\n");
    for (int i = 0; i < scan::SummaryState::kMuBins; ++i) {
        if (oc.summary.mu_histogram[static_cast<std::size_t>(i)] == 0) continue;
        if (i == scan::SummaryState::kMuBins - 1)
            std::fprintf(os, "  [1.00,inf): %llu\n",
                         static_cast<unsigned long long>(
                             oc.summary.mu_histogram[static_cast<std::size_t>(i)]));
        else
            std::fprintf(os, "  [%.2f,%.2f): %llu\n", i * 0.05, (i + 1) * 0.05,
                         static_cast<unsigned long long>(
                             oc.summary.mu_histogram[static_cast<std::size_t>(i)]));
    }
    return 0;
}

int cmd_family_scan(const families::SurfaceSpec& surface, std::int64_t from, std::int64_t to,
                    const ScanFlags& sf) {
    scan::ScanConfig cfg;
    cfg.kind = scan::ScanConfig::Kind::family;
    cfg.surface = surface;
    fill_config(cfg, sf, from, to);
    std::FILE* os = summary_stream(cfg);
    scan::ScanRunner runner(cfg);
    scan::ScanOutcome oc = runner.run(!sf.resume.empty());
    print_common_summary(os, oc);
    if (oc.summary.has_kappa)
        std::fprintf(os, "max kappa_emp: %s at n=%lld\n",
                     scan::detail::fmt_double(oc.summary.max_kappa).c_str(),
                     static_cast<long long>(oc.summary.max_kappa_n));
    if (oc.summary.has_szpiro)
        std::fprintf(os, "max szpiro_ratio: %s at n=%lld\n",
                     scan::detail::fmt_double(oc.summary.max_szpiro).c_str(),
                     static_cast<long long>(oc.summary.max_szpiro_n));
    std::fprintf(os, "distinct |D(n)/delta_min| ratios (%zu):",
                 oc.summary.quasi_ratios.size());
    for (const auto& q : oc.summary.quasi_ratios) std::fprintf(os, " %s", q.c_str());
    std::fprintf(os, "\n");
    return 0;
}

int cmd_curve(const std::array<std::string, 5>& a, std::uint64_t seed, std::uint64_t cap) {
    ell::WeierstrassModel E{parse_int(a[0]), parse_int(a[1]), parse_int(a[2]), parse_int(a[3]),
                            parse_int(a[4])};
    arith::FactorConfig cfg{seed, cap};
    ell::CurveInvariants iv = ell::invariants(E);
    if (iv.delta == 0) throw domain_error("curve is singular (delta = 0)");
    ell::MinimalModelResult mm = ell::minimal_model(E, cfg);
    ell::GlobalInvariants g = ell::conductor(E, cfg);
    std::printf("curve: %s\n", E.str().c_str());
    std::printf("c4=%s c6=%s delta=%s\n", iv.c4.str().c_str(), iv.c6.str().c_str(),
                iv.delta.str().c_str());
    std::printf("minimal model: %s  (u=%s, r=%s, s=%s, t=%s)\n", mm.model.str().c_str(),
                mm.trans.u.str().c_str(), mm.trans.r.str().c_str(), mm.trans.s.str().c_str(),
                mm.trans.t.str().c_str());
    std::printf("delta_min=%s\n", g.delta_min.str().c_str());
    std::printf("conductor=%s\n", g.conductor.str().c_str());
    for (const auto& ld : g.locals)
        std::printf("  p=%s  %s  kodaira=%s  f=%d  v=%d  tamagawa=%d\n", ld.p.str().c_str(),
                    ell::to_string(ld.kind).c_str(), ld.kodaira.str().c_str(), ld.f_p,
                    ld.v_delta_min, ld.tamagawa);
    if (g.conductor >= 2)
        std::printf("szpiro_ratio=%s\n", scan::detail::fmt_double(ell::szpiro_ratio(g)).c_str());
    return 0;
}

int cmd_verify_identities(std::uint64_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coeff(-1000, 1000);
    std::uint64_t quad_done = 0, cubic_done = 0;
    while (quad_done < trials) {
        Int a = coeff(rng), b = coeff(rng), c = coeff(rng);
        if (a == 0 || b * b - 4 * a * c == 0) continue;
        auto chk = families::verify_quadratic_identity(families::QuadraticGPF::make(a, b, c));
        if (!chk.ok)
            throw internal_error("quadratic identity failed for a=" + a.str() + " b=" + b.str() +
                                 " c=" + c.str());
        ++quad_done;
    }
    while (cubic_done < trials) {
        Int a = coeff(rng), b = coeff(rng), c = coeff(rng);
        if (a == 0 || c == 0) continue;
        auto chk = families::verify_cubic_identity(families::CubicGPF::make(a, b, c));
        if (!chk.ok)
            throw internal_error("cubic identity failed for a=" + a.str() + " b=" + b.str() +
                                 " c=" + c.str());
        ++cubic_done;
    }
    std::printf("verified %llu quadratic and %llu cubic discriminant identities (exact)\n",
                static_cast<unsigned long long>(quad_done),
                static_cast<unsigned long long>(cubic_done));
    return 0;
}

int cmd_luca(std::uint64_t seed, std::uint64_t cap) {
    arith::FactorConfig cfg{seed, cap};
    auto table = scan::luca_table(cfg);
    const auto& golden = scan::luca_golden();
    bool all_ok = true;
    std::printf("%-10s %s\n", "n", "P(n^2+1)");
    for (std::size_t i = 0; i < table.size(); ++i) {
        bool ok = table[i] == golden[i];
        all_ok = all_ok && ok;
        std::printf("%-10lld %s%s\n", static_cast<long long>(table[i].first),
                    table[i].second.str().c_str(), ok ? "" : "  <-- MISMATCH");
    }
    if (!all_ok) throw internal_error("luca table does not match the published values");
    std::printf("table matches the published values\n");
    return 0;
}

families::SurfaceSpec surface_from_flags(const std::string& a_poly, const std::string& b_poly,
                                         const std::vector<std::string>& quad,
                                         const std::vector<std::string>& cubic) {
    int given = (!a_poly.empty() || !b_poly.empty() ? 1 : 0) + (quad.empty() ? 0 : 1) +
                (cubic.empty() ? 0 : 1);
    if (given != 1)
        throw usage_error("specify exactly one of --A-poly/--B-poly, --quadratic, --cubic");
    if (!a_poly.empty() || !b_poly.empty()) {
        if (a_poly.empty() || b_poly.empty())
            throw usage_error("--A-poly and --B-poly must be given together");
        return families::make_surface(poly::parse_poly(a_poly), poly::parse_poly(b_poly));
    }
    auto parse_triple = [](const std::vector<std::string>& v) {
        if (v.size() != 3) throw usage_error("expected three comma separated integers a,b,c");
        return std::array<Int, 3>{parse_int(v[0]), parse_int(v[1]), parse_int(v[2])};
    };
    if (!quad.empty()) {
        auto [a, b, c] = parse_triple(quad);
        return families::surface_of(families::QuadraticGPF::make(a, b, c));
    }
    auto [a, b, c] = parse_triple(cubic);
    return families::surface_of(families::CubicGPF::make(a, b, c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic toolkit: greatest prime factors, radicals and Szpiro ratios "
                 "of polynomial values and elliptic curve families"};
    app.require_subcommand(1);

    std::string poly_text, m_text;
    std::int64_t from = 0, to = 0;
    ScanFlags sf;
    std::array<std::string, 5> ainv{"0", "0", "0", "0", "0"};
    std::string a_poly, b_poly;
    std::vector<std::string> quad, cubic;
    std::uint64_t trials = 1000, vseed = 42;

    CLI::App* factor = app.add_subcommand("factor", "factor an integer and print gpf/rad");
    factor->add_option("m", m_text, "nonzero integer")->required();
    factor->add_option("--seed", sf.seed, "seed for the rho stage");
    factor->add_option("--rho-cap", sf.rho_cap, "factoring effort cap");

    CLI::App* gpf = app.add_subcommand("gpf-scan", "scan P(f(n)), rad(f(n)) over a range");
    gpf->add_option("--poly", poly_text, "polynomial (expression or coefficient list)")->required();
    gpf->add_option("--from", from, "first n")->required();
    gpf->add_option("--to", to, "last n")->required();
    add_scan_flags(gpf, sf);

    CLI::App* fam = app.add_subcommand("family-scan",
                                       "scan fibers of an elliptic surface: conductors, "
                                       "minimal discriminants, empirical ratios");
    fam->add_option("--A-poly", a_poly, "A(t)");
    fam->add_option("--B-poly", b_poly, "B(t)");
    fam->add_option("--quadratic", quad, "a,b,c for the quadratic-gpf family")->delimiter(',');
    fam->add_option("--cubic", cubic, "a,b,c for the cubic-gpf family")->delimiter(',');
    fam->add_option("--from", from, "first n")->required();
    fam->add_option("--to", to, "last n")->required();
    add_scan_flags(fam, sf);

    CLI::App* cond = app.add_subcommand("condition-check",
                                        "empirical check of the valuation-product condition");
    cond->add_option("--poly", poly_text, "polynomial F")->required();
    cond->add_option("--from", from, "first n")->required();
    cond->add_option("--to", to, "last n")->required();
    add_scan_flags(cond, sf);

    CLI::App* curve = app.add_subcommand("curve", "minimal model, reduction types and conductor");
    curve->add_option("--a1", ainv[0]);
    curve->add_option("--a2", ainv[1]);
    curve->add_option("--a3", ainv[2]);
    curve->add_option("--a4", ainv[3]);
    curve->add_option("--a6", ainv[4]);
    curve->add_option("--seed", sf.seed, "seed for the rho stage");
    curve->add_option("--rho-cap", sf.rho_cap, "factoring effort cap");

    CLI::App* verify = app.add_subcommand("verify-identities",
                                          "verify the family discriminant identities on random "
                                          "coefficients (exact polynomial equality)");
    verify->add_option("--trials", trials, "number of random (a,b,c) per family");
    verify->add_option("--seed", vseed, "rng seed");

    CLI::App* luca = app.add_subcommand("luca", "recompute the P(n^2+1) example table");
    luca->add_option("--seed", sf.seed, "seed for the rho stage");
    luca->add_option("--rho-cap", sf.rho_cap, "factoring effort cap");

    try {
        app.parse(argc, argv);
        if (factor->parsed()) return cmd_factor(m_text, sf.seed, sf.rho_cap);
        if (gpf->parsed()) return cmd_gpf_scan(poly_text, from, to, sf);
        if (fam->parsed())
            return cmd_family_scan(surface_from_flags(a_poly, b_poly, quad, cubic), from, to, sf);
        if (cond->parsed()) return cmd_condition_check(poly_text, from, to, sf);
        if (curve->parsed()) return cmd_curve(ainv, sf.seed, sf.rho_cap);
        if (verify->parsed()) return cmd_verify_identities(trials, vseed);
        if (luca->parsed()) return cmd_luca(sf.seed, sf.rho_cap);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const gpftk::usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const gpftk::domain_error& e) {
        std::fprintf(stderr, "rejected: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
