// lpfsieve: command-line front end for the least-prime-factor sieve lab.
//
// Exit statuses: 0 success, 1 exact check failed, 2 configuration error,
// 3 resource cap.

#include "lpfsieve/lpfsieve.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lpfsieve;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

// Flat "key = value" file; '#' starts a comment. Keys are flag names
// without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        kv[detail::trim(std::string_view(t).substr(0, eq))] = detail::trim(std::string_view(t).substr(eq + 1));
    }
    return kv;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct SweepArgs {
    std::string x_spec;
    std::string z_spec = "sqrt";
    bool frac = false;
    bool moebius_check = false;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t segment_size = kDefaultSegmentSize;
    std::uint64_t max_pi_z = kDefaultMaxPiZ;
    unsigned threads = 1;
    std::string config;
};

int run_sweep_cmd(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.x_values = parse_x_spec(a.x_spec);
    cfg.z_rule = parse_z_rule(a.z_spec);
    cfg.enable_frac_remainder = a.frac;
    cfg.force_moebius_check = a.moebius_check;
    cfg.output = parse_format(a.format);
    cfg.segment_size = a.segment_size;
    cfg.max_pi_z = a.max_pi_z;
    cfg.threads = a.threads;
    cfg.validate();

    const PrimeTable table = build_prime_table(cfg.required_table_limit(), memory_budget(), cfg.segment_size);
    const auto records = run_sweep(cfg, table);

    Output out(a.out);
    write_report(out.stream(), make_report(sweep_columns(), records), cfg.output);

    for (const auto& r : records) {
        if (!r.exact_checks_pass()) {
            std::cerr << "exact check failed at x=" << r.x << " z=" << r.z;
            for (const auto& f : r.flags) std::cerr << ' ' << f;
            if (r.failure) std::cerr << " (" << *r.failure << ')';
            std::cerr << '\n';
            return kExitAssertion;
        }
    }
    return kExitOk;
}

int run_verify_cmd(std::uint64_t limit, const IdentitySuiteOptions& opt) {
    const PrimeTable table = build_prime_table(identity_suite_table_limit(limit), memory_budget(),
                                               opt.sieve.segment_size);
    const IdentitySuiteResult res = run_identity_suite(limit, table, opt);
    std::cout << "exact identity suite up to " << limit << " (seed " << opt.seed << ")\n";
    for (const auto& f : res.families)
        std::cout << "  " << (f.failures == 0 ? "ok  " : "FAIL") << "  " << f.checks << " checks  " << f.name << '\n';
    std::cout << "total checks: " << res.total_checks() << '\n';
    if (!res.passed()) {
        std::cerr << "first failure: " << res.first_failure().value_or("?") << '\n';
        return kExitAssertion;
    }
    return kExitOk;
}

int run_chebyshev_cmd(std::uint64_t x_max, const std::string& grid_spec, const std::string& format,
                      const std::string& out_path, std::uint64_t segment_size) {
    std::vector<std::uint64_t> grid;
    if (!grid_spec.empty()) {
        grid = parse_x_spec(grid_spec);
    } else {
        for (std::uint64_t d = 100; d <= x_max; d *= 10) {
            grid.push_back(d);
            if (d > x_max / 10) break;
        }
        if (grid.empty() && x_max >= 2) grid.push_back(x_max);
    }
    for (const std::uint64_t x : grid)
        if (x < 2 || x > x_max)
            throw ConfigError("chebyshev grid point " + std::to_string(x) + " outside [2, x-max]");
    const OutputFormat fmt = parse_format(format);
    const PrimeTable table = build_prime_table(std::max<std::uint64_t>(x_max, 2), memory_budget(), segment_size);
    SieveOptions sieve;
    sieve.segment_size = segment_size;
    std::vector<ChebyshevRecord> recs;
    for (const std::uint64_t x : grid) recs.push_back(chebyshev_check(x, table, sieve));

    Output out(out_path);
    write_report(out.stream(), make_report(chebyshev_columns(), recs), fmt);
    for (const auto& r : recs) {
        if (!r.holds_54) {
            std::cerr << "pi(x) <= S + pi(z) violated at x=" << r.x << ": " << r.pi_x << " > " << r.s_plus_pi_z << '\n';
            return kExitAssertion;
        }
    }
    return kExitOk;
}

int run_blowup_cmd(std::uint64_t z_max, std::uint64_t x, std::uint64_t max_pi_z, const std::string& format,
                   const std::string& out_path) {
    const OutputFormat fmt = parse_format(format);
    const PrimeTable table = build_prime_table(std::max<std::uint64_t>(z_max, 2));
    const auto rows = legendre_blowup_probe(z_max, x, table, max_pi_z);
    Output out(out_path);
    write_report(out.stream(), make_report(blowup_columns(), rows), fmt);
    // rows up to the cap are still written; reaching it is a resource stop
    bool capped = false;
    for (const auto& r : rows) {
        if (r.error) {
            std::cerr << "cap reached at z=" << r.z << ": " << *r.error << '\n';
            capped = true;
            continue;
        }
        if (r.term_count != (std::uint64_t{1} << r.pi_z)) {
            std::cerr << "term count " << r.term_count << " != 2^" << r.pi_z << " at z=" << r.z << '\n';
            return kExitAssertion;
        }
    }
    return capped ? kExitResource : kExitOk;
}

int run_density_cmd(std::uint64_t z, const std::string& format, const std::string& out_path) {
    const OutputFormat fmt = parse_format(format);
    const PrimeTable table = build_prime_table(std::max<std::uint64_t>(z, 2));
    const DensityTable dt = build_density_table(z, table);
    Output out(out_path);
    write_report(out.stream(), make_report(density_columns(), dt.entries), fmt);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-prime-factor sieve: exact identities and error-term measurements"};
    app.require_subcommand(1);

    // verify-identities
    std::uint64_t verify_limit = 10'000;
    IdentitySuiteOptions verify_opt;
    auto* verify = app.add_subcommand("verify-identities", "Run the exact identity suite up to a limit");
    verify->add_option("--limit", verify_limit, "Largest x exercised (0 runs nothing)");
    verify->add_option("--seed", verify_opt.seed, "Seed for the randomized grid");
    verify->add_option("--samples", verify_opt.random_points, "Random x values drawn");
    verify->add_option("--segment-size", verify_opt.sieve.segment_size, "Integers per sieve segment");

    // sweep
    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Measure E(x, z) over a grid and emit CSV/JSON");
    auto* o_x = sweep->add_option("--x", sw.x_spec, "x grid: list | pow2:a..b | pow10:a..b | geom:a..b:n");
    auto* o_z = sweep->add_option("--z", sw.z_spec, "z rule: sqrt | fixed:N | logx");
    auto* o_frac = sweep->add_flag("--frac", sw.frac, "Compute the exact fractional remainder sum");
    auto* o_moeb = sweep->add_flag("--moebius-check", sw.moebius_check, "Cross-check with Legendre's sum beyond z = 31");
    auto* o_fmt = sweep->add_option("--format", sw.format, "csv | json");
    auto* o_out = sweep->add_option("--out", sw.out, "Output file (default stdout)");
    auto* o_seed = sweep->add_option("--seed", sw.seed, "Seed (reserved for randomized grids)");
    auto* o_seg = sweep->add_option("--segment-size", sw.segment_size, "Integers per sieve segment");
    auto* o_cap = sweep->add_option("--max-pi-z", sw.max_pi_z, "Cap on primes in Moebius enumerations");
    auto* o_thr = sweep->add_option("--threads", sw.threads, "Worker threads");
    sweep->add_option("--config", sw.config, "Flat key = value file; inline flags win");

    // chebyshev
    std::uint64_t cheb_max = 1'000'000;
    std::string cheb_grid, cheb_format = "csv", cheb_out;
    std::uint64_t cheb_seg = kDefaultSegmentSize;
    auto* cheb = app.add_subcommand("chebyshev", "Check pi(x) <= S(x, isqrt(x)+1) + pi(isqrt(x)) on a grid");
    cheb->add_option("--x-max", cheb_max, "Largest x; default grid is the decades 10^2..x-max");
    cheb->add_option("--x", cheb_grid, "Explicit grid (same syntax as sweep --x)");
    cheb->add_option("--format", cheb_format, "csv | json");
    cheb->add_option("--out", cheb_out, "Output file (default stdout)");
    cheb->add_option("--segment-size", cheb_seg, "Integers per sieve segment");

    // blowup-probe
    std::uint64_t probe_zmax = 31, probe_x = 1'000'000, probe_cap = kDefaultMaxPiZ;
    std::string probe_format = "csv", probe_out;
    auto* probe = app.add_subcommand("blowup-probe", "Time Legendre's sum as primes enter the sifting set");
    probe->add_option("--z-max", probe_zmax, "Largest z");
    probe->add_option("--x", probe_x, "x at which the sum is evaluated");
    probe->add_option("--max-pi-z", probe_cap, "Cap on the number of primes (2^cap terms)");
    probe->add_option("--format", probe_format, "csv | json");
    probe->add_option("--out", probe_out, "Output file (default stdout)");

    // density-table
    std::uint64_t dens_z = 100;
    std::string dens_format = "csv", dens_out;
    auto* dens = app.add_subcommand("density-table", "Exact g(p), partial sums and Mertens products for p < z");
    dens->add_option("--z", dens_z, "Primes below z are tabulated");
    dens->add_option("--format", dens_format, "csv | json");
    dens->add_option("--out", dens_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*verify) return run_verify_cmd(verify_limit, verify_opt);
        if (*sweep) {
            if (!sw.config.empty()) {
                // file values apply only where the flag was not given inline
                for (const auto& [key, value] : read_config_file(sw.config)) {
                    auto unset = [](const CLI::Option* o) { return o->count() == 0; };
                    if (key == "x") { if (unset(o_x)) sw.x_spec = value; }
                    else if (key == "z") { if (unset(o_z)) sw.z_spec = value; }
                    else if (key == "frac") { if (unset(o_frac)) sw.frac = parse_bool(key, value); }
                    else if (key == "moebius-check") { if (unset(o_moeb)) sw.moebius_check = parse_bool(key, value); }
                    else if (key == "format") { if (unset(o_fmt)) sw.format = value; }
                    else if (key == "out") { if (unset(o_out)) sw.out = value; }
                    else if (key == "seed") { if (unset(o_seed)) sw.seed = detail::parse_u64(value, key); }
                    else if (key == "segment-size") { if (unset(o_seg)) sw.segment_size = detail::parse_u64(value, key); }
                    else if (key == "max-pi-z") { if (unset(o_cap)) sw.max_pi_z = detail::parse_u64(value, key); }
                    else if (key == "threads") { if (unset(o_thr)) sw.threads = static_cast<unsigned>(detail::parse_u64(value, key)); }
                    else throw ConfigError("unknown config key '" + key + "'");
                }
            }
            return run_sweep_cmd(sw);
        }
        if (*cheb) return run_chebyshev_cmd(cheb_max, cheb_grid, cheb_format, cheb_out, cheb_seg);
        if (*probe) return run_blowup_cmd(probe_zmax, probe_x, probe_cap, probe_format, probe_out);
        if (*dens) return run_density_cmd(dens_z, dens_format, dens_out);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kExitResource;
    } catch (const AssertionFailure& e) {
        std::cerr << "assertion failure: " << e.what() << '\n';
        return kExitAssertion;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OutOfRangeError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
