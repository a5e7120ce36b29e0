// Command-line front end: numerical experiments on the axisymmetric
// vorticity/swirl system. See README.md for the config format and the
// artifact layout each subcommand writes.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "axiswirl/experiments.hpp"

using namespace axiswirl;

namespace {

RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_config_file(path);
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    std::size_t pos = 0;
    auto num = [](const std::string& v) {
        return v == "inf" ? std::numeric_limits<double>::infinity() : std::stod(v);
    };
    while (pos < s.size()) {
        auto semi = s.find(';', pos);
        if (semi == std::string::npos) semi = s.size();
        const std::string item = s.substr(pos, semi - pos);
        const auto comma = item.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad --pairs entry (expected 'p,q'): " + item);
        out.emplace_back(num(item.substr(0, comma)), num(item.substr(comma + 1)));
        pos = semi + 1;
    }
    if (out.empty()) throw std::runtime_error("--pairs is empty");
    return out;
}

std::vector<double> parse_times(const std::string& s) {
    if (s.rfind("dyadic:", 0) == 0) {
        const auto rest = s.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("bad --times (expected dyadic:LO:HI): " + s);
        return dyadic_times(std::stod(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
    }
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stod(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"axiswirl: axisymmetric Navier-Stokes vorticity/swirl laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned seed = 0;
    app.add_option("--seed", seed, "seed recorded in the run manifest");

    // special-fn
    auto* sf = app.add_subcommand("special-fn", "evaluate the kernel profile functions F, F', H, H'");
    std::string which = "F";
    double at_value = 0.0;
    double scan_alpha = 0.0;
    double scan_lo = 1e-6, scan_hi = 1e6;
    int scan_samples = 121;
    sf->add_option("--which", which, "one of F, Fp, H, Hp")->required();
    auto* at_opt = sf->add_option("--at", at_value, "evaluate at this argument");
    auto* scan_opt =
        sf->add_option("--scan", scan_alpha, "emit CSV t,value,t_pow_value for this power");
    sf->add_option("--lo", scan_lo, "scan lower bound");
    sf->add_option("--hi", scan_hi, "scan upper bound");
    sf->add_option("--samples", scan_samples, "scan sample count");

    // biot-savart
    auto* bs = app.add_subcommand("biot-savart", "reconstruct (u^r, u^z) from a vorticity snapshot");
    std::string bs_in, bs_out;
    std::string audit_spec;
    bs->add_option("--in", bs_in, "input vorticity snapshot")->required();
    bs->add_option("--out", bs_out, "output prefix (writes <prefix>.ur.snap and <prefix>.uz.snap)");
    bs->add_option("--audit", audit_spec, "emit the u^r/r audit CSV for 'p,q'");

    // semigroup-decay
    auto* sd = app.add_subcommand("semigroup-decay", "operator decay-exponent fits");
    std::string pairs_spec = "1,inf;1,2;2,inf";
    std::string times_spec = "dyadic:1:64";
    sd->add_option("--config", config_path, "config file");
    sd->add_option("--out", out_dir, "artifact directory")->required();
    sd->add_option("--pairs", pairs_spec, "semicolon-separated p,q pairs");
    sd->add_option("--times", times_spec, "dyadic:LO:HI or comma-separated times");

    // solver runs
    auto* sl = app.add_subcommand("solve-local", "Picard mild-solution run");
    sl->add_option("--config", config_path, "config file");
    sl->add_option("--out", out_dir, "artifact directory")->required();
    auto* so = app.add_subcommand("solve-oracle", "operator-splitting oracle run");
    so->add_option("--config", config_path, "config file");
    so->add_option("--out", out_dir, "artifact directory")->required();
    auto* sg = app.add_subcommand("solve-global", "small-swirl run with smallness and energy audits");
    sg->add_option("--config", config_path, "config file");
    sg->add_option("--out", out_dir, "artifact directory")->required();

    // verify
    auto* vf = app.add_subcommand("verify", "verification suites");
    std::string suite = "all";
    vf->add_option("--config", config_path, "config file");
    vf->add_option("--out", out_dir, "artifact directory")->required();
    vf->add_option("--suite", suite, "decay | maxprin | energy | smallness | corollary | all")
        ->check(CLI::IsMember({"decay", "maxprin", "energy", "smallness", "corollary", "all"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sf->parsed()) {
            SpecialFn fn;
            if (which == "F") fn = SpecialFn::F;
            else if (which == "Fp") fn = SpecialFn::Fprime;
            else if (which == "H") fn = SpecialFn::H;
            else if (which == "Hp") fn = SpecialFn::Hprime;
            else throw std::runtime_error("--which must be one of F, Fp, H, Hp");
            if (at_opt->count() > 0) {
                std::printf("%.17g\n", eval_special(fn, at_value));
            } else if (scan_opt->count() > 0) {
                check_power_admissible(fn, scan_alpha);
                std::printf("t,value,t_pow_value\n");
                for (int i = 0; i < scan_samples; ++i) {
                    const double t = scan_lo * std::pow(scan_hi / scan_lo,
                                                        static_cast<double>(i) / (scan_samples - 1));
                    const double v = eval_special(fn, t);
                    std::printf("%.17g,%.17g,%.17g\n", t, v, std::pow(t, scan_alpha) * std::abs(v));
                }
            } else {
                throw std::runtime_error("special-fn requires --at or --scan");
            }
            return 0;
        }
        if (bs->parsed()) {
            const ScalarField omega = read_snapshot(bs_in);
            if (!bs_out.empty()) {
                const VelocityField v = reconstruct_velocity(omega);
                ScalarField ur = make_field(omega.grid), uz = make_field(omega.grid);
                ur.values = v.ur;
                uz.values = v.uz;
                write_snapshot(bs_out + ".ur.snap", ur);
                write_snapshot(bs_out + ".uz.snap", uz);
            }
            if (!audit_spec.empty()) {
                const auto comma = audit_spec.find(',');
                if (comma == std::string::npos) throw std::runtime_error("--audit expects 'p,q'");
                const double p = std::stod(audit_spec.substr(0, comma));
                const std::string qs = audit_spec.substr(comma + 1);
                const double q =
                    qs == "inf" ? std::numeric_limits<double>::infinity() : std::stod(qs);
                const UrOverRAudit a = ur_over_r_audit(omega, p, q);
                std::printf("p,q,lambda,lhs,rhs,ratio\n");
                std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", a.p, a.q, a.lambda, a.lhs,
                            a.rhs_product, a.defined ? detail::fmt(a.ratio).c_str() : "0/0");
            }
            if (bs_out.empty() && audit_spec.empty())
                throw std::runtime_error("biot-savart requires --out and/or --audit");
            return 0;
        }

        const RunConfig cfg = load_or_default(config_path);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        detail::write_manifest(dir, cfg, seed);
        if (sd->parsed())
            return run_semigroup_decay(cfg, dir, parse_pairs(pairs_spec), parse_times(times_spec));
        if (sl->parsed()) return run_solve_local(cfg, dir);
        if (so->parsed()) return run_solve_oracle(cfg, dir);
        if (sg->parsed()) return run_solve_global(cfg, dir);
        if (vf->parsed()) return run_verify(cfg, dir, suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
