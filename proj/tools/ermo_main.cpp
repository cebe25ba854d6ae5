#include "ermo/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kNumeric = 3 };

std::vector<std::string> split_checks(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ermo::ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Elliptic difference-reflection operators: build, export and verify"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run property checks for one scenario");
    std::string type, mode, checks_arg, tau_arg, report = "text", out_path, config_path, mu_arg, kappa_arg;
    int level = 0, points = 0;
    std::uint64_t seed = 0;
    double kappa_factor = 0.0;
    bool no_timing = false;
    verify->add_option("type", type, "affine type, e.g. C2~1 or A4~2");
    verify->add_option("--level,-k", level, "level k");
    verify->add_option("--mode", mode, "generic | invariant | manual")->check(CLI::IsMember({"generic", "invariant", "manual"}));
    verify->add_option("--checks", checks_arg, "comma-separated check names (default: all; 'none' for an empty list)");
    verify->add_option("--tau", tau_arg, "modular parameter RE,IM");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--points", points, "sample points per comparison");
    verify->add_option("--mu", mu_arg, "couplings per root class, space separated");
    verify->add_option("--kappa", kappa_arg, "kappa (generic or manual mode)");
    verify->add_option("--kappa-factor", kappa_factor, "multiply kappa after it is fixed (negative controls)");
    verify->add_option("--report", report, "json | text")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", out_path, "write the report to a file");
    verify->add_option("--config", config_path, "key = value config file; flags override it");
    verify->add_flag("--no-timing", no_timing, "omit wall times so reports are reproducible byte for byte");

    // datum
    auto* datum = app.add_subcommand("datum", "print the affine root datum as JSON");
    std::string datum_type;
    datum->add_option("type", datum_type)->required();

    // export
    auto* exp = app.add_subcommand("export", "print Y^{-lambda_i} at the invariant point as JSON");
    std::string exp_type;
    int exp_weight = 1, exp_level = 1;
    exp->add_option("type", exp_type)->required();
    exp->add_option("--weight", exp_weight, "index i of lambda_i (1-based)");
    exp->add_option("--level,-k", exp_level, "level k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfig;
    }

    try {
        if (*datum) {
            std::cout << ermo::AffineRootDatum(datum_type).to_json().dump(2) << "\n";
            return kPass;
        }
        if (*exp) {
            auto d = std::make_shared<const ermo::AffineRootDatum>(exp_type);
            if (exp_weight < 1 || exp_weight > d->rank()) throw ermo::ConfigError("weight index out of range");
            auto ctx = std::make_shared<const ermo::OperatorContext>(ermo::OperatorContext::invariant(
                d, ermo::CouplingParams::uniform(*d, 0.3), exp_level, ermo::cplx(0.1, 0.9), ermo::SeriesConfig::from_env()));
            using ermo::operator-;
            std::cout << ermo::y_operator(ctx, -d->weight_basis()[static_cast<std::size_t>(exp_weight - 1)]).to_json().dump(2)
                      << "\n";
            return kPass;
        }

        ermo::ScenarioConfig cfg;
        if (!config_path.empty()) cfg = ermo::parse_config(read_file(config_path), cfg);
        if (!type.empty()) cfg.type = type;
        if (level) cfg.level = level;
        if (mode == "generic") cfg.mode = ermo::SpectralMode::Generic;
        if (mode == "invariant") cfg.mode = ermo::SpectralMode::Invariant;
        if (mode == "manual") cfg.mode = ermo::SpectralMode::Manual;
        if (!tau_arg.empty()) cfg.tau = ermo::parse_complex(tau_arg);
        if (verify->count("--seed")) cfg.seed = seed;
        if (points) cfg.sample_points = points;
        if (!mu_arg.empty()) cfg = ermo::parse_config("mu = " + mu_arg, cfg);
        if (!kappa_arg.empty()) cfg.kappa = ermo::parse_complex(kappa_arg);
        if (kappa_factor != 0.0) cfg.kappa_factor = kappa_factor;
        if (no_timing) cfg.timing = false;

        std::vector<std::string> checks = ermo::default_checks();
        if (checks_arg == "none") checks.clear();
        else if (!checks_arg.empty()) checks = split_checks(checks_arg);

        const auto reports = ermo::run_suite(cfg, checks);
        const std::string text =
            report == "json" ? ermo::report_json(cfg, reports).dump(2) + "\n" : ermo::report_text(cfg, reports);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream(out_path) << text;
        }

        bool numeric = false, failed = false;
        for (const auto& r : reports) {
            numeric = numeric || r.diagnostics.contains("numeric_error");
            failed = failed || r.status == ermo::CheckStatus::Fail;
        }
        return numeric ? kNumeric : (failed ? kFail : kPass);
    } catch (const ermo::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    } catch (const ermo::PoleError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const ermo::TruncationError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    }
}
