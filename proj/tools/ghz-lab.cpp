// ghz-lab: command-line front end over the ghzlab C API.
//
// Exit codes: 0 when every claim in the report verified, 1 when any claim
// failed, 2 on a usage, input or I/O error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghzlab/ghzlab.h"

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> trials;
    std::string format = "json";
    std::optional<std::string> input;
    std::optional<std::string> metadata;
    std::optional<std::string> state;
    std::optional<std::string> sequence;
    std::optional<std::string> compare;
    std::optional<std::string> angles;
    bool deterministic = false;
};

struct OptionsDeleter {
    void operator()(ghz_options* o) const { ghz_options_free(o); }
};
struct ReportDeleter {
    void operator()(ghz_report* r) const { ghz_report_free(r); }
};

const std::map<std::string, std::string>& descriptions() {
    static const std::map<std::string, std::string> d = {
        {"algebra", "Pauli-string algebra of the GHZ operators"},
        {"eigen", "eigenvalue checks on the GHZ, product and single-particle states"},
        {"counterfactual", "exhaustive enumeration of counterfactual ±1 assignments"},
        {"ks", "state-independent four-operator identity versus its counterfactual product"},
        {"product-state", "counterfactual contradiction for the unentangled product state"},
        {"single-particle", "counterfactual contradiction for a single particle"},
        {"measure-seq", "sequential projective measurements with exact branch distributions"},
        {"bell-identity", "Bell and CHSH inequalities on cross-correlated ±1 data"},
        {"chsh-sim", "CHSH value from independent simulated singlet runs"},
        {"stationarity", "second-order stationarity audit of pair correlations"},
    };
    return d;
}

void add_common_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--seed", f.seed, "master seed (u64)");
    sub->add_option("--trials", f.trials, "trials or samples; meaning depends on the subcommand")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--input", f.input, "CSV data set (header row, +1/-1 body)");
    sub->add_flag("--deterministic", f.deterministic, "omit environment-dependent fields");
}

int run(const std::string& subcommand, const Flags& f) {
    ghz_options* raw_options = nullptr;
    if (ghz_options_new(subcommand.c_str(), &raw_options) != GHZ_OK) {
        std::cerr << "ghz-lab: " << ghz_last_error() << '\n';
        return kExitUsage;
    }
    std::unique_ptr<ghz_options, OptionsDeleter> options(raw_options);
    ghz_options_set_seed(options.get(), f.seed);
    ghz_options_set_deterministic(options.get(), f.deterministic ? 1 : 0);
    if (f.trials) ghz_options_set_trials(options.get(), *f.trials);
    const std::pair<const char*, const std::optional<std::string>*> strings[] = {
        {"input", &f.input},       {"metadata", &f.metadata}, {"state", &f.state},
        {"sequence", &f.sequence}, {"compare", &f.compare},   {"angles", &f.angles},
    };
    for (const auto& [key, value] : strings) {
        if (*value) ghz_options_set_string(options.get(), key, (*value)->c_str());
    }

    ghz_report* raw_report = nullptr;
    const ghz_status status = ghz_report_run(options.get(), &raw_report);
    if (status != GHZ_OK) {
        std::cerr << "ghz-lab " << subcommand << ": " << ghz_status_string(status) << ": " << ghz_last_error()
                  << '\n';
        return kExitUsage;
    }
    std::unique_ptr<ghz_report, ReportDeleter> report(raw_report);
    std::cout << (f.format == "text" ? ghz_report_text(report.get()) : ghz_report_json(report.get()));
    std::cout.flush();
    return ghz_report_passed(report.get()) ? kExitVerified : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("ghz-lab ") + ghz_version() +
                 ": GHZ operator algebra, counterfactual enumeration and Bell correlation audits"};
    app.set_version_flag("--version", ghz_version());
    app.require_subcommand(1);

    Flags flags;
    std::string chosen;
    for (size_t i = 0; i < ghz_subcommand_count(); ++i) {
        const std::string name = ghz_subcommand_name(i);
        CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
        add_common_flags(sub, flags);
        if (name == "measure-seq") {
            sub->add_option("--state", flags.state, "initial state: ghz, product, single, singlet, alpha, beta");
            sub->add_option("--sequence", flags.sequence, "comma-separated observables, e.g. A1,A2,A1 or X,Z");
            sub->add_option("--compare", flags.compare, "second ordering to compare against --sequence");
        } else if (name == "chsh-sim") {
            sub->add_option("--angles", flags.angles, "settings a,a',b,b' in radians");
        } else if (name == "stationarity") {
            sub->add_option("--metadata", flags.metadata, "angle sidecar JSON for --input");
        }
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    return run(chosen, flags);
}
