#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghzlab/pauli.hpp"
#include "ghzlab/state.hpp"

namespace ghzlab {

const char* version() noexcept;

/// Subcommand names in the order the CLI lists them.
const std::vector<std::string>& subcommands();

struct ReportOptions {
    std::string subcommand;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> input;     // CSV data set
    std::optional<std::string> metadata;  // angle sidecar JSON
    std::optional<std::string> state;     // measure-seq initial state
    std::optional<std::string> sequence;  // measure-seq observables, comma separated
    std::optional<std::string> compare;   // measure-seq second ordering
    std::optional<std::string> angles;    // chsh-sim "a,a',b,b'" in radians
    bool deterministic = false;
};

struct Claim {
    std::string id;
    std::string anchor;  // equation or section the claim reproduces
    std::string description;
    bool passed = false;
};

struct Report {
    std::string subcommand;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<Claim> claims;

    bool passed() const;
    void claim(std::string id, std::string anchor, std::string description, bool passed);
    /// Stable key order; "generated_at" is omitted when deterministic.
    nlohmann::json to_json(bool deterministic) const;
    std::string to_text() const;
};

/// Runs one subcommand. Throws ghzlab::Error for invalid options or input.
Report run_report(const ReportOptions& options);

/// "ghz", "product", "single", "singlet", "alpha" or "beta".
StateVector named_state(const std::string& name);
/// A1..A4, Ahat1..Ahat3, or any Pauli string literal.
PauliString named_operator(const std::string& name);
/// Comma-separated list of named operators or literals.
std::vector<Observable> parse_sequence(const std::string& text);

}  // namespace ghzlab
