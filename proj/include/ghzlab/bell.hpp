#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ghzlab {

/// A column of ±1 samples.
using Column = std::vector<std::int8_t>;

/// Named ±1 columns with optional setting-angle metadata.
struct DataSet {
    std::vector<std::string> names;
    std::vector<Column> columns;
    std::map<std::string, double> angles;  // radians, by column name
    /// Column pairs that share a sample index. When empty, every pair of
    /// columns with an angle is used.
    std::vector<std::pair<std::string, std::string>> pairs;

    void add(std::string name, Column column);
    const Column& column(const std::string& name) const;
    std::size_t length() const;  // throws unless all columns share one length
};

/// Header row of names, then rows of +1/-1 entries ("1" and "+1" accepted).
DataSet read_csv(std::istream& in);
DataSet read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const DataSet& ds);

/// {"angles": {name: radians, ...}, "pairs": [[a, b], ...]}; "pairs" optional.
void load_angle_metadata(DataSet& ds, const nlohmann::json& meta);
void load_angle_metadata_file(DataSet& ds, const std::string& path);

/// Exact cross-correlation: the integer sum of a_i b_i and the length N.
struct Correlation {
    std::int64_t sum = 0;
    std::int64_t n = 0;
    double value() const { return static_cast<double>(sum) / static_cast<double>(n); }
};

Correlation cross_correlation(const Column& a, const Column& b);

/// |C(a,b) - C(a,c)| <= 1 - C(b,c). Scaled by N, the margin is an integer,
/// so the check involves no rounding.
struct Bell3Report {
    Correlation ab, ac, bc;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::int64_t margin_scaled = 0;  // N * margin
    bool satisfied = false;
};

Bell3Report bell3_check(const Column& a, const Column& b, const Column& c);

/// S = C(a,b) + C(a,b2) + C(a2,b) - C(a2,b2), |S| <= 2.
struct Chsh4Report {
    Correlation ab, ab2, a2b, a2b2;
    double s = 0.0;
    std::int64_t s_scaled = 0;       // N * S
    double margin = 0.0;             // 2 - |S|
    std::int64_t margin_scaled = 0;  // 2N - |N S|
    bool satisfied = false;
};

Chsh4Report chsh4_check(const Column& a, const Column& a2, const Column& b, const Column& b2);

struct PairRun {
    double theta1 = 0.0;
    double theta2 = 0.0;
    Column s1;
    Column s2;
};

/// N samples of the singlet joint distribution
/// P(s1, s2) = (1 - s1 s2 cos(θ1 - θ2)) / 4, so E[s1 s2] = -cos(θ1 - θ2).
/// Sample i depends only on (seed, i).
PairRun simulate_pair_run(double theta1, double theta2, std::int64_t n, std::uint64_t seed);

struct ChshAngles {
    double a = 0.0, a_prime = 0.0, b = 0.0, b_prime = 0.0;
};

struct ChshRunReport {
    ChshAngles angles;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    /// C(a,b), C(a,b'), C(a',b), C(a',b') from four independent runs.
    std::array<Correlation, 4> correlations;
    std::array<double, 4> expected{};  // -cos of each setting difference
    /// The four CHSH forms; form k negates term k. Form 3 is the canonical
    /// C(a,b) + C(a,b') + C(a',b) - C(a',b').
    std::array<double, 4> s_forms{};
    double s_canonical = 0.0;
    int s_form = 3;  // index of the form with the largest |S|
    double s = 0.0;  // that form's value
    double standard_error = 0.0;
    bool violates = false;  // |s| > 2
    std::string sampling_regime;  // "degenerate", "small" or "asymptotic"
    /// Canonical S after cross-correlating the run columns row by row instead
    /// of taking each correlation from its own run.
    Chsh4Report shared_columns;
};

/// Each correlation comes from a separate simulate_pair_run with its own
/// derived seed, never from a shared set of columns.
ChshRunReport chsh_independent_runs(const ChshAngles& angles, std::int64_t n, std::uint64_t seed);

struct PairCorrelation {
    std::string first;
    std::string second;
    double difference = 0.0;  // angle(first) - angle(second), wrapped to (-π, π]
    Correlation correlation;
};

struct StationarityGroup {
    double difference = 0.0;
    std::vector<PairCorrelation> members;
    double spread = 0.0;     // max - min correlation in the group
    double threshold = 0.0;  // 5σ binomial bound on that spread
    bool exceeds = false;
};

struct StationarityReport {
    std::vector<StationarityGroup> groups;
    std::size_t n_pairs = 0;
    double max_spread = 0.0;
    bool evidence_against_stationarity = false;
};

/// Groups pair correlations by setting difference and flags any group whose
/// spread exceeds a 5σ binomial threshold.
StationarityReport stationarity_audit(const DataSet& ds, double sigmas = 5.0);

/// Four columns from two runs of simulate_pair_run that share one setting
/// difference; pairs are declared per run.
DataSet stationary_pair_dataset(double theta_a, double theta_b, double offset, std::int64_t n,
                                std::uint64_t seed);

/// Per trial, on the singlet: σ_z on particle 1 and 2, then σ_x on particle 1
/// and 2, measured one after another. Columns z1, z2, x1, x2 carry angles
/// 0, 0, π/2, π/2 in the x–z plane, and the two arms are paired crosswise.
DataSet sequential_singlet_dataset(std::int64_t n, std::uint64_t seed);

}  // namespace ghzlab
