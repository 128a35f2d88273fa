#include "ghzlab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ghzlab/error.hpp"
#include "ghzlab/measurement.hpp"
#include "ghzlab/rng.hpp"

namespace ghzlab {

namespace {

void check_pair(const Column& a, const Column& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "columns must not be empty");
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "column lengths differ (" + std::to_string(a.size()) + " vs " +
                                                      std::to_string(b.size()) + ")");
    }
    const auto not_spin = [](std::int8_t v) { return v != 1 && v != -1; };
    if (std::ranges::any_of(a, not_spin) || std::ranges::any_of(b, not_spin)) {
        throw Error(ErrorCode::InvalidArgument, "column entries must be +1 or -1");
    }
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double wrap_angle(double d) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    d = std::fmod(d, two_pi);
    if (d <= -std::numbers::pi) d += two_pi;
    if (d > std::numbers::pi) d -= two_pi;
    return d;
}

double correlation_variance(const Correlation& c) {
    const double n = static_cast<double>(c.n);
    const double v = c.value();
    return std::max(1.0 - v * v, 1.0 / n) / n;
}

}  // namespace

void DataSet::add(std::string name, Column column) {
    if (std::find(names.begin(), names.end(), name) != names.end()) {
        throw Error(ErrorCode::InvalidArgument, "duplicate column name '" + name + "'");
    }
    for (std::int8_t v : column) {
        if (v != 1 && v != -1) throw Error(ErrorCode::InvalidArgument, "column '" + name + "' holds a non-±1 value");
    }
    names.push_back(std::move(name));
    columns.push_back(std::move(column));
}

const Column& DataSet::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::InvalidArgument, "no column named '" + name + "'");
    return columns[static_cast<std::size_t>(it - names.begin())];
}

std::size_t DataSet::length() const {
    if (columns.empty()) return 0;
    const std::size_t n = columns.front().size();
    for (const Column& c : columns) {
        if (c.size() != n) throw Error(ErrorCode::DimensionMismatch, "data set columns have unequal lengths");
    }
    return n;
}

DataSet read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split_row(trim(line));
    }
    if (header.empty()) throw Error(ErrorCode::Parse, "CSV input has no header row");
    std::vector<Column> cols(header.size());
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const std::vector<std::string> cells = split_row(row);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields, got " +
                                              std::to_string(cells.size()));
        }
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const std::string& c = cells[k];
            if (c == "1" || c == "+1") {
                cols[k].push_back(1);
            } else if (c == "-1") {
                cols[k].push_back(-1);
            } else {
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": entry '" + c +
                                                  "' in column '" + header[k] + "' is not +1 or -1");
            }
        }
    }
    if (cols.front().empty()) throw Error(ErrorCode::Parse, "CSV input has no data rows");
    DataSet ds;
    try {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k].empty()) throw Error(ErrorCode::Parse, "empty column name in header");
            ds.add(header[k], std::move(cols[k]));
        }
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    return ds;
}

DataSet read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const DataSet& ds) {
    for (std::size_t k = 0; k < ds.names.size(); ++k) out << (k ? "," : "") << ds.names[k];
    out << '\n';
    const std::size_t n = ds.length();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < ds.columns.size(); ++k) out << (k ? "," : "") << (ds.columns[k][i] > 0 ? "1" : "-1");
        out << '\n';
    }
}

void load_angle_metadata(DataSet& ds, const nlohmann::json& meta) {
    try {
        for (const auto& [name, angle] : meta.at("angles").items()) {
            ds.column(name);
            const double theta = angle.get<double>();
            if (!std::isfinite(theta)) throw Error(ErrorCode::Parse, "angle for '" + name + "' is not finite");
            ds.angles[name] = theta;
        }
        if (meta.contains("pairs")) {
            for (const auto& p : meta.at("pairs")) {
                if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::Parse, "pairs must be [first, second]");
                const auto first = p[0].get<std::string>();
                const auto second = p[1].get<std::string>();
                ds.column(first);
                ds.column(second);
                ds.pairs.emplace_back(first, second);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed angle metadata: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

void load_angle_metadata_file(DataSet& ds, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    nlohmann::json meta;
    try {
        in >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed angle metadata: ") + e.what());
    }
    load_angle_metadata(ds, meta);
}

Correlation cross_correlation(const Column& a, const Column& b) {
    check_pair(a, b);
    Correlation c;
    c.n = static_cast<std::int64_t>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c.sum += a[i] * b[i];
    return c;
}

Bell3Report bell3_check(const Column& a, const Column& b, const Column& c) {
    Bell3Report r;
    r.ab = cross_correlation(a, b);
    r.ac = cross_correlation(a, c);
    r.bc = cross_correlation(b, c);
    const std::int64_t n = r.ab.n;
    const std::int64_t lhs_scaled = std::abs(r.ab.sum - r.ac.sum);
    const std::int64_t rhs_scaled = n - r.bc.sum;
    r.margin_scaled = rhs_scaled - lhs_scaled;
    r.lhs = static_cast<double>(lhs_scaled) / static_cast<double>(n);
    r.rhs = static_cast<double>(rhs_scaled) / static_cast<double>(n);
    r.margin = static_cast<double>(r.margin_scaled) / static_cast<double>(n);
    r.satisfied = r.margin_scaled >= 0;
    return r;
}

Chsh4Report chsh4_check(const Column& a, const Column& a2, const Column& b, const Column& b2) {
    Chsh4Report r;
    r.ab = cross_correlation(a, b);
    r.ab2 = cross_correlation(a, b2);
    r.a2b = cross_correlation(a2, b);
    r.a2b2 = cross_correlation(a2, b2);
    const std::int64_t n = r.ab.n;
    r.s_scaled = r.ab.sum + r.ab2.sum + r.a2b.sum - r.a2b2.sum;
    r.margin_scaled = 2 * n - std::abs(r.s_scaled);
    r.s = static_cast<double>(r.s_scaled) / static_cast<double>(n);
    r.margin = static_cast<double>(r.margin_scaled) / static_cast<double>(n);
    r.satisfied = r.margin_scaled >= 0;
    return r;
}

PairRun simulate_pair_run(double theta1, double theta2, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "a run needs at least one sample");
    if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw Error(ErrorCode::InvalidArgument, "angles must be finite");
    PairRun run{theta1, theta2, {}, {}};
    run.s1.resize(static_cast<std::size_t>(n));
    run.s2.resize(static_cast<std::size_t>(n));
    // P(s2 = -s1) = (1 + cos Δ) / 2 with s1 uniform reproduces the joint law.
    const double p_anti = 0.5 * (1.0 + std::cos(theta1 - theta2));
    for (std::int64_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int s1 = rng.sign();
        const int s2 = rng.uniform() < p_anti ? -s1 : s1;
        run.s1[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(s1);
        run.s2[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(s2);
    }
    return run;
}

ChshRunReport chsh_independent_runs(const ChshAngles& angles, std::int64_t n, std::uint64_t seed) {
    ChshRunReport r;
    r.angles = angles;
    r.n = n;
    r.seed = seed;
    const std::array<std::pair<double, double>, 4> settings = {{
        {angles.a, angles.b},
        {angles.a, angles.b_prime},
        {angles.a_prime, angles.b},
        {angles.a_prime, angles.b_prime},
    }};
    std::array<PairRun, 4> runs;
    double variance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        runs[k] = simulate_pair_run(settings[k].first, settings[k].second, n, derive_seed(seed, k));
        r.correlations[k] = cross_correlation(runs[k].s1, runs[k].s2);
        r.expected[k] = -std::cos(settings[k].first - settings[k].second);
        variance += correlation_variance(r.correlations[k]);
    }
    double total = 0.0;
    for (const Correlation& c : r.correlations) total += c.value();
    for (std::size_t k = 0; k < 4; ++k) r.s_forms[k] = total - 2.0 * r.correlations[k].value();
    r.s_canonical = r.s_forms[3];
    r.s_form = 3;
    for (int k : {0, 1, 2}) {
        if (std::abs(r.s_forms[static_cast<std::size_t>(k)]) > std::abs(r.s_forms[static_cast<std::size_t>(r.s_form)])) {
            r.s_form = k;
        }
    }
    r.s = r.s_forms[static_cast<std::size_t>(r.s_form)];
    r.standard_error = std::sqrt(variance);
    r.violates = std::abs(r.s) > 2.0;
    r.sampling_regime = n == 1 ? "degenerate" : (n < 1000 ? "small" : "asymptotic");
    r.shared_columns = chsh4_check(runs[0].s1, runs[2].s1, runs[0].s2, runs[1].s2);
    return r;
}

StationarityReport stationarity_audit(const DataSet& ds, double sigmas) {
    std::vector<std::pair<std::string, std::string>> pairs = ds.pairs;
    if (pairs.empty()) {
        for (std::size_t i = 0; i < ds.names.size(); ++i) {
            for (std::size_t j = i + 1; j < ds.names.size(); ++j) {
                if (ds.angles.contains(ds.names[i]) && ds.angles.contains(ds.names[j])) {
                    pairs.emplace_back(ds.names[i], ds.names[j]);
                }
            }
        }
    }
    if (pairs.empty()) {
        throw Error(ErrorCode::InvalidArgument, "stationarity audit needs at least one column pair with angles");
    }

    StationarityReport report;
    std::map<long long, StationarityGroup> groups;  // keyed by difference in nano-radians
    for (const auto& [first, second] : pairs) {
        const auto ia = ds.angles.find(first);
        const auto ib = ds.angles.find(second);
        if (ia == ds.angles.end() || ib == ds.angles.end()) {
            throw Error(ErrorCode::InvalidArgument, "pair (" + first + ", " + second + ") lacks angle metadata");
        }
        PairCorrelation pc{first, second, wrap_angle(ia->second - ib->second),
                           cross_correlation(ds.column(first), ds.column(second))};
        const auto key = std::llround(pc.difference * 1e9);
        auto& g = groups[key];
        g.difference = pc.difference;
        g.members.push_back(std::move(pc));
    }
    report.n_pairs = pairs.size();
    for (auto& [key, g] : groups) {
        const auto [lo, hi] = std::minmax_element(g.members.begin(), g.members.end(), [](const auto& x, const auto& y) {
            return x.correlation.value() < y.correlation.value();
        });
        g.spread = hi->correlation.value() - lo->correlation.value();
        g.threshold = g.members.size() < 2
                          ? 0.0
                          : sigmas * std::sqrt(correlation_variance(lo->correlation) + correlation_variance(hi->correlation));
        g.exceeds = g.spread > g.threshold;
        report.max_spread = std::max(report.max_spread, g.spread);
        report.evidence_against_stationarity = report.evidence_against_stationarity || g.exceeds;
        report.groups.push_back(std::move(g));
    }
    return report;
}

DataSet stationary_pair_dataset(double theta_a, double theta_b, double offset, std::int64_t n, std::uint64_t seed) {
    const PairRun first = simulate_pair_run(theta_a, theta_b, n, derive_seed(seed, 0));
    const PairRun second = simulate_pair_run(theta_a + offset, theta_b + offset, n, derive_seed(seed, 1));
    DataSet ds;
    ds.add("a1", first.s1);
    ds.add("b1", first.s2);
    ds.add("a2", second.s1);
    ds.add("b2", second.s2);
    ds.angles = {{"a1", theta_a}, {"b1", theta_b}, {"a2", theta_a + offset}, {"b2", theta_b + offset}};
    ds.pairs = {{"a1", "b1"}, {"a2", "b2"}};
    return ds;
}

DataSet sequential_singlet_dataset(std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
    using enum PauliOp;
    const StateVector singlet = make_singlet_state();
    const std::array<Observable, 4> sequence = {
        Observable(PauliString({Z, I})),
        Observable(PauliString({I, Z})),
        Observable(PauliString({X, I})),
        Observable(PauliString({I, X})),
    };
    std::array<Column, 4> cols;
    for (std::int64_t t = 0; t < n; ++t) {
        const SequenceResult r = run_sequence(singlet, sequence, derive_seed(seed, static_cast<std::uint64_t>(t)));
        for (std::size_t k = 0; k < 4; ++k) cols[k].push_back(static_cast<std::int8_t>(r.records[k].outcome));
    }
    DataSet ds;
    ds.add("z1", std::move(cols[0]));
    ds.add("z2", std::move(cols[1]));
    ds.add("x1", std::move(cols[2]));
    ds.add("x2", std::move(cols[3]));
    const double right = std::numbers::pi / 2.0;
    ds.angles = {{"z1", 0.0}, {"z2", 0.0}, {"x1", right}, {"x2", right}};
    ds.pairs = {{"z1", "z2"}, {"x1", "x2"}, {"z1", "x2"}, {"x1", "z2"}};
    return ds;
}

}  // namespace ghzlab
