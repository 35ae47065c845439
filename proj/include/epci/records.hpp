#pragma once

// Text formats: EP curve / CI / coverage tables as CSV and JSON, dataset CSV
// ingestion, and cutoff grid specs. Numbers are written with 9 significant
// digits (correctly rounded, ties to even) so output is byte-stable.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epci/exceedance.hpp"
#include "epci/models.hpp"
#include "epci/simulation.hpp"

namespace epci {

std::string format_number(double value);
double parse_number(std::string_view text);

struct CurveRecord {
    double cutoff = 0.0;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

std::vector<CurveRecord> curve_records(const EpCurve& curve);
std::string curve_csv(const std::vector<CurveRecord>& records);
std::vector<CurveRecord> parse_curve_csv(std::string_view text);
std::string curve_json(const EpCurve& curve);

struct CiRecord {
    std::size_t coefficient = 0;  // zero-based
    double estimate = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double cutoff = 0.0;
    double p_value = 1.0;
    Side side = Side::two_sided;
    double alpha = 0.05;
    std::size_t n = 0;
    std::size_t d = 0;
};

std::string ci_csv(const std::vector<CiRecord>& records);
std::string ci_json(const std::vector<CiRecord>& records);

// Columns: scenario, n, cutoff, coverage, mc_se, K.
std::string coverage_csv(const CoverageResult& result);
// Adds hits, true exceedance per cell and the realized design term.
std::string coverage_json(const CoverageResult& result, std::uint64_t seed);

// Header `y` (mean) or `y,x1,...,xk` (regression). Comma-separated, '.'
// decimal, no quoting. Throws ErrorKind::validation on malformed input.
struct DatasetCsv {
    Dataset data;
    bool regression = false;
};
DatasetCsv parse_dataset_csv(std::string_view text);

// "c1,c2,..." or "lo:hi:count" (count >= 1 evenly spaced points, inclusive).
std::vector<double> parse_cutoff_spec(std::string_view spec);
std::vector<std::size_t> parse_size_list(std::string_view spec);

}  // namespace epci
