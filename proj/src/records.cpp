#include "epci/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "epci/error.hpp"

namespace epci {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSignificantDigits = 9;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t number = 0;
    for (std::string_view line : split(text, '\n')) {
        ++number;
        if (!line.empty()) out.emplace_back(number, line);
    }
    return out;
}

std::string at_line(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

// Finite values are rounded to the 9-digit text form so JSON and CSV agree.
Json json_number(double value) {
    if (std::isfinite(value)) return parse_number(format_number(value));
    return format_number(value);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, kSignificantDigits);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value))
        fail(ErrorKind::validation, "not a number: '" + std::string(text) + "'");
    return value;
}

std::vector<CurveRecord> curve_records(const EpCurve& curve) {
    std::vector<CurveRecord> out;
    out.reserve(curve.cutoffs.size());
    for (std::size_t i = 0; i < curve.cutoffs.size(); ++i) {
        const auto& e = curve.estimates[i];
        out.push_back({curve.cutoffs[i], e.point, e.lower, e.upper});
    }
    return out;
}

std::string curve_csv(const std::vector<CurveRecord>& records) {
    std::string out = "cutoff,point,lower,upper\n";
    for (const auto& r : records) {
        out += format_number(r.cutoff) + ',' + format_number(r.point) + ',' + format_number(r.lower) + ',' +
               format_number(r.upper) + '\n';
    }
    return out;
}

std::vector<CurveRecord> parse_curve_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) fail(ErrorKind::validation, "empty curve CSV");
    if (lines.front().second != "cutoff,point,lower,upper")
        fail(ErrorKind::validation, at_line(lines.front().first, "expected header cutoff,point,lower,upper"));
    std::vector<CurveRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i].second, ',');
        if (fields.size() != 4) fail(ErrorKind::validation, at_line(lines[i].first, "expected 4 fields"));
        try {
            out.push_back({parse_number(fields[0]), parse_number(fields[1]), parse_number(fields[2]),
                           parse_number(fields[3])});
        } catch (const Error& e) {
            fail(ErrorKind::validation, at_line(lines[i].first, e.what()));
        }
    }
    return out;
}

std::string curve_json(const EpCurve& curve) {
    const std::size_t j = curve.coefficient;
    Json doc;
    doc["coefficient"] = j + 1;
    doc["theta_hat"] = json_number(curve.fit.theta_hat.at(j));
    doc["sigma_hat"] = json_number(curve.fit.sigma_hat.at(j));
    doc["n"] = curve.fit.n;
    doc["d"] = curve.fit.d;
    doc["m"] = curve.rep_size;
    doc["alpha"] = json_number(curve.alpha);
    doc["side"] = std::string(to_string(curve.side));
    Json rows = Json::array();
    for (const auto& r : curve_records(curve)) {
        Json row;
        row["cutoff"] = json_number(r.cutoff);
        row["point"] = json_number(r.point);
        row["lower"] = json_number(r.lower);
        row["upper"] = json_number(r.upper);
        rows.push_back(std::move(row));
    }
    doc["records"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string ci_csv(const std::vector<CiRecord>& records) {
    std::string out = "coefficient,estimate,ci_lower,ci_upper,cutoff,p_value,side,alpha,n,d\n";
    for (const auto& r : records) {
        out += std::to_string(r.coefficient + 1) + ',' + format_number(r.estimate) + ',' +
               format_number(r.ci_lower) + ',' + format_number(r.ci_upper) + ',' + format_number(r.cutoff) + ',' +
               format_number(r.p_value) + ',' + std::string(to_string(r.side)) + ',' + format_number(r.alpha) +
               ',' + std::to_string(r.n) + ',' + std::to_string(r.d) + '\n';
    }
    return out;
}

std::string ci_json(const std::vector<CiRecord>& records) {
    Json rows = Json::array();
    for (const auto& r : records) {
        Json row;
        row["coefficient"] = r.coefficient + 1;
        row["estimate"] = json_number(r.estimate);
        row["ci_lower"] = json_number(r.ci_lower);
        row["ci_upper"] = json_number(r.ci_upper);
        row["cutoff"] = json_number(r.cutoff);
        row["p_value"] = json_number(r.p_value);
        row["side"] = std::string(to_string(r.side));
        row["alpha"] = json_number(r.alpha);
        row["n"] = r.n;
        row["d"] = r.d;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

std::string coverage_csv(const CoverageResult& result) {
    std::string out = "scenario,n,cutoff,coverage,mc_se,K\n";
    const std::string scenario(to_string(result.scenario));
    for (const auto& c : result.cells) {
        out += scenario + ',' + std::to_string(c.n) + ',' + format_number(c.cutoff) + ',' +
               format_number(c.coverage) + ',' + format_number(c.mc_se) + ',' + std::to_string(c.replications) +
               '\n';
    }
    return out;
}

std::string coverage_json(const CoverageResult& result, std::uint64_t seed) {
    Json doc;
    doc["scenario"] = std::string(to_string(result.scenario));
    doc["alpha"] = json_number(result.alpha);
    doc["K"] = result.replications;
    doc["seed"] = seed;
    if (!result.design_inverse_slope.empty()) {
        Json design = Json::array();
        for (double v : result.design_inverse_slope) design.push_back(json_number(v));
        doc["design_inverse_slope"] = std::move(design);
    }
    Json cells = Json::array();
    for (const auto& c : result.cells) {
        Json cell;
        cell["n"] = c.n;
        cell["cutoff"] = json_number(c.cutoff);
        cell["coverage"] = json_number(c.coverage);
        cell["mc_se"] = json_number(c.mc_se);
        cell["hits"] = c.hits;
        cell["K"] = c.replications;
        cell["true_exceedance"] = json_number(c.true_exceedance);
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);
    return doc.dump(2) + "\n";
}

DatasetCsv parse_dataset_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) fail(ErrorKind::validation, "empty input");
    const auto header = split(lines.front().second, ',');
    if (header.empty() || header.front() != "y")
        fail(ErrorKind::validation, at_line(lines.front().first, "first column must be 'y'"));
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c] != "x" + std::to_string(c))
            fail(ErrorKind::validation,
                 at_line(lines.front().first, "expected column 'x" + std::to_string(c) + "', got '" +
                                                  std::string(header[c]) + "'"));
    }
    const std::size_t rows = lines.size() - 1;
    if (rows == 0) fail(ErrorKind::validation, "no data rows");
    const std::size_t k = header.size() - 1;

    DatasetCsv out;
    out.regression = k > 0;
    out.data.outcome.resize(static_cast<Eigen::Index>(rows));
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& [number, line] = lines[r + 1];
        const auto fields = split(line, ',');
        if (fields.size() != header.size())
            fail(ErrorKind::validation, at_line(number, "expected " + std::to_string(header.size()) + " fields"));
        try {
            out.data.outcome[static_cast<Eigen::Index>(r)] = parse_number(fields[0]);
            for (std::size_t c = 0; c < k; ++c)
                x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_number(fields[c + 1]);
        } catch (const Error& e) {
            fail(ErrorKind::validation, at_line(number, e.what()));
        }
    }
    if (out.regression) out.data.covariates = std::move(x);
    return out;
}

std::vector<double> parse_cutoff_spec(std::string_view spec) {
    spec = trim(spec);
    if (spec.empty()) fail(ErrorKind::validation, "empty cutoff spec");
    if (spec.find(':') != std::string_view::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) fail(ErrorKind::validation, "range cutoff spec must be lo:hi:count");
        const double lo = parse_number(parts[0]);
        const double hi = parse_number(parts[1]);
        std::size_t count = 0;
        const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
        if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size() || count < 1)
            fail(ErrorKind::validation, "range count must be a positive integer");
        if (count == 1) return {lo};
        if (!(hi > lo)) fail(ErrorKind::validation, "range cutoff spec needs lo < hi");
        std::vector<double> out(count);
        const double step = (hi - lo) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
        out.back() = hi;
        return out;
    }
    std::vector<double> out;
    for (std::string_view field : split(spec, ',')) out.push_back(parse_number(field));
    return out;
}

std::vector<std::size_t> parse_size_list(std::string_view spec) {
    std::vector<std::size_t> out;
    for (std::string_view field : split(trim(spec), ',')) {
        std::size_t v = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size() || v == 0)
            fail(ErrorKind::validation, "not a positive integer: '" + std::string(field) + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace epci
