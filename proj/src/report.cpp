#include <charconv>
#include <stdexcept>

#include <json.hpp>

#include "graphsr/bench.hpp"

namespace gsr {

using nlohmann::json;

namespace {

const char* const kColumns[] = {"method", "axis_name", "axis_value", "fscore_mean", "fscore_se",
                                "mse_mean", "mse_se", "evals_mean", "failures", "trials"};

// Shortest round-trip form.
std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string emit_csv(const BenchmarkReport& report) {
    std::string out;
    for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        if (i) out += ',';
        out += kColumns[i];
    }
    out += '\n';
    for (const auto& r : report.rows) {
        out += csv_field(r.method) + ',' + csv_field(r.axis_name) + ',' + format_number(r.axis_value) + ',' +
               format_number(r.fscore_mean) + ',' + format_number(r.fscore_se) + ',' + format_number(r.mse_mean) +
               ',' + format_number(r.mse_se) + ',' + format_number(r.evals_mean) + ',' +
               std::to_string(r.failures) + ',' + std::to_string(r.trials) + '\n';
    }
    return out;
}

std::string emit_json(const BenchmarkReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"method", r.method},
                        {"axis_name", r.axis_name},
                        {"axis_value", r.axis_value},
                        {"fscore_mean", r.fscore_mean},
                        {"fscore_se", r.fscore_se},
                        {"mse_mean", r.mse_mean},
                        {"mse_se", r.mse_se},
                        {"evals_mean", r.evals_mean},
                        {"failures", r.failures},
                        {"trials", r.trials}});
    }
    return json{{"rows", rows}}.dump(2) + "\n";
}

}  // namespace

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format '" + name + "' (expected csv or json)");
}

std::string emit_report(const BenchmarkReport& report, ReportFormat format) {
    return format == ReportFormat::Csv ? emit_csv(report) : emit_json(report);
}

BenchmarkReport parse_report_json(std::string_view json_text) {
    BenchmarkReport report;
    try {
        const json doc = json::parse(json_text);
        for (const auto& r : doc.at("rows")) {
            ReportRow row;
            row.method = r.at("method").get<std::string>();
            row.axis_name = r.at("axis_name").get<std::string>();
            row.axis_value = r.at("axis_value").get<double>();
            row.fscore_mean = r.at("fscore_mean").get<double>();
            row.fscore_se = r.at("fscore_se").get<double>();
            row.mse_mean = r.at("mse_mean").get<double>();
            row.mse_se = r.at("mse_se").get<double>();
            row.evals_mean = r.at("evals_mean").get<double>();
            row.failures = r.at("failures").get<std::size_t>();
            row.trials = r.at("trials").get<std::size_t>();
            report.rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("benchmark report: ") + e.what());
    }
    return report;
}

}  // namespace gsr
