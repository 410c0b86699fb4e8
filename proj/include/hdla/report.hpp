// Report rows and their CSV/JSON serializations (schema v1; golden-file
// tested for byte stability).
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hdla::harness {

inline constexpr int kReportSchemaVersion = 1;

struct ReportRow {
    std::string experiment;
    int n = 0;
    std::string scope; // "aggregate" or "trial/<i>"
    std::string metric;
    double value = 0;
    std::optional<double> ci_half_width;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
};

// Deterministic "%.12g" float formatting shared by both writers.
std::string format_value(double v);

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows);
void write_json(std::ostream& os, const std::vector<ReportRow>& rows);

} // namespace hdla::harness
