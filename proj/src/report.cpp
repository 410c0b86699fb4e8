#include "hdla/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace hdla::harness {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

} // namespace

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << "experiment,n,scope,metric,value,ci_half_width,trials,seed\n";
    for (const auto& r : rows) {
        os << csv_escape(r.experiment) << ',' << r.n << ',' << csv_escape(r.scope) << ','
           << csv_escape(r.metric) << ',' << format_value(r.value) << ',';
        if (r.ci_half_width) os << format_value(*r.ci_half_width);
        os << ',';
        if (r.trials) os << *r.trials;
        os << ',';
        if (r.seed) os << *r.seed;
        os << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<ReportRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json obj;
        obj["experiment"] = r.experiment;
        obj["n"] = r.n;
        obj["scope"] = r.scope;
        obj["metric"] = r.metric;
        obj["value"] = r.value;
        obj["ci_half_width"] = r.ci_half_width ? nlohmann::json(*r.ci_half_width)
                                               : nlohmann::json(nullptr);
        obj["trials"] = r.trials ? nlohmann::json(*r.trials) : nlohmann::json(nullptr);
        obj["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
}

} // namespace hdla::harness
