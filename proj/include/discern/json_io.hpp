#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "discern/certificates.hpp"
#include "discern/search.hpp"

namespace discern::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json shape_to_json(const Shape& s);
Shape shape_from_json(const json& j);

json density_to_json(const PolyDensity& f);
PolyDensity density_from_json(const json& j);

json family_to_json(const MeasureFamily& fam);
MeasureFamily family_from_json(const json& j);

SearchProblem problem_from_json(const json& j);
json problem_to_json(const SearchProblem& p);

// Missing fields keep the values from `base`.
SearchConfig search_config_from_json(const json& j, SearchConfig base = {});
json search_config_to_json(const SearchConfig& c);

json search_result_to_json(const SearchResult& r, std::uint64_t seed);
json certify_report_to_json(const DiscernibilityReport& rep);
json reconstruction_to_json(const ReconstructionResult& r);

// CSV: ',' separator, '.' decimal point, LF line endings, mandatory header.
std::string certify_report_to_csv(const DiscernibilityReport& rep);

struct BatchRow {
    int k = 0;
    int d = 0;
    std::string status;
    int restarts_used = 0;
    double residual = 0.0;
};

std::string batch_to_csv(const std::vector<BatchRow>& rows);
json batch_to_json(const std::vector<BatchRow>& rows, std::uint64_t seed);

std::string format_double(double v);  // 17 significant digits

}  // namespace discern::io
