#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxsum/center.hpp"
#include "maxsum/errors.hpp"
#include "maxsum/matching.hpp"

namespace maxsum {

/// Unreadable or malformed input file.
class ParseError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// {"red": [[x, y], ...], "blue": [[x, y], ...]}
Instance parse_instance_json(const std::string& text);
/// Rows "color,x,y" with color R or B; an optional header row is skipped.
Instance parse_instance_csv(const std::string& text);
/// Dispatches on the .csv extension; anything else is read as JSON.
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& inst);
void write_instance_json(const std::filesystem::path& path, const Instance& inst);

/// Accepts {"matching": [[r, b], ...], ...} (match output or a certificate) or a bare array of pairs.
std::vector<MatchedPair> parse_matching(const nlohmann::json& doc);
Matching load_matching(const std::filesystem::path& path, const Instance& inst);

nlohmann::json matching_to_json(const Matching& m);

/// CertificateFile document. `pass` is written only when the matching is a computed max-sum matching.
nlohmann::json certificate_to_json(const Matching& m, const CenterCertificate& cert, std::optional<bool> pass);

struct CertificateCheck {
    bool ok = true;
    double max_ratio_error = 0.0;
    double lambda_error = 0.0;
    double recomputed_gap = 0.0;
    std::vector<std::string> problems;
};

/// Recomputes ratios, lambda*, total and the optimality gap from the raw instance and the
/// certificate's matching and center, and compares them with the stored values.
CertificateCheck check_certificate(const Instance& inst, const nlohmann::json& cert, double tol = 1e-9,
                                   double activation_tol = 1e-7, double gap_threshold = 1e-6);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace maxsum
