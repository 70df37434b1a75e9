#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbcf/bb_engine.hpp"
#include "bbcf/center_families.hpp"
#include "bbcf/holo_system.hpp"
#include "bbcf/numeric_verify.hpp"

namespace bbcf {

// ---- input documents -------------------------------------------------------
//
// {"variables": ["x", "y"],
//  "equations": [[{"coefficient": [[0,1],[1,1]], "exponents": [1,0]}, ...], ...],
//  "description": "..."}
//
// Integers inside a coefficient may also be given as decimal strings, and a
// whole coefficient may be a string such as "1/2-3/4i". "coeff" and "exp"
// are accepted for the two monomial keys.

struct MonomialRecord {
    ExactComplex coefficient;
    std::vector<int> exponents;
};

struct SystemDocument {
    std::vector<std::string> variables;
    std::vector<std::vector<MonomialRecord>> equations;
    std::string description;
};

SystemDocument parse_system_document(std::string_view text);
std::string emit_system_document(const SystemDocument& doc);

// Like terms are merged and terms above `order` are truncated away.
// Dimension 1 is accepted only with allow_one_dimensional.
HoloSystem to_holo_system(const SystemDocument& doc, int order = 12, bool allow_one_dimensional = false);
SystemDocument to_document(const HoloSystem& h, std::string description = {});

HoloSystem parse_system(std::string_view text, int order = 12);

// The document read as x*y' = f(x, y): variables[0] is x, the remaining n
// variables are y, and there is one equation per y.
BBSystem parse_bb_system(std::string_view text, int order = 12);

// ---- reports ---------------------------------------------------------------

struct SeriesTerm {
    int power = 0;
    ExactComplex coefficient;
    friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

struct CoordinateSeries {
    std::string variable;
    std::vector<SeriesTerm> terms;
    friend bool operator==(const CoordinateSeries&, const CoordinateSeries&) = default;
};

struct ObstructionEntry {
    std::string label;
    std::string variable;
    int order = 0;
    ExactComplex value;
    friend bool operator==(const ObstructionEntry&, const ObstructionEntry&) = default;
};

struct FreeParameterEntry {
    int order = 0;
    std::string variable;
    friend bool operator==(const FreeParameterEntry&, const FreeParameterEntry&) = default;
};

struct VerificationEntry {
    double return_error = 0;
    double residual_error = 0;
    double predicted_period = 0;
    std::size_t starts = 0;
    bool diverged = false;
    bool pass = false;
    friend bool operator==(const VerificationEntry&, const VerificationEntry&) = default;
};

struct ChartEntry {
    std::string chart;
    std::string tangency;
    std::string theorem_tag;
    std::string multiplicity;
    std::vector<FreeParameterEntry> free_parameters;
    std::vector<ObstructionEntry> obstructions;
    std::optional<int> blocking_order;
    std::string omega;
    std::string period;  // "2π/3"; empty when there is no manifold
    double period_value = 0;
    std::vector<CoordinateSeries> series;
    std::optional<VerificationEntry> verification;
    friend bool operator==(const ChartEntry&, const ChartEntry&) = default;
};

struct SpectrumEntry {
    std::string value;
    std::size_t multiplicity = 1;
    friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

struct BBVerdict {
    std::string kind;
    std::string resonance;
    std::vector<ObstructionEntry> obstructions;
    std::optional<int> blocking_order;
    std::vector<FreeParameterEntry> free_parameters;
    std::vector<CoordinateSeries> series;
    friend bool operator==(const BBVerdict&, const BBVerdict&) = default;
};

struct ReportDocument {
    std::string mode;  // classify, series, verify or bb
    int order = 12;
    std::string description;
    std::vector<std::string> variables;
    bool certified = true;
    bool diagonalizable = true;
    std::string normal_form;
    std::vector<SpectrumEntry> spectrum;
    std::vector<std::vector<std::string>> basis;  // rows; empty when no change of variables was made
    std::string message;
    std::vector<ChartEntry> charts;
    std::optional<BBVerdict> bb;
    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

// Floats in reports carry 15 significant digits.
double round_significant(double v);

ChartEntry chart_entry(const HoloSystem& h, const CenterManifoldReport& r, bool include_series);
void attach_verification(ChartEntry& entry, const VerifyResult& v);
BBVerdict bb_verdict(const BBSystem& bb, const BBClassification& c, const std::vector<std::string>& variables,
                     bool include_series);

enum class ReportFormat { json, text };

std::string emit_report(const ReportDocument& doc, ReportFormat format);
ReportDocument parse_report(std::string_view text, ReportFormat format);

// ---- the whole pipeline, as driven by the command line ---------------------

enum ExitCode : int { exit_ok = 0, exit_parse = 2, exit_unsupported = 3, exit_verification = 4 };

struct PipelineOptions {
    std::string mode = "classify";
    int order = 12;
    double radius = 1e-2;
    double tol = 1e-6;
    std::size_t starts = 8;
    double step = 1e-3;
    ReportFormat format = ReportFormat::json;
    bool numeric_fallback = false;
};

struct PipelineResult {
    int exit_code = exit_ok;
    std::string output;       // the report, empty on error
    std::string diagnostics;  // for standard error
};

PipelineResult run_pipeline(std::string_view input, const PipelineOptions& opt);

}  // namespace bbcf
