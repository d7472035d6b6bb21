#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wolct/params.hpp"
#include "wolct/siggen.hpp"
#include "wolct/transform.hpp"
#include "wolct/uncertainty.hpp"

namespace wolct::io {

using json = nlohmann::json;

inline constexpr std::string_view kSuiteVersion = "wolct-suite/1";
inline constexpr double kMinTolerance = 1e-14;
inline constexpr double kMaxTolerance = 1e-1;
inline constexpr const char* kTolEnvVar = "WOLCT_DEFAULT_TOL";

/// Indented JSON with every double at 17 significant digits. Non-finite
/// numbers become null. Arrays of scalars stay on one line.
std::string dump(const json& j);

json to_json(const OlctParams& A);
json to_json(const Grid& g);
json to_json(const SampledSignal& s);
json to_json(const TimeFreqMap& V);
json to_json(const siggen::SignalKind& kind);
json to_json(const siggen::SignalSpec& spec);

// Parsers reject unknown fields and name the offending one in the message.
OlctParams params_from_json(const json& j);
Grid grid_from_json(const json& j, std::string_view path = "grid");
/// Accepts the optional extras written by the transform command
/// ("params", "source_grid"); use signal_file_from_json to read them.
SampledSignal signal_from_json(const json& j);
TimeFreqMap tfmap_from_json(const json& j);
siggen::SignalKind signal_kind_from_json(const json& j, std::string_view path = "kind");
siggen::SignalSpec signal_spec_from_json(const json& j);

/// A signal file plus the metadata a transformed signal carries.
struct SignalFile {
    SampledSignal signal;
    std::optional<OlctParams> params;
    std::optional<Grid> source_grid;
};

SignalFile signal_file_from_json(const json& j);
json to_json(const SignalFile& file);

/// "a,b,c,d,u0,w0" (offsets optional).
OlctParams parse_params_csv(std::string_view text);
/// "start,step,count".
Grid parse_grid_csv(std::string_view text);

/// FNV-1a over the grid and the raw sample bytes, as 16 hex digits.
std::string signal_id(const SampledSignal& s);

/// "u\tw\t|V|" rows, u fastest, with a header line.
std::string tsv_magnitude(const TimeFreqMap& V);

json read_json_file(const std::string& path);
/// "-" writes to stdout.
void write_text(const std::string& path, const std::string& text);

/// Everything that determines a verify run.
struct RunConfig {
    OlctParams params;
    TransformMethod method = TransformMethod::fast;
    std::optional<Grid> u_grid;
    std::optional<Grid> w_grid;
    std::vector<std::string> suite;  // empty = all checks
    std::map<std::string, double> tolerances;
    double default_tol = lab::kDefaultSlack;
    double lieb_p = 4.0;
    double floor = lab::kDefaultFloor;
    unsigned threads = 1;
    std::string signal_path;
    std::string window_path;
    std::string report_path;

    /// Validates names and bounds; throws InputError.
    lab::SuiteConfig to_suite_config() const;
};

/// Parses "name=value".
std::pair<std::string, double> parse_tolerance(std::string_view text);

/// Validated tolerance from the environment, if set.
std::optional<double> default_tol_from_env();

/// Report document. `threads` is deliberately absent from the config echo so
/// serial and parallel runs produce the same bytes.
json report_to_json(const lab::UncertaintyReport& report, const RunConfig& config, const SampledSignal& f,
                    const SampledSignal& phi, std::optional<std::string> timestamp = std::nullopt);

}  // namespace wolct::io
