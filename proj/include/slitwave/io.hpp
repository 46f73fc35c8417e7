#pragma once

// Configuration files, CSV import/export, run manifests and SVG plots.
// Files carry display units (nm, mm, mrad); everything in memory is SI.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "slitwave/calibrate.hpp"
#include "slitwave/config.hpp"
#include "slitwave/kirchhoff.hpp"
#include "slitwave/observables.hpp"

namespace slitwave {

inline constexpr const char* kVersion = "0.1.0";

/// Raised for unreadable files and unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV content; line() is 1-based and counts the header.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest text that reads back to the same double, at most 17 significant
/// digits, '.' decimal separator regardless of locale.
std::string format_double(double value);

/// Locale-independent parse of a full field; throws std::invalid_argument.
double parse_double(const std::string& text);

/// Reads a configuration document. Missing keys keep the values of `base`.
/// A run manifest is accepted too: its "config" member is used.
SimulationConfig config_from_json(const nlohmann::json& doc,
                                  const SimulationConfig& base = SimulationConfig{});
nlohmann::json config_to_json(const SimulationConfig& config);

SimulationConfig load_config(const std::filesystem::path& path,
                             const SimulationConfig& base = SimulationConfig{});

/// Known preset names; "paper_fig4" is the two-photon double-slit setup.
SimulationConfig preset(const std::string& name);

inline constexpr const char* kPatternHeader = "beta_mrad,singles,coincidence";
inline constexpr const char* kReferenceHeader = "beta_mrad,counts";
inline constexpr const char* kReferenceSigmaHeader = "beta_mrad,counts,sigma";

void write_pattern_csv(std::ostream& out, const PatternSeries& series);
/// Reads a pattern CSV back; the result is flagged normalized as written.
PatternSeries read_pattern_csv(std::istream& in, bool normalized = true);

void write_reference_csv(std::ostream& out, const ReferenceSeries& ref);
ReferenceSeries read_reference_csv(std::istream& in);

void write_overlay_csv(std::ostream& out, const ReferenceSeries& ref,
                       const std::vector<double>& model, const std::vector<double>& residuals);

struct RunManifest {
  SimulationConfig config;
  std::string command;
  TruncationReport truncation;
  std::vector<std::string> outputs;
};

/// Manifest contents are a pure function of the run inputs, so re-running
/// from the same configuration reproduces the file byte for byte.
nlohmann::json manifest_to_json(const RunManifest& manifest);

struct SvgSeries {
  std::string label;
  std::string colour;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with axes, tick labels and a legend.
std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace slitwave
