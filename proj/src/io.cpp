#include "slitwave/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace slitwave {

using nlohmann::json;

CsvError::CsvError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

// ---------------------------------------------------------------- config

namespace {

constexpr double kNm = 1e-9;
constexpr double kMm = 1e-3;
constexpr double kMrad = 1e-3;

template <class T>
void read_if(const json& doc, const char* key, T& target) {
  if (doc.contains(key)) target = doc.at(key).get<T>();
}

void read_scaled(const json& doc, const char* key, double unit, double& target) {
  if (doc.contains(key)) target = doc.at(key).get<double>() * unit;
}

json si_to_json(const SimulationConfig& c) {
  return json{{"wavelength", c.wave.wavelength},
              {"width_a", c.geometry.width_a},
              {"length_b", c.geometry.length_b},
              {"thickness_c", c.geometry.thickness_c},
              {"separation_d", c.geometry.separation_d},
              {"alpha", c.alpha},
              {"beta_min", c.beta_min},
              {"beta_max", c.beta_max}};
}

void si_from_json(const json& doc, SimulationConfig& c) {
  read_if(doc, "wavelength", c.wave.wavelength);
  read_if(doc, "width_a", c.geometry.width_a);
  read_if(doc, "length_b", c.geometry.length_b);
  read_if(doc, "thickness_c", c.geometry.thickness_c);
  read_if(doc, "separation_d", c.geometry.separation_d);
  read_if(doc, "alpha", c.alpha);
  read_if(doc, "beta_min", c.beta_min);
  read_if(doc, "beta_max", c.beta_max);
}

}  // namespace

SimulationConfig config_from_json(const json& input, const SimulationConfig& base) {
  if (input.contains("config") && input.at("config").is_object()) {
    SimulationConfig c = config_from_json(input.at("config"), base);
    if (input.contains("resolved_si")) si_from_json(input.at("resolved_si"), c);
    return c;
  }
  SimulationConfig c = base;
  try {
    read_scaled(input, "wavelength_nm", kNm, c.wave.wavelength);
    read_scaled(input, "slit_width_mm", kMm, c.geometry.width_a);
    read_scaled(input, "slit_separation_mm", kMm, c.geometry.separation_d);
    read_scaled(input, "slit_length_mm", kMm, c.geometry.length_b);
    read_scaled(input, "thickness_mm", kMm, c.geometry.thickness_c);
    read_if(input, "slit_count", c.geometry.slit_count);
    read_if(input, "c1", c.wave.c1);
    read_if(input, "c2", c.wave.c2);
    if (input.contains("amplitude")) {
      const json& amp = input.at("amplitude");
      if (amp.is_array()) {
        if (amp.size() != 3) throw ConfigError("amplitude must have three components");
        for (std::size_t i = 0; i < 3; ++i) c.wave.amplitude[i] = amp.at(i).get<double>();
      } else {
        read_if(amp, "Ax", c.wave.amplitude[0]);
        read_if(amp, "Ay", c.wave.amplitude[1]);
        read_if(amp, "Az", c.wave.amplitude[2]);
      }
    }
    read_scaled(input, "alpha_mrad", kMrad, c.alpha);
    read_if(input, "screen_R_m", c.screen_R);
    if (input.contains("beta_range_mrad")) {
      const json& range = input.at("beta_range_mrad");
      if (range.is_array()) {
        if (range.size() != 2) throw ConfigError("beta_range_mrad must be [min, max]");
        c.beta_min = range.at(0).get<double>() * kMrad;
        c.beta_max = range.at(1).get<double>() * kMrad;
      } else {
        const double half = range.get<double>() * kMrad;
        c.beta_min = -half;
        c.beta_max = half;
      }
    }
    read_if(input, "points", c.points);
    if (input.contains("truncation")) {
      const json& t = input.at("truncation");
      read_if(t, "max_m", c.truncation.max_m);
      read_if(t, "max_n", c.truncation.max_n);
      read_if(t, "tail_eps", c.truncation.tail_eps);
      read_if(t, "evanescent_floor", c.truncation.evanescent_floor);
    }
    if (input.contains("variant")) c.variant = parse_variant(input.at("variant").get<std::string>());
    read_if(input, "normalization_tol", c.normalization_tol);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

json config_to_json(const SimulationConfig& c) {
  return json{
      {"wavelength_nm", c.wave.wavelength * 1e9},
      {"slit_width_mm", c.geometry.width_a * 1e3},
      {"slit_separation_mm", c.geometry.separation_d * 1e3},
      {"slit_length_mm", c.geometry.length_b * 1e3},
      {"thickness_mm", c.geometry.thickness_c * 1e3},
      {"slit_count", c.geometry.slit_count},
      {"c1", c.wave.c1},
      {"c2", c.wave.c2},
      {"amplitude", {c.wave.amplitude[0], c.wave.amplitude[1], c.wave.amplitude[2]}},
      {"alpha_mrad", c.alpha * 1e3},
      {"screen_R_m", c.screen_R},
      {"beta_range_mrad", {c.beta_min * 1e3, c.beta_max * 1e3}},
      {"points", c.points},
      {"truncation",
       {{"max_m", c.truncation.max_m},
        {"max_n", c.truncation.max_n},
        {"tail_eps", c.truncation.tail_eps},
        {"evanescent_floor", c.truncation.evanescent_floor}}},
      {"variant", to_string(c.variant)},
      {"normalization_tol", c.normalization_tol}};
}

SimulationConfig load_config(const std::filesystem::path& path, const SimulationConfig& base) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc, base);
}

SimulationConfig preset(const std::string& name) {
  if (name == "paper_fig4") return paper_fig4_config();
  throw ConfigError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  std::istringstream stream(line);
  while (std::getline(stream, current, ',')) fields.push_back(current);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char ch) { return ch == ' ' || ch == '\t'; });
}

double field_value(const std::string& text, std::size_t line, const char* column) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw CsvError(line, std::string("column ") + column + " is not a number: '" + text + "'");
  }
}

}  // namespace

void write_pattern_csv(std::ostream& out, const PatternSeries& series) {
  out << kPatternHeader << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(series.beta[i] * 1e3) << ',' << format_double(series.singles[i]) << ','
        << format_double(series.coincidence[i]) << '\n';
  }
}

PatternSeries read_pattern_csv(std::istream& in, bool normalized) {
  PatternSeries series;
  series.normalized = normalized;
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  ++number;
  if (strip_cr(line) != kPatternHeader) {
    throw CsvError(1, std::string("expected header '") + kPatternHeader + "'");
  }
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) throw CsvError(number, "expected 3 fields");
    series.beta.push_back(field_value(fields[0], number, "beta_mrad") * kMrad);
    series.singles.push_back(field_value(fields[1], number, "singles"));
    series.coincidence.push_back(field_value(fields[2], number, "coincidence"));
  }
  return series;
}

void write_reference_csv(std::ostream& out, const ReferenceSeries& ref) {
  out << (ref.sigma ? kReferenceSigmaHeader : kReferenceHeader) << '\n';
  for (std::size_t i = 0; i < ref.beta.size(); ++i) {
    out << format_double(ref.beta[i] * 1e3) << ',' << format_double(ref.counts[i]);
    if (ref.sigma) out << ',' << format_double((*ref.sigma)[i]);
    out << '\n';
  }
}

ReferenceSeries read_reference_csv(std::istream& in) {
  ReferenceSeries ref;
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  line = strip_cr(line);
  bool with_sigma = false;
  if (line == kReferenceSigmaHeader) {
    with_sigma = true;
    ref.sigma.emplace();
  } else if (line != kReferenceHeader) {
    throw CsvError(1, std::string("expected header '") + kReferenceHeader + "' or '" +
                          kReferenceSigmaHeader + "'");
  }
  const std::size_t expected = with_sigma ? 3 : 2;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected) {
      throw CsvError(number, "expected " + std::to_string(expected) + " fields, found " +
                                 std::to_string(fields.size()));
    }
    const double beta = field_value(fields[0], number, "beta_mrad") * kMrad;
    const double counts = field_value(fields[1], number, "counts");
    if (!ref.beta.empty() && !(beta > ref.beta.back())) {
      throw CsvError(number, "beta_mrad is not strictly increasing");
    }
    if (!(counts >= 0.0)) throw CsvError(number, "counts must be >= 0");
    ref.beta.push_back(beta);
    ref.counts.push_back(counts);
    if (with_sigma) {
      const double sigma = field_value(fields[2], number, "sigma");
      if (!(sigma > 0.0)) throw CsvError(number, "sigma must be > 0");
      ref.sigma->push_back(sigma);
    }
  }
  if (ref.beta.empty()) throw CsvError(number, "no data rows");
  return ref;
}

void write_overlay_csv(std::ostream& out, const ReferenceSeries& ref,
                       const std::vector<double>& model, const std::vector<double>& residuals) {
  out << "beta_mrad,counts,model,residual\n";
  for (std::size_t i = 0; i < ref.beta.size(); ++i) {
    out << format_double(ref.beta[i] * 1e3) << ',' << format_double(ref.counts[i]) << ','
        << format_double(model[i]) << ',' << format_double(residuals[i]) << '\n';
  }
}

// ---------------------------------------------------------------- manifest

json manifest_to_json(const RunManifest& manifest) {
  return json{{"tool", "slitwave"},
              {"version", kVersion},
              {"command", manifest.command},
              {"config", config_to_json(manifest.config)},
              {"resolved_si", si_to_json(manifest.config)},
              {"truncation_used",
               {{"width_modes", manifest.truncation.width_modes},
                {"max_length_modes", manifest.truncation.max_length_modes},
                {"total_modes", manifest.truncation.total_modes}}},
              {"outputs", manifest.outputs}};
}

// ---------------------------------------------------------------- SVG

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  return (frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
    for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  }
  if (!(x_hi > x_lo)) x_lo = 0.0, x_hi = 1.0;
  y_lo = std::min(y_lo, 0.0);
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
      << fixed(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(title) << "</text>\n";
  svg << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w)
      << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(x_hi - x_lo);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
    const double x = px(t);
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\"" << fixed(x)
        << "\" y2=\"" << fixed(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\">" << format_double(std::round(t / xs) * xs) << "</text>\n";
  }
  const double ys = nice_step(y_hi - y_lo);
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
    const double y = py(t);
    svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft)
        << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\">" << format_double(std::round(t / ys) * ys) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << fixed(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& line = series[s];
    svg << "<polyline fill=\"none\" stroke=\"" << escape_xml(line.colour)
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(line.x.size(), line.y.size()); ++i) {
      if (i) svg << ' ';
      svg << fixed(px(line.x[i])) << ',' << fixed(py(line.y[i]));
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(s);
    svg << "<line x1=\"" << fixed(kLeft + plot_w - 150) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(kLeft + plot_w - 125) << "\" y2=\"" << fixed(ly) << "\" stroke=\""
        << escape_xml(line.colour) << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(kLeft + plot_w - 120) << "\" y=\"" << fixed(ly + 4) << "\">"
        << escape_xml(line.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------- files

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace slitwave
