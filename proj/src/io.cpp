#include "stickyflow/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace stickyflow {

std::string format_double(double x) {
  if (x == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void CsvWriter::separator() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::field(double x) {
  separator();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::field(std::size_t n) {
  separator();
  out_ << n;
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kDigits[h & 0xf];
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string render_periodic_svg(const PeriodicRun& run, std::size_t max_lines) {
  constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 40.0;
  const std::size_t n = run.samples.front().x.size();
  const std::size_t lines = std::max<std::size_t>(1, std::min(max_lines, n));
  const double t_max = std::max(run.tau * static_cast<double>(run.sample_steps.back()), 1e-300);
  auto px = [&](double frac) { return kMargin + frac * (kWidth - 2 * kMargin); };
  auto py = [&](double t) { return kHeight - kMargin - t / t_max * (kHeight - 2 * kMargin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
     << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 12 << "\" font-size=\"12\">x in [0,1), t in [0,"
     << format_double(t_max) << "]</text>\n";
  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t i = l * n / lines + n / (2 * lines);
    std::ostringstream pts;
    double prev = -1.0;
    bool open = false;
    auto flush = [&] {
      if (open) os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.7\" points=\"" << pts.str() << "\"/>\n";
      pts.str("");
      open = false;
    };
    for (std::size_t s = 0; s < run.samples.size(); ++s) {
      const double x = run.samples[s].x[i];
      const double frac = x - std::floor(x);
      if (open && std::abs(frac - prev) > 0.5) flush();
      const double t = run.tau * static_cast<double>(run.sample_steps[s]);
      pts << format_double(std::round(px(frac) * 100) / 100) << ',' << format_double(std::round(py(t) * 100) / 100) << ' ';
      open = true;
      prev = frac;
    }
    flush();
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stickyflow
