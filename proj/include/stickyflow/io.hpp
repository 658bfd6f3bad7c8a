#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stickyflow/periodic.hpp"

namespace stickyflow {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(double x);
  CsvWriter& field(std::size_t n);
  CsvWriter& field(std::string_view text);
  CsvWriter& empty();
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool first_ = true;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Space-time plot of periodic trajectories, at most max_lines of them.
std::string render_periodic_svg(const PeriodicRun& run, std::size_t max_lines = 64);

}  // namespace stickyflow
