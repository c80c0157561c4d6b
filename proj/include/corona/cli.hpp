#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "corona/spectral_set.hpp"

namespace corona::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kError = 1, kInconclusive = 2, kValidation = 3 };

struct RunRequest {
  std::string task;
  std::string config_path;
  std::optional<int> dual_grid;
  std::optional<std::int64_t> window;
  std::optional<std::int64_t> margin;
  std::optional<double> epsilon;
  std::optional<std::string> out_dir;
};

/// Runs one task and writes its artifacts; the report goes to `out`,
/// diagnostics to `err`.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

/// argv front-end around run().
int main_entry(int argc, char** argv);

struct SvgOptions {
  std::string title;
  bool timestamp = false;
  int width = 800;
  int height = 360;
};

/// Points as markers, segments as bars, circles as outlines, with the
/// resolution and real-axis gaps annotated.
std::string render_svg(const SpectralSet& s, const SvgOptions& opts = {});
void emit_plot(const SpectralSet& s, const std::string& path, const SvgOptions& opts = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace corona::cli
