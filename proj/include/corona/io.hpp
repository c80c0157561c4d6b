#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "corona/coeff.hpp"
#include "corona/errors.hpp"
#include "corona/group.hpp"
#include "corona/kernel.hpp"
#include "corona/spectral_set.hpp"

namespace corona {

/// Malformed input, located by a JSON pointer into the document.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : ValidationError(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

using json = nlohmann::json;

/// Group source:
///   {"lattice": n}
///   {"finite": "S3" | "Z/5" | {"name", "order", "table", "generators",
///                              "irreps": [{"dim", "matrices"}]}}
///   {"product": [group, ...]}
/// Irrep matrices are given per generator as rows of [re, im] pairs.
GroupSpec parse_group(const json& j, const std::string& at = "");

/// An integer (Z^1), an array of lattice coordinates, or
/// {"coords": [...], "indices": [...]}.
Element parse_element(const GroupSpec& g, const json& j, const std::string& at = "");

/// A number, [re, im], or {"re", "im"}.
cplx parse_complex(const json& j, const std::string& at = "");

/// Coefficient expression tree. Exactly one key per node:
///   {"const": c}
///   {"so": name, "factor": i | "radial", "scale": s}
///   {"vanishing": [{"element", "re", "im"}]}
///   {"decay": {"amplitude": c, "rate": r}}
///   {"periodic": {"period": [...], "values": [c, ...]}}
///   {"sum": [...]}, {"product": [...]}, {"conj": expr}
///   {"scale": {"factor": c, "of": expr}}
///   {"translate": {"by": element, "of": expr}}
/// Bare numbers are constants.
CoefficientSymbol parse_coefficient(const GroupSpec& g, const json& j, const std::string& at = "");

/// [{"coeff": expr, "profile": [{"element", "re", "im"}]}]
KernelSymbol parse_kernel(std::shared_ptr<const GroupSpec> g, const json& j, const std::string& at = "");

/// Reads and parses a JSON file; syntax errors become ConfigError.
json read_json_file(const std::string& path);

/// Shortest round-trip decimal form, -0 folded to 0.
std::string format_double(double v);

/// CSV with header re,im,tag,resolution. Tags: point, segment_a, segment_b
/// (consecutive rows), circle_center, circle_radius (radius in re).
std::string spectral_set_csv(const SpectralSet& s);

json spectral_set_json(const SpectralSet& s);

}  // namespace corona
