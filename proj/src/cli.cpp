#include "corona/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "corona/errors.hpp"
#include "corona/fourier.hpp"
#include "corona/io.hpp"
#include "corona/spectra.hpp"

namespace corona::cli {
namespace {

const std::vector<std::string> kTasks = {"ess-spectrum", "fredholm", "crosscheck", "verify-algebra", "verify-fourier"};

struct Config {
  std::string task;
  std::shared_ptr<const GroupSpec> group;
  std::optional<KernelSymbol> kernel;
  std::optional<KernelSymbol> kernel2;
  SpectraOptions spectra;
  std::optional<std::int64_t> window;
  std::optional<std::int64_t> margin;
  double epsilon = 1e-3;
  double tolerance = 1e-10;
  int trials = 20;
  std::uint64_t seed = 1;
  bool svg_timestamp = false;
  std::string out_dir = "corona-out";
};

std::int64_t option_int(const json& v, const std::string& at, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) throw ConfigError(at, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) throw ConfigError(at, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double option_positive(const json& v, const std::string& at) {
  if (!v.is_number()) throw ConfigError(at, "expected a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(at, "must be positive");
  return x;
}

Config load_config(const RunRequest& req) {
  const json doc = read_json_file(req.config_path);
  if (!doc.is_object()) throw ConfigError("/", "config must be a JSON object");
  Config c;
  c.task = req.task;
  if (std::find(kTasks.begin(), kTasks.end(), c.task) == kTasks.end())
    throw ConfigError("task", "unknown task '" + c.task + "'");
  if (doc.contains("task") && doc["task"] != c.task)
    throw ConfigError("/task", "config is for task " + doc["task"].dump() + ", command line asks for " + c.task);
  for (const auto& [k, v] : doc.items())
    if (k != "task" && k != "group" && k != "kernel" && k != "kernel2" && k != "options")
      throw ConfigError("/" + k, "unknown top-level field");

  if (!doc.contains("group")) throw ConfigError("/group", "missing required field");
  c.group = std::make_shared<const GroupSpec>(parse_group(doc["group"], "/group"));
  if (doc.contains("kernel")) c.kernel = parse_kernel(c.group, doc["kernel"], "/kernel");
  if (doc.contains("kernel2")) c.kernel2 = parse_kernel(c.group, doc["kernel2"], "/kernel2");
  if (c.task != "verify-fourier" && !c.kernel) throw ConfigError("/kernel", "missing required field");

  if (doc.contains("options")) {
    const auto& o = doc["options"];
    if (!o.is_object()) throw ConfigError("/options", "expected an object");
    for (const auto& [k, v] : o.items()) {
      const auto at = "/options/" + k;
      if (k == "dual_grid")
        c.spectra.dual_grid = static_cast<int>(option_int(v, at, 8, 1 << 20));
      else if (k == "pseudo_grid")
        c.spectra.pseudo_grid = static_cast<int>(option_int(v, at, 2, 4096));
      else if (k == "bloch_cell_cap")
        c.spectra.bloch_cell_cap = static_cast<std::size_t>(option_int(v, at, 1, 1 << 16));
      else if (k == "probe_samples")
        c.spectra.probe.samples = static_cast<int>(option_int(v, at, 8, 4096));
      else if (k == "cauchy_window")
        c.spectra.probe.cauchy_window = static_cast<int>(option_int(v, at, 2, 4096));
      else if (k == "cauchy_tolerance")
        c.spectra.probe.cauchy_tolerance = option_positive(v, at);
      else if (k == "phase_count")
        c.spectra.probe.phase_count = static_cast<int>(option_int(v, at, 4, 1 << 20));
      else if (k == "window")
        c.window = option_int(v, at, 0, 1 << 24);
      else if (k == "margin")
        c.margin = option_int(v, at, 0, 1 << 20);
      else if (k == "epsilon")
        c.epsilon = option_positive(v, at);
      else if (k == "tolerance")
        c.tolerance = option_positive(v, at);
      else if (k == "trials")
        c.trials = static_cast<int>(option_int(v, at, 1, 100000));
      else if (k == "seed")
        c.seed = static_cast<std::uint64_t>(option_int(v, at, 0, std::numeric_limits<std::int64_t>::max()));
      else if (k == "svg_timestamp") {
        if (!v.is_boolean()) throw ConfigError(at, "expected a boolean");
        c.svg_timestamp = v.get<bool>();
      } else if (k == "out") {
        if (!v.is_string()) throw ConfigError(at, "expected a string");
        c.out_dir = v.get<std::string>();
      } else {
        throw ConfigError(at, "unknown option");
      }
    }
  }
  if (c.spectra.probe.cauchy_window > c.spectra.probe.samples)
    throw ConfigError("/options/cauchy_window", "exceeds probe_samples");
  if (req.dual_grid) {
    if (*req.dual_grid < 8) throw ConfigError("--dual-grid", "must be at least 8");
    c.spectra.dual_grid = *req.dual_grid;
  }
  if (req.window) {
    if (*req.window < 0) throw ConfigError("--window", "must be non-negative");
    c.window = req.window;
  }
  if (req.margin) {
    if (*req.margin < 0) throw ConfigError("--margin", "must be non-negative");
    c.margin = req.margin;
  }
  if (req.epsilon) {
    if (!(*req.epsilon > 0.0)) throw ConfigError("--epsilon", "must be positive");
    c.epsilon = *req.epsilon;
  }
  if (req.out_dir) c.out_dir = *req.out_dir;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Artifacts {
 public:
  explicit Artifacts(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& bytes) {
    const auto path = (std::filesystem::path(dir_) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << bytes;
    if (!f) throw Error("write failed for " + path);
    files_.push_back({{"file", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  const json& files() const { return files_; }

 private:
  std::string dir_;
  json files_ = json::array();
};

std::string fmt(double v) { return format_double(v); }

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

json options_json(const Config& c) {
  json o;
  o["dual_grid"] = c.spectra.dual_grid;
  o["pseudo_grid"] = c.spectra.pseudo_grid;
  o["bloch_cell_cap"] = c.spectra.bloch_cell_cap;
  o["probe_samples"] = c.spectra.probe.samples;
  o["cauchy_window"] = c.spectra.probe.cauchy_window;
  o["cauchy_tolerance"] = c.spectra.probe.cauchy_tolerance;
  o["phase_count"] = c.spectra.probe.phase_count;
  o["escape_scale"] = c.spectra.probe.escape_scale;
  o["epsilon"] = c.epsilon;
  o["tolerance"] = c.tolerance;
  o["trials"] = c.trials;
  o["seed"] = c.seed;
  if (c.window) o["window"] = *c.window;
  if (c.margin) o["margin"] = *c.margin;
  return o;
}

json provenance_json(const EssentialSpectrum& ess) {
  json records = json::array();
  for (const auto& r : ess.provenance) {
    json limits = json::array();
    for (const auto& l : r.limits)
      limits.push_back({{"leaf", l.leaf}, {"value", {l.value.real(), l.value.imag()}}, {"cauchy_spread", l.spread}});
    records.push_back({{"probe", r.probe},
                       {"orbit_class", r.orbit_class},
                       {"representative", r.representative},
                       {"limits", limits},
                       {"limit_kernel", r.limit_kernel},
                       {"component", r.component},
                       {"resolution", r.resolution}});
  }
  return {{"records", records}, {"cluster_delta", ess.cluster_delta}, {"note", ess.note}};
}

void describe_components(std::ostream& rep, const SpectralSet& s) {
  const auto comps = real_components(s);
  if (comps.empty()) return;
  rep << "real components:\n";
  for (const auto& c : comps) rep << "  [" << fmt(c[0]) << ", " << fmt(c[1]) << "]\n";
  for (std::size_t i = 0; i + 1 < comps.size(); ++i)
    rep << "  gap (" << fmt(comps[i][1]) << ", " << fmt(comps[i + 1][0]) << ")\n";
}

int task_ess_spectrum(const Config& c, Artifacts& art, json& res, std::ostream& rep) {
  const auto ess = essential_spectrum(*c.kernel, c.spectra);
  art.write("spectrum.csv", spectral_set_csv(ess.set));
  art.write("spectrum.svg", render_svg(ess.set, {"essential spectrum", c.svg_timestamp}));
  art.write_json("provenance.json", provenance_json(ess));
  res["essential_spectrum"] = ess.set.resolution;
  res["cluster_delta"] = ess.cluster_delta;
  rep << "essential spectrum: " << summarize(ess.set) << "\n";
  describe_components(rep, ess.set);
  rep << "probes: " << ess.provenance.size() << "; " << ess.note << "\n";
  if (auto f = formula_spectrum(*c.kernel, c.spectra)) {
    const double d = hausdorff_distance(ess.set, *f);
    art.write("formula.csv", spectral_set_csv(*f));
    res["formula"] = f->resolution;
    rep << "closed-form range: " << summarize(*f) << "\n";
    rep << "hausdorff distance to the quasi-orbit union: " << fmt(d) << " (summed resolutions "
        << fmt(f->resolution + ess.set.resolution) << ")\n";
  }
  return kOk;
}

int task_fredholm(const Config& c, Artifacts& art, json& res, std::ostream& rep) {
  const auto cert = is_fredholm(*c.kernel, c.spectra);
  json w = json::array();
  double worst_margin = 0.0;
  for (const auto& x : cert.witnesses) {
    w.push_back({{"probe", x.probe},
                 {"status", witness_name(x.status)},
                 {"distance_to_zero", x.distance_to_zero},
                 {"margin", x.margin},
                 {"lower_bound", x.lower_bound}});
    worst_margin = std::max(worst_margin, x.margin);
  }
  json j{{"verdict", verdict_name(cert.verdict)}, {"witnesses", w}, {"note", cert.note}};
  if (cert.closed_form) j["closed_form"] = verdict_name(*cert.closed_form);
  art.write_json("certificate.json", j);
  res["witness_margin"] = worst_margin;
  rep << "verdict: " << verdict_name(cert.verdict) << "\n";
  for (const auto& x : cert.witnesses)
    rep << "  " << x.probe << ": " << witness_name(x.status) << ", dist(0) " << fmt(x.distance_to_zero) << ", margin "
        << fmt(x.margin) << "\n";
  if (cert.closed_form) rep << "closed form: " << verdict_name(*cert.closed_form) << "\n";
  if (!cert.note.empty()) rep << "note: " << cert.note << "\n";
  return cert.verdict == Verdict::Inconclusive ? kInconclusive : kOk;
}

int task_crosscheck(const Config& c, Artifacts& art, json& res, std::ostream& rep) {
  const auto window = c.window.value_or(200);
  const auto r = truncation_crosscheck(*c.kernel, window, c.epsilon, c.spectra);
  SpectralSet eig;
  for (auto l : r.eigenvalues) eig.points.push_back(l);
  art.write("predicted.csv", spectral_set_csv(r.predicted));
  art.write("eigenvalues.csv", spectral_set_csv(eig));
  art.write("crosscheck.svg", render_svg(set_union(r.predicted, eig), {"prediction and truncation eigenvalues", c.svg_timestamp}));
  json outliers = json::array();
  for (auto l : r.outliers) outliers.push_back({l.real(), l.imag()});
  art.write_json("crosscheck.json", {{"decisive", r.decisive},
                                     {"window", r.window},
                                     {"epsilon", r.epsilon},
                                     {"eigenvalue_count", r.eigenvalues.size()},
                                     {"containment_distance", r.containment_distance},
                                     {"contained", r.contained},
                                     {"max_sigma_min", r.max_sigma_min},
                                     {"outliers", outliers},
                                     {"predicted", spectral_set_json(r.predicted)},
                                     {"note", r.note}});
  res["predicted"] = r.predicted.resolution;
  res["epsilon"] = r.epsilon;
  rep << "predicted: " << summarize(r.predicted) << "\n";
  rep << "mode: " << (r.decisive ? "decisive" : "advisory") << ", window " << r.window << ", "
      << r.eigenvalues.size() << " eigenvalues\n";
  if (r.decisive)
    rep << "sup distance from the prediction to the eigenvalues: " << fmt(r.containment_distance) << " (epsilon "
        << fmt(r.epsilon) << "): " << (r.contained ? "contained" : "NOT contained") << "\n";
  else
    rep << "max sigma_min over predicted samples: " << fmt(r.max_sigma_min) << " (epsilon " << fmt(r.epsilon) << ")\n";
  rep << "outliers (eigenvalues farther than epsilon from the prediction): " << r.outliers.size() << "\n";
  for (std::size_t i = 0; i < r.outliers.size() && i < 20; ++i) rep << "  " << fmt(r.outliers[i]) << "\n";
  rep << "note: " << r.note << "\n";
  return kOk;
}

double max_abs_entry(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

int task_verify_algebra(const Config& c, Artifacts& art, json& res, std::ostream& rep) {
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  const auto& phi = *c.kernel;
  const auto& psi = c.kernel2 ? *c.kernel2 : *c.kernel;
  const auto window = c.window.value_or(20);
  const auto margin = std::max(c.margin.value_or(0), phi.support_radius() + psi.support_radius());
  const auto a = schrodinger_matrix(phi, window, margin);
  const auto b = schrodinger_matrix(psi, window, margin);
  const auto ab = schrodinger_matrix(diamond(phi, psi), window, margin);
  const auto as = schrodinger_matrix(involution(phi), window, margin);
  std::vector<int> pos(a.window.size(), -1);
  for (std::size_t i = 0; i < a.interior.size(); ++i) pos[a.interior[i]] = static_cast<int>(i);
  auto restrict = [&](const Sparse& m) {
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i : a.interior)
      for (Sparse::InnerIterator it(m, i); it; ++it)
        if (pos[it.col()] >= 0) t.emplace_back(pos[i], pos[it.col()], it.value());
    Sparse out(static_cast<Eigen::Index>(a.interior.size()), static_cast<Eigen::Index>(a.interior.size()));
    out.setFromTriplets(t.begin(), t.end());
    return out;
  };
  const Sparse prod = a.entries * b.entries;
  const double r_prod = max_abs_entry(Sparse(ab.interior_sparse() - restrict(prod)));
  const double r_inv = max_abs_entry(Sparse(as.interior_sparse() - Sparse(a.interior_sparse().adjoint())));
  const bool ok = r_prod < c.tolerance && r_inv < c.tolerance;
  art.write_json("algebra.json", {{"window", window},
                                  {"margin", margin},
                                  {"product_residual", r_prod},
                                  {"involution_residual", r_inv},
                                  {"tolerance", c.tolerance},
                                  {"passed", ok}});
  res["tolerance"] = c.tolerance;
  rep << "Sch(phi <> psi) - Sch(phi) Sch(psi): " << fmt(r_prod) << "\n";
  rep << "Sch(phi^<>) - Sch(phi)^*: " << fmt(r_inv) << "\n";
  rep << "tolerance " << fmt(c.tolerance) << ", interior window " << window << ": " << (ok ? "passed" : "FAILED") << "\n";
  return ok ? kOk : kValidation;
}

int task_verify_fourier(const Config& c, Artifacts& art, json& res, std::ostream& rep) {
  const auto& g = *c.group;
  const auto dual = dual_of(g);
  validate_dual(g, dual, c.tolerance);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto window = g.enumerate_window(std::min<std::int64_t>(c.window.value_or(2), 4));
  double plancherel = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    Profile u;
    double norm2 = 0.0;
    for (const auto& x : window) {
      const cplx v(unit(rng), unit(rng));
      u[x] = v;
      norm2 += std::norm(v);
    }
    plancherel = std::max(plancherel, std::abs(norm2 - plancherel_norm(dual, fourier(g, dual, u))));
  }
  json j{{"irreps", dual.irreps.size()}, {"plancherel_residual", plancherel}, {"trials", c.trials}};
  rep << "unitary dual: " << dual.irreps.size() << " irreps, validated (tolerance " << fmt(c.tolerance) << ")\n";
  rep << "Plancherel residual over " << c.trials << " random functions: " << fmt(plancherel) << "\n";
  double diagram = 0.0;
  if (c.kernel) {
    const auto r = c.window.value_or(10);
    const auto margin = std::max(c.margin.value_or(0), c.kernel->support_radius());
    const auto op = op_quantize(partial_fourier(*c.kernel, dual), dual, r, margin);
    const auto sch = schrodinger_matrix(*c.kernel, r, margin);
    diagram = max_abs_entry(Eigen::SparseMatrix<cplx, Eigen::RowMajor>(op.interior_sparse() - sch.interior_sparse()));
    j["diagram_residual"] = diagram;
    rep << "Op(partial Fourier) - Sch residual on window " << r << ": " << fmt(diagram) << "\n";
  }
  const bool ok = plancherel < c.tolerance && diagram < c.tolerance;
  j["tolerance"] = c.tolerance;
  j["passed"] = ok;
  art.write_json("fourier.json", j);
  res["tolerance"] = c.tolerance;
  rep << (ok ? "passed" : "FAILED") << "\n";
  return ok ? kOk : kValidation;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const auto config = load_config(request);
    if (config.kernel && config.kernel->empty()) throw Error("kernel has no terms");
    if (config.kernel2 && config.kernel2->empty()) throw Error("kernel2 has no terms");
    Artifacts art(config.out_dir);
    json resolutions = json::object();
    std::ostringstream rep;
    rep << "corona-spectra " << kVersion << " task " << config.task << " on " << config.group->describe() << "\n";
    int code = kOk;
    if (config.task == "ess-spectrum")
      code = task_ess_spectrum(config, art, resolutions, rep);
    else if (config.task == "fredholm")
      code = task_fredholm(config, art, resolutions, rep);
    else if (config.task == "crosscheck")
      code = task_crosscheck(config, art, resolutions, rep);
    else if (config.task == "verify-algebra")
      code = task_verify_algebra(config, art, resolutions, rep);
    else
      code = task_verify_fourier(config, art, resolutions, rep);
    art.write("report.txt", rep.str());
    json manifest{{"tool", "corona-spectra"},
                  {"version", kVersion},
                  {"task", config.task},
                  {"config_sha256", sha256_hex(read_file(request.config_path))},
                  {"options", options_json(config)},
                  {"resolutions", resolutions},
                  {"exit_code", code},
                  {"libraries",
                   {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                  {"artifacts", art.files()}};
    std::ofstream((std::filesystem::path(config.out_dir) / "manifest.json").string(), std::ios::binary)
        << manifest.dump(2) << "\n";
    out << rep.str();
    return code;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Essential spectra and Fredholm certificates of convolution-dominated operators"};
  RunRequest req;
  app.add_option("task", req.task, "ess-spectrum | fredholm | crosscheck | verify-algebra | verify-fourier")
      ->required()
      ->check(CLI::IsMember(kTasks));
  app.add_option("--config", req.config_path, "JSON problem definition")->required();
  app.add_option_function<int>("--dual-grid", [&](int v) { req.dual_grid = v; }, "dual grid per torus dimension");
  app.add_option_function<std::int64_t>("--window", [&](std::int64_t v) { req.window = v; }, "window radius");
  app.add_option_function<std::int64_t>("--margin", [&](std::int64_t v) { req.margin = v; }, "window margin");
  app.add_option_function<double>("--epsilon", [&](double v) { req.epsilon = v; }, "crosscheck tolerance");
  app.add_option_function<std::string>("--out", [&](const std::string& v) { req.out_dir = v; }, "output directory");
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  return run(req, std::cout, std::cerr);
}

}  // namespace corona::cli
