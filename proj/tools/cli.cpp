#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringflow/dynamics.hpp"
#include "ringflow/errors.hpp"
#include "ringflow/fractal.hpp"
#include "ringflow/guess.hpp"
#include "ringflow/optimizer.hpp"
#include "ringflow/parallel.hpp"
#include "ringflow/spectral.hpp"
#include "ringflow/state.hpp"
#include "ringflow/transfer.hpp"

namespace ringflow::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string hex_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << data;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

/// Records what a run read and wrote; printed as JSON once the command finishes.
struct RunManifest {
  std::string subcommand;
  json parameters = json::object();
  json inputs = json::object();
  json outputs = json::object();

  void input(const fs::path& path) { inputs[path.string()] = hex_digest(read_file(path)); }
  void output(const std::string& name, const std::string& data) { outputs[name] = hex_digest(data); }

  json to_json(double seconds) const {
    return {{"subcommand", subcommand}, {"parameters", parameters}, {"inputs", inputs},
            {"outputs", outputs},       {"duration_seconds", seconds}, {"version", kVersion}};
  }
};

CoefficientVector load_input_state(const std::string& path, RunManifest& manifest) {
  manifest.input(path);
  return load_state(path);
}

void save_output_state(const std::string& path, const CoefficientVector& state, RunManifest& manifest) {
  std::ostringstream text;
  write_state(text, state);
  write_file(path, text.str());
  manifest.output(path, text.str());
}

json fit_to_json(const FitReport& r, bool spectrum) {
  json j = {{"slope", r.slope},
            {"intercept", r.intercept},
            {"slope_stderr", r.slope_stderr},
            {"dimension", r.dimension},
            {"flagged", r.flagged},
            {"points", r.points.size()}};
  if (spectrum) j["beta"] = r.beta;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// Reads the second column of a `t,j` CSV; a non-numeric first line is a header.
std::vector<double> read_series_csv(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) {
      if (line_no == 1) continue;
      throw ParseError(line_no, "expected a number in `" + line + "`");
    }
    values.push_back(v);
  }
  return values;
}

bool looks_like_state_file(const std::string& text) { return text.rfind("N=", 0) == 0; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum backflow on a ring: current bounds, transfer minimization and fractal analysis",
               "ringflow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int threads = -1;
  std::string manifest_path;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); falls back to RINGFLOW_THREADS");
  app.add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

  // bounds
  int bounds_n = 1;
  auto* bounds = app.add_subcommand("bounds", "Instantaneous current bounds lambda-/lambda+");
  bounds->add_option("--n", bounds_n, "Highest angular momentum N")->required();

  // current
  std::string current_state, current_out;
  Eigen::Index current_samples = 1000;
  std::optional<double> current_t0, current_t1;
  auto* current = app.add_subcommand("current", "Sample j(t) on a uniform grid, CSV output");
  current->add_option("--state", current_state, "Coefficient file")->required();
  current->add_option("--samples", current_samples, "Number of samples (endpoints included)");
  current->add_option("--t-start", current_t0, "Start time (default 0)");
  current->add_option("--t-end", current_t1, "End time (default: the state's alpha)");
  current->add_option("--out", current_out, "CSV path (default stdout)");

  // transfer
  std::string transfer_state;
  std::int64_t transfer_panels = 0;
  auto* transfer = app.add_subcommand("transfer", "Probability transfer over [-alpha, alpha], JSON output");
  transfer->add_option("--state", transfer_state, "Coefficient file")->required();
  transfer->add_option("--panels", transfer_panels, "Integrate the decomposition by Simpson with this many panels (default: closed form)");

  // minimize
  int min_n = 0;
  double min_alpha = kOptimalAlpha, min_tol = 1e-12;
  std::string min_out;
  auto* minimize = app.add_subcommand("minimize", "Smallest eigenpair of the transfer kernel");
  minimize->add_option("--n", min_n, "Highest angular momentum N")->required();
  minimize->add_option("--alpha", min_alpha, "Window half-width");
  minimize->add_option("--tol", min_tol, "Relative residual tolerance (>= 1e-12)");
  minimize->add_option("--out", min_out, "Write the minimizing state here");

  // scan-alpha
  int scan_n = 0, scan_steps = 71;
  double scan_lo = 0.8, scan_hi = 1.5, scan_tol = 1e-12;
  auto* scan = app.add_subcommand("scan-alpha", "p_min over an alpha grid, CSV output");
  scan->add_option("--n", scan_n, "Highest angular momentum N")->required();
  scan->add_option("--alpha-min", scan_lo, "First grid value");
  scan->add_option("--alpha-max", scan_hi, "Last grid value");
  scan->add_option("--steps", scan_steps, "Number of grid points (>= 3)");
  scan->add_option("--tol", scan_tol, "Eigensolver tolerance");

  // guess
  int guess_n = 0;
  double guess_alpha = kOptimalAlpha;
  std::string guess_out, guess_compare;
  auto* guess = app.add_subcommand("guess", "Analytic guess state");
  guess->add_option("--n", guess_n, "Highest angular momentum N")->required();
  guess->add_option("--alpha", guess_alpha, "Window half-width");
  guess->add_option("--out", guess_out, "Write the guess state here");
  guess->add_option("--compare", guess_compare, "Print the fidelity against this state file");

  // higuchi
  std::string hig_input, hig_table;
  Eigen::Index hig_samples = Eigen::Index{1} << 18;
  int hig_kmax = 8192;
  auto* higuchi = app.add_subcommand("higuchi", "Higuchi dimension of a sampled current");
  higuchi->add_option("--input", hig_input, "CSV (t,j) or coefficient file")->required();
  higuchi->add_option("--samples", hig_samples, "Samples on [0, alpha] when the input is a state");
  higuchi->add_option("--k-max", hig_kmax, "Largest stride");
  higuchi->add_option("--table", hig_table, "Write the (log2 k, log2 L_k) table as CSV");

  // spectrum
  std::string spec_state, spec_weight = "none";
  auto* spectrum = app.add_subcommand("spectrum", "Power-spectrum slope of h0 (none) or h1 (m)");
  spectrum->add_option("--state", spec_state, "Coefficient file")->required();
  spectrum->add_option("--weight", spec_weight, "Coefficient weight")->check(CLI::IsMember({"none", "m"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (threads < 0) {
    if (const char* env = std::getenv("RINGFLOW_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) set_max_threads(static_cast<unsigned>(threads));

  const auto started = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.parameters["threads"] = threads;
  std::ostringstream data;

  try {
    if (bounds->parsed()) {
      manifest.subcommand = "bounds";
      manifest.parameters["n"] = bounds_n;
      const SpectralPair sp = closed_form_spectrum(bounds_n);
      data << json{{"n", bounds_n},
                   {"lambda_minus", sp.lambda_minus},
                   {"lambda_plus", sp.lambda_plus},
                   {"a_plus", sp.a_plus},
                   {"a_minus", sp.a_minus},
                   {"A_plus", sp.A_plus},
                   {"A_minus", sp.A_minus}}
                  .dump()
           << '\n';
    } else if (current->parsed()) {
      manifest.subcommand = "current";
      const CoefficientVector state = load_input_state(current_state, manifest);
      const double t0 = current_t0.value_or(0.0);
      const double t1 = current_t1.value_or(state.alpha());
      manifest.parameters = {{"state", current_state}, {"samples", current_samples}, {"t_start", t0},
                             {"t_end", t1},            {"threads", threads}};
      write_series_csv(data, sample_current(state, t0, t1, current_samples));
      if (!current_out.empty()) {
        write_file(current_out, data.str());
        manifest.output(current_out, data.str());
        data.str("");
      }
    } else if (transfer->parsed()) {
      manifest.subcommand = "transfer";
      const CoefficientVector state = load_input_state(transfer_state, manifest);
      manifest.parameters = {{"state", transfer_state}, {"panels", transfer_panels}, {"threads", threads}};
      const TransferBreakdown parts =
          transfer_panels > 0 ? transfer_decomposed(state, transfer_panels) : transfer_decomposed_exact(state);
      data << json{{"total", transfer_double_sum(state)},
                   {"plus", parts.plus_part},
                   {"minus", parts.minus_part},
                   {"alpha", state.alpha()}}
                  .dump()
           << '\n';
    } else if (minimize->parsed()) {
      manifest.subcommand = "minimize";
      manifest.parameters = {{"n", min_n}, {"alpha", min_alpha}, {"tol", min_tol}, {"out", min_out},
                             {"threads", threads}};
      const MinimizationResult r = minimize_transfer(min_n, min_alpha, min_tol);
      json head = json::array();
      for (Eigen::Index m = 0; m < std::min<Eigen::Index>(3, r.state.coeffs().size()); ++m) head.push_back(r.state[m]);
      data << json{{"n", min_n},
                   {"alpha", min_alpha},
                   {"p_min", r.p_min},
                   {"iterations", r.iterations},
                   {"residual_norm", r.residual_norm},
                   {"next_eigenvalue", r.next_eigenvalue},
                   {"degenerate", r.degenerate},
                   {"matrix_free", r.matrix_free},
                   {"leading_coefficients", head}}
                  .dump()
           << '\n';
      if (!min_out.empty()) save_output_state(min_out, r.state, manifest);
    } else if (scan->parsed()) {
      manifest.subcommand = "scan-alpha";
      manifest.parameters = {{"n", scan_n},         {"alpha_min", scan_lo}, {"alpha_max", scan_hi},
                             {"steps", scan_steps}, {"tol", scan_tol},      {"threads", threads}};
      if (scan_steps < 3 || !(scan_lo < scan_hi))
        throw Error(ErrorKind::InvalidArgument, "need --steps >= 3 and --alpha-min < --alpha-max");
      std::vector<double> grid(static_cast<std::size_t>(scan_steps));
      for (int i = 0; i < scan_steps; ++i)
        grid[static_cast<std::size_t>(i)] = scan_lo + (scan_hi - scan_lo) * i / (scan_steps - 1);
      grid.back() = scan_hi;
      const ScanResult result = scan_alpha(scan_n, grid, scan_tol);
      data << std::setprecision(17) << "alpha,p_min\n";
      for (const ScanPoint& p : result.points) data << p.alpha << ',' << p.p_min << '\n';
      for (const ScanMinimum& m : result.local_minima)
        data << "# local_minimum alpha=" << m.refined_alpha << " p_min=" << m.refined_p_min << '\n';
      if (result.global_minimum)
        data << "# global_minimum alpha=" << result.global_minimum->refined_alpha
             << " p_min=" << result.global_minimum->refined_p_min << '\n';
      for (const ScanPoint& p : result.points)
        if (!p.ok) data << "# failed alpha=" << p.alpha << ": " << p.error << '\n';
    } else if (guess->parsed()) {
      manifest.subcommand = "guess";
      manifest.parameters = {{"n", guess_n},         {"alpha", guess_alpha},     {"out", guess_out},
                             {"compare", guess_compare}, {"threads", threads}};
      const GuessState g = build_guess(guess_n, guess_alpha);
      json report = {{"n", guess_n},
                     {"alpha", guess_alpha},
                     {"normalization", g.normalization},
                     {"transfer", transfer_double_sum(g.state)}};
      if (!guess_compare.empty()) report["fidelity"] = fidelity(g.state, load_input_state(guess_compare, manifest));
      data << report.dump() << '\n';
      if (!guess_out.empty()) save_output_state(guess_out, g.state, manifest);
    } else if (higuchi->parsed()) {
      manifest.subcommand = "higuchi";
      manifest.parameters = {{"input", hig_input}, {"samples", hig_samples}, {"k_max", hig_kmax},
                             {"table", hig_table}, {"threads", threads}};
      const std::string text = read_file(hig_input);
      manifest.inputs[hig_input] = hex_digest(text);
      std::vector<double> series;
      if (looks_like_state_file(text)) {
        std::istringstream in(text);
        const CoefficientVector state = read_state(in);
        const TimeSeries ts = sample_current(state, 0.0, state.alpha(), hig_samples);
        series.assign(ts.samples.data(), ts.samples.data() + ts.count());
      } else {
        series = read_series_csv(text);
      }
      HiguchiConfig config;
      config.k_values = default_strides(hig_kmax);
      const FitReport report = higuchi_dimension(series, config);
      json j = fit_to_json(report, false);
      j["samples"] = series.size();
      j["strides"] = config.k_values;
      data << j.dump() << '\n';
      if (!hig_table.empty()) {
        std::ostringstream table;
        table << std::setprecision(17) << "log2_k,log2_L\n";
        for (const auto& [x, y] : report.points) table << x << ',' << y << '\n';
        write_file(hig_table, table.str());
        manifest.output(hig_table, table.str());
      }
    } else if (spectrum->parsed()) {
      manifest.subcommand = "spectrum";
      manifest.parameters = {{"state", spec_state}, {"weight", spec_weight}, {"threads", threads}};
      const CoefficientVector state = load_input_state(spec_state, manifest);
      const FitReport report =
          spectrum_slope(state, spec_weight == "m" ? SpectrumWeight::M : SpectrumWeight::None);
      data << fit_to_json(report, true).dump() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string payload = data.str();
  out << payload;
  if (!payload.empty()) manifest.output("stdout", payload);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const std::string manifest_text = manifest.to_json(seconds).dump() + '\n';
  try {
    if (manifest_path.empty())
      err << manifest_text;
    else
      write_file(manifest_path, manifest_text);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ringflow::cli
