#include "ringflow/state.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

constexpr double kLoadNormTolerance = 1e-9;

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "alpha must be finite and positive");
}

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t size) noexcept {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

CoefficientVector CoefficientVector::from_normalized(Eigen::VectorXd coeffs, double alpha,
                                                     double tolerance) {
  if (coeffs.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 coefficients");
  require_alpha(alpha);
  if (!coeffs.allFinite()) throw Error(ErrorKind::InvalidValue, "non-finite coefficient");
  const double norm2 = coeffs.squaredNorm();
  if (std::abs(norm2 - 1.0) > tolerance)
    throw Error(ErrorKind::InvalidState,
                "sum of squared coefficients is " + format_double(norm2) + ", expected 1");
  return CoefficientVector(std::move(coeffs), alpha);
}

CoefficientVector CoefficientVector::with_alpha(double alpha) const {
  require_alpha(alpha);
  return CoefficientVector(coeffs_, alpha);
}

std::uint64_t CoefficientVector::digest() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int64_t n = n_max();
  h = fnv1a(h, &n, sizeof n);
  h = fnv1a(h, &alpha_, sizeof alpha_);
  return fnv1a(h, coeffs_.data(), sizeof(double) * static_cast<std::size_t>(coeffs_.size()));
}

void DimensionalParams::validate() const {
  for (double v : {mass, radius, hbar})
    if (!std::isfinite(v) || v <= 0.0)
      throw Error(ErrorKind::InvalidArgument, "mass, radius and hbar must be positive");
}

double DimensionalParams::time_unit() const {
  validate();
  return 2.0 * mass * radius * radius / hbar;
}

CoefficientVector normalize(const Eigen::VectorXd& coeffs, double alpha) {
  if (coeffs.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 coefficients");
  require_alpha(alpha);
  if (!coeffs.allFinite()) throw Error(ErrorKind::InvalidValue, "non-finite coefficient");
  const double norm = coeffs.norm();
  if (norm == 0.0) throw Error(ErrorKind::ZeroVector, "all coefficients are zero");

  Eigen::VectorXd out = coeffs / norm;
  for (Eigen::Index m = 0; m < out.size(); ++m) {
    if (out[m] != 0.0) {
      if (out[m] < 0.0) out = -out;
      break;
    }
  }
  return CoefficientVector::from_normalized(std::move(out), alpha, 1e-12);
}

CoefficientVector normalize(std::span<const double> coeffs, double alpha) {
  return normalize(Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size())).eval(),
                   alpha);
}

CoefficientVector basis_state(int n_max, int m, double alpha) {
  if (n_max < 1 || m < 0 || m > n_max)
    throw Error(ErrorKind::InvalidArgument, "basis state index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
  c[m] = 1.0;
  return CoefficientVector::from_normalized(std::move(c), alpha);
}

double to_dimensionless_time(double seconds, const DimensionalParams& params) {
  return seconds / params.time_unit();
}

double to_dimensional_time(double t, const DimensionalParams& params) { return t * params.time_unit(); }

double to_dimensional_current(double j, const DimensionalParams& params) { return j / params.time_unit(); }

double mean_energy(const CoefficientVector& state, const DimensionalParams& params) {
  params.validate();
  const Eigen::VectorXd& c = state.coeffs();
  double sum = 0.0;
  for (Eigen::Index m = 1; m < c.size(); ++m) {
    const double mc = static_cast<double>(m) * c[m];
    sum += mc * mc;
  }
  return params.hbar * params.hbar / (2.0 * params.mass * params.radius * params.radius) * sum;
}

void write_state(std::ostream& out, const CoefficientVector& state) {
  out << "N=" << state.n_max() << " alpha=" << format_double(state.alpha()) << '\n';
  for (Eigen::Index m = 0; m < state.coeffs().size(); ++m) out << format_double(state[m]) << '\n';
}

CoefficientVector read_state(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const std::string_view header = trim(line);
  if (header.empty()) throw ParseError(line_no, "missing header");

  const auto space = header.find(' ');
  if (header.substr(0, 2) != "N=" || space == std::string_view::npos)
    throw ParseError(line_no, "expected header `N=<int> alpha=<value>`");
  int n_max = 0;
  if (!parse_number(header.substr(2, space - 2), n_max) || n_max < 1)
    throw ParseError(line_no, "invalid N in header");
  const std::string_view alpha_field = trim(header.substr(space + 1));
  double alpha = 0.0;
  if (alpha_field.substr(0, 6) != "alpha=" || !parse_number(alpha_field.substr(6), alpha))
    throw ParseError(line_no, "invalid alpha in header");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw ParseError(line_no, "alpha must be positive");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_max) + 1);
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    if (!parse_number(field, v)) throw ParseError(line_no, "invalid coefficient `" + std::string(field) + "`");
    if (!std::isfinite(v)) throw ParseError(line_no, "non-finite coefficient");
    values.push_back(v);
    if (values.size() > static_cast<std::size_t>(n_max) + 1)
      throw ParseError(line_no, "more coefficients than N+1 = " + std::to_string(n_max + 1));
  }
  if (values.size() != static_cast<std::size_t>(n_max) + 1)
    throw ParseError(line_no, "expected " + std::to_string(n_max + 1) + " coefficients, found " +
                                  std::to_string(values.size()));

  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return CoefficientVector::from_normalized(std::move(c), alpha, kLoadNormTolerance);
}

void save_state(const std::filesystem::path& path, const CoefficientVector& state) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_state(out, state);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

CoefficientVector load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_state(in);
}

}  // namespace ringflow
