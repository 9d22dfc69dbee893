#include "gidp/stats_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gidp/errors.hpp"
#include "gidp/io.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "stats_metrics";

void check_lengths(std::span<const double> a, std::span<const double> b, std::size_t min_len) {
  if (a.size() != b.size()) throw DomainError(kModule, "metric arrays differ in length");
  if (a.size() < min_len) throw DomainError(kModule, "metric arrays are too short");
}

}  // namespace

std::vector<double> HistogramSeries::centers() const {
  std::vector<double> c(n_bins());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (edges[i] + edges[i + 1]);
  return c;
}

HistogramSeries histogram(std::span<const double> values, std::span<const std::uint8_t> alive,
                          std::size_t n_bins, BinRange range) {
  if (values.size() != alive.size()) throw DomainError(kModule, "values and alive differ in length");
  if (n_bins < 2) throw DomainError(kModule, "at least two bins are required");
  HistogramSeries h;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!alive[i]) continue;
    if (!std::isfinite(values[i])) throw DomainError(kModule, "histogram input is not finite");
    ++h.n_survivors;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  if (h.n_survivors == 0) throw DomainError(kModule, "no surviving trajectories to histogram");
  if (range.automatic) {
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  } else {
    lo = range.lo;
    hi = range.hi;
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw DomainError(kModule, "histogram range must satisfy lo < hi");
    }
  }
  const double step = (hi - lo) / static_cast<double>(n_bins);
  h.edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) h.edges[i] = lo + step * static_cast<double>(i);
  h.edges[n_bins] = hi;
  for (std::size_t i = 1; i <= n_bins; ++i) {
    if (!(h.edges[i] > h.edges[i - 1])) throw DomainError(kModule, "bin edges collapse");
  }
  h.counts.assign(n_bins, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!alive[i]) continue;
    const double v = values[i];
    if (v < lo || v > hi) {
      ++h.n_outside;
      continue;
    }
    std::size_t b = v == hi ? n_bins - 1
                            : std::min(n_bins - 1, static_cast<std::size_t>((v - lo) / step));
    // Align with the stored edges where division rounding disagrees.
    while (b > 0 && v < h.edges[b]) --b;
    while (b + 1 < n_bins && v >= h.edges[b + 1]) ++b;
    ++h.counts[b];
  }
  h.densities.resize(n_bins);
  const double n = static_cast<double>(h.n_survivors);
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.densities[i] = static_cast<double>(h.counts[i]) / (n * h.width(i));
  }
  return h;
}

HistogramSeries histogram(std::span<const double> values, std::size_t n_bins, BinRange range) {
  const std::vector<std::uint8_t> alive(values.size(), 1);
  return histogram(values, alive, n_bins, range);
}

double r_squared(std::span<const double> empirical, std::span<const double> model) {
  check_lengths(empirical, model, 2);
  double mean = 0.0;
  for (const double e : empirical) mean += e;
  mean /= static_cast<double>(empirical.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    ss_res += (empirical[i] - model[i]) * (empirical[i] - model[i]);
    ss_tot += (empirical[i] - mean) * (empirical[i] - mean);
  }
  if (!(ss_tot > 0.0)) {
    throw UndefinedMetricError(kModule, "R^2 is undefined for a constant empirical series");
  }
  return 1.0 - ss_res / ss_tot;
}

double mae(std::span<const double> empirical, std::span<const double> model) {
  check_lengths(empirical, model, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < empirical.size(); ++i) total += std::abs(empirical[i] - model[i]);
  return total / static_cast<double>(empirical.size());
}

std::string histogram_csv(const HistogramSeries& hist, std::span<const double> model) {
  if (model.size() != hist.n_bins()) throw DomainError(kModule, "model curve length mismatch");
  std::string out = "bin_center,density,model,abs_error\n";
  const auto centers = hist.centers();
  for (std::size_t i = 0; i < hist.n_bins(); ++i) {
    out += io::format_double(centers[i]);
    out += ',';
    out += io::format_double(hist.densities[i]);
    out += ',';
    out += io::format_double(model[i]);
    out += ',';
    out += io::format_double(std::abs(hist.densities[i] - model[i]));
    out += '\n';
  }
  return out;
}

}  // namespace gidp
