#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gidp {

struct BinRange {
  bool automatic = true;
  double lo = 0.0;
  double hi = 0.0;

  static BinRange automatic_range() { return {}; }
  static BinRange fixed(double lo, double hi) { return BinRange{false, lo, hi}; }
};

// Survivor histogram. densities = counts / (n_survivors * width), so with an
// explicit range the densities integrate to the in-range survivor fraction.
struct HistogramSeries {
  std::vector<double> edges;
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t n_survivors = 0;
  std::size_t n_outside = 0;

  std::size_t n_bins() const noexcept { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  std::vector<double> centers() const;
};

// Bins are [e_i, e_{i+1}) with the last bin closed. Automatic ranges span
// [min, max] of the survivors (widened by 1/2 on each side when they coincide).
HistogramSeries histogram(std::span<const double> values, std::span<const std::uint8_t> alive,
                          std::size_t n_bins, BinRange range = {});
HistogramSeries histogram(std::span<const double> values, std::size_t n_bins, BinRange range = {});

double r_squared(std::span<const double> empirical, std::span<const double> model);
double mae(std::span<const double> empirical, std::span<const double> model);

// Columns bin_center,density,model,abs_error.
std::string histogram_csv(const HistogramSeries& hist, std::span<const double> model);

}  // namespace gidp
