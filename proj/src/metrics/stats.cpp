#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "arena/metrics/metrics.hpp"

namespace arena::metrics {

double t_critical(double level, std::size_t df) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  if (df == 0) throw TooFewSamples("t quantile needs at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);
}

IntervalEstimate confidence_interval(std::span<const double> samples, double level) {
  const std::size_t n = samples.size();
  if (n < 2) throw TooFewSamples("confidence interval needs at least 2 samples");
  // Constant input has exactly zero spread; summing would leave rounding dust.
  if (std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples[0]; })) {
    return {samples[0], 0.0, n, level};
  }
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, t_critical(level, n - 1) * sd / std::sqrt(static_cast<double>(n)), n, level};
}

std::vector<PlotPoint> plot_series(std::string metric, std::span<const double> values,
                                   std::size_t window, double level) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  std::vector<PlotPoint> out;
  for (std::size_t start = 0; start < values.size(); start += window) {
    const auto chunk = values.subspan(start, std::min(window, values.size() - start));
    PlotPoint p;
    p.step = out.size() + 1;
    p.metric = metric;
    p.n = chunk.size();
    if (chunk.size() >= 2) {
      const auto ci = confidence_interval(chunk, level);
      p.mean = ci.mean;
      p.margin = ci.margin;
    } else {
      p.mean = chunk[0];
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace arena::metrics
