#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tsclust/series.hpp"

namespace fixture {

struct Labelled {
  std::vector<tsclust::TimeSeries> x;
  std::vector<int> y;
};

/// `per_class` noisy sines per class; class c has c+1 periods over the series.
inline Labelled noisy_sines(std::uint64_t seed, std::size_t per_class, std::size_t classes = 2,
                            std::size_t m = 40, double noise = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> eps(0.0, noise);
  std::uniform_real_distribution<double> phase(-0.3, 0.3);
  Labelled out;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const double ph = phase(rng);
      std::vector<double> v(m);
      for (std::size_t t = 0; t < m; ++t)
        v[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(c + 1) *
                            static_cast<double>(t) / static_cast<double>(m) +
                        ph) +
               eps(rng);
      out.x.emplace_back(std::move(v));
      out.y.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace fixture
