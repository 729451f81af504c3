#include "glab/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace glab {
namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
}

void require_geometry(double L, int d) {
  if (!(L >= 1.0) || d < 1) throw InvalidArgument("need L >= 1 and d >= 1");
}

}  // namespace

Index ResonanceReport::count() const {
  return static_cast<Index>(std::count(resonant.begin(), resonant.end(), true));
}

double default_resonance_cutoff(double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("default cutoff needs gamma > 0");
  return std::pow(gamma, 1.0 / 20.0);
}

bool single_flip_resonant(double h, double j_left, double j_right, double epsilon) {
  for (const double sl : {-1.0, 1.0}) {
    for (const double sr : {-1.0, 1.0}) {
      if (2.0 * std::abs(h + j_right * sr + j_left * sl) < epsilon) return true;
    }
  }
  return false;
}

double resonance_probability(const Interval& h_bounds, const Interval& J_bounds, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("resonance cutoff must be positive");
  if (!(h_bounds.width() > 0.0) || !(J_bounds.width() > 0.0)) {
    throw InvalidArgument("resonance_probability: intervals must have positive width");
  }
  // 4-point Gauss-Legendre nodes and weights on [-1, 1].
  static constexpr std::array<double, 4> node{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                              0.8611363115940526};
  static constexpr std::array<double, 4> weight{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                0.3478548451374538};
  constexpr int panels = 256;
  const double half = 0.5 * epsilon;

  // Fraction of h_bounds within epsilon/2 of one of -(jl s + jr s').
  const auto field_measure = [&](double jl, double jr) {
    std::array<std::pair<double, double>, 4> iv;
    int k = 0;
    for (const double sl : {-1.0, 1.0}) {
      for (const double sr : {-1.0, 1.0}) {
        const double c = -(jl * sl + jr * sr);
        iv[static_cast<std::size_t>(k++)] = {std::max(c - half, h_bounds.lo), std::min(c + half, h_bounds.hi)};
      }
    }
    std::sort(iv.begin(), iv.end());
    double covered = 0.0;
    double reach = h_bounds.lo;
    for (const auto& [lo, hi] : iv) {
      const double start = std::max(lo, reach);
      if (hi > start) {
        covered += hi - start;
        reach = hi;
      }
    }
    return covered / h_bounds.width();
  };

  const double step = J_bounds.width() / panels;
  std::vector<double> x, w;
  for (int p = 0; p < panels; ++p) {
    const double mid = J_bounds.lo + (p + 0.5) * step;
    for (std::size_t q = 0; q < node.size(); ++q) {
      x.push_back(mid + 0.5 * step * node[q]);
      w.push_back(0.5 * step * weight[q] / J_bounds.width());
    }
  }
  double total = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double inner = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b) inner += w[b] * field_measure(x[a], x[b]);
    total += w[a] * inner;
  }
  return total;
}

std::vector<ResonantBlock> resonant_blocks(const std::vector<bool>& flags) {
  std::vector<ResonantBlock> blocks;
  const int n = static_cast<int>(flags.size());
  for (int i = 0; i < n; ++i) {
    if (!flags[static_cast<std::size_t>(i)]) continue;
    if (!blocks.empty() && blocks.back().last == i - 1) {
      blocks.back().last = i;
    } else {
      blocks.push_back({i, i});
    }
  }
  return blocks;
}

ResonanceReport detect_resonant_sites(const ChainRealization& r, std::optional<double> epsilon) {
  r.validate();
  const double eps = epsilon ? *epsilon : default_resonance_cutoff(r.params.gamma);
  if (!(eps > 0.0)) throw InvalidArgument("resonance cutoff must be positive");

  ResonanceReport report;
  report.epsilon = eps;
  const int n = r.n_sites();
  report.resonant.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    report.resonant[static_cast<std::size_t>(i)] =
        single_flip_resonant(r.h[static_cast<std::size_t>(i)], r.bond(i - 1), r.bond(i), eps);
  }
  report.blocks = resonant_blocks(report.resonant);
  report.empirical_density = static_cast<double>(report.count()) / static_cast<double>(n);
  return report;
}

double resonance_ratio(double matrix_element, double level_spacing) {
  if (!(level_spacing > 0.0)) throw InvalidArgument("level spacing must be positive");
  return matrix_element / level_spacing;
}

double log2_bubble_resonance_ratio(double gamma, double r, double L, int d) {
  require_gamma(gamma);
  require_geometry(L, d);
  if (!(r >= 0.0)) throw InvalidArgument("distance must be >= 0");
  return r * std::log2(gamma) + 0.5 * std::pow(L, d);
}

double bubble_resonance_ratio(double gamma, double r, double L, int d) {
  return std::exp2(log2_bubble_resonance_ratio(gamma, r, L, d));
}

double buffer_radius(double gamma, double L, int d) {
  require_gamma(gamma);
  require_geometry(L, d);
  return std::pow(L, d) / (2.0 * std::abs(std::log2(gamma)));
}

double log2_bootstrap_ratio(double gamma, double r, int d) {
  require_gamma(gamma);
  if (!(r >= 0.0) || d < 1) throw InvalidArgument("need r >= 0 and d >= 1");
  const double half = 0.5 * r;
  return half * std::log2(gamma) + 0.5 * std::pow(half, d);
}

double bootstrap_ratio(double gamma, double r, int d) {
  return std::exp2(log2_bootstrap_ratio(gamma, r, d));
}

double first_spin_criterion(double J1, double W_Gf, double d_Gf) {
  if (!(W_Gf > 0.0) || !(d_Gf >= 1.0)) throw InvalidArgument("need W_Gf > 0 and d_Gf >= 1");
  return J1 / W_Gf * std::sqrt(d_Gf);
}

std::optional<double> predicted_buffer_length(double J0, double alpha, double W_Gf, double d_Gf) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(J0 > 0.0)) throw InvalidArgument("J0 must be positive");
  const double strength = first_spin_criterion(J0, W_Gf, d_Gf);
  if (alpha >= kCriticalAlpha) return std::nullopt;
  const double length = -std::log(strength) / std::log(std::sqrt(2.0) * alpha);
  return std::max(0.0, length);
}

Regime classify_regime(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (alpha < kCriticalAlpha) return Regime::LocalizedBuffer;
  if (alpha > kCriticalAlpha) return Regime::Delocalized;
  return Regime::Critical;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::LocalizedBuffer:
      return "localized-buffer";
    case Regime::Critical:
      return "critical";
    case Regime::Delocalized:
      return "delocalized";
  }
  return "unknown";
}

}  // namespace glab
