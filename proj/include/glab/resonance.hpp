#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "glab/models.hpp"

namespace glab {

// Maximal run of adjacent resonant sites, inclusive on both ends.
struct ResonantBlock {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
};

struct ResonanceReport {
  std::vector<bool> resonant;
  std::vector<ResonantBlock> blocks;
  double epsilon = 0.0;
  double empirical_density = 0.0;

  Index count() const;
};

/// The single-flip cutoff gamma^(1/20).
double default_resonance_cutoff(double gamma);

/// True when |h + J_right s' + J_left s| < epsilon / 2 for some s, s' = +-1,
/// i.e. |Delta E_i| < epsilon for some choice of the neighbouring spins.
bool single_flip_resonant(double h, double j_left, double j_right, double epsilon);

/// Flags every site with a single-flip resonance and groups the flags into
/// blocks. `epsilon` defaults to gamma^(1/20) of the realization.
ResonanceReport detect_resonant_sites(const ChainRealization& r,
                                      std::optional<double> epsilon = std::nullopt);

/// Probability that a chain site with h ~ U(h_bounds) and both bonds
/// ~ U(J_bounds) is single-flip resonant. The field integral is exact (a union
/// of four intervals); the two bond integrals use composite Gauss-Legendre.
double resonance_probability(const Interval& h_bounds, const Interval& J_bounds, double epsilon);

/// Blocks of adjacent `true` entries.
std::vector<ResonantBlock> resonant_blocks(const std::vector<bool>& flags);

// Tunneling amplitude over level spacing; resonant when >= 1.
double resonance_ratio(double matrix_element, double level_spacing);

/// log2 of gamma^r 2^(L^d / 2), the bubble-transition ratio at distance r
/// from a bubble of diameter L in d dimensions.
double log2_bubble_resonance_ratio(double gamma, double r, double L, int d);
double bubble_resonance_ratio(double gamma, double r, double L, int d);

/// r(L) = L^d / (2 |log2 gamma|): distance at which the bubble ratio reaches 1.
double buffer_radius(double gamma, double L, int d);

/// log2 of gamma^(r/2) 2^((r/2)^d / 2).
double log2_bootstrap_ratio(double gamma, double r, int d);
double bootstrap_ratio(double gamma, double r, int d);

/// (J1 / W_Gf) sqrt(d_Gf).
double first_spin_criterion(double J1, double W_Gf, double d_Gf);

/// l = -log(J0 sqrt(d_Gf) / W_Gf) / log(sqrt(2) alpha), clamped below at 0.
/// Empty when alpha >= sqrt(1/2): the bath never runs out of strength.
std::optional<double> predicted_buffer_length(double J0, double alpha, double W_Gf, double d_Gf);

enum class Regime { LocalizedBuffer, Critical, Delocalized };

inline constexpr double kCriticalAlpha = 0.70710678118654752440;

Regime classify_regime(double alpha);
std::string_view to_string(Regime regime);

}  // namespace glab
