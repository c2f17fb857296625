#pragma once

#include <string>
#include <vector>

#include "regfir/types.hpp"

namespace regfir {

enum class BandKind { LowPass, HighPass, BandPass, BandStop, MultiBandStop };

std::string to_string(BandKind k);
BandKind band_kind_from_string(const std::string& name);

/// Frequency band in cycles/sample.  Edges are strictly increasing and lie
/// strictly inside (0, 0.5).  LowPass/HighPass take one edge,
/// BandPass/BandStop two, MultiBandStop an even count >= 2 (stop intervals
/// [e0,e1], [e2,e3], ...).
struct BandSpec {
  BandKind kind = BandKind::BandStop;
  std::vector<double> edges;
};

void validate(const BandSpec& band);

/// Linear-phase FIR design: truncated ideal response, Hamming window,
/// gain normalised to 1 at the centre of the first pass band (at DC when the
/// first pass band touches 0, at Nyquist for a high-pass).
struct FirDesign {
  std::vector<double> taps;  // order + 1 coefficients
  BandSpec band;
  int order = 0;
};

/// Designs the windowed FIR filter.  Kinds whose ideal response reaches
/// Nyquist (HighPass, BandStop, MultiBandStop) need an even order.
FirDesign design_fir_windowed(int order, const BandSpec& band);

/// Magnitude response of the FIR taps in dB at one frequency in [0, 0.5].
double fir_response_db(const FirDesign& fir, double freq);

/// n x n upper-banded penalty matrix: row i (1-based) carries the FIR taps
/// starting at column i, scaled by alpha^(-i/2) and truncated at column n.
/// Requires fir order < n and alpha in (0, 1].
FilterMatrix regularisation_filter(const FirDesign& fir, int n, double alpha);

}  // namespace regfir
