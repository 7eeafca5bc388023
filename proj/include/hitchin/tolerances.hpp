#pragma once

namespace hitchin {

/// Numeric thresholds shared by all modules. Every field can be overridden
/// from a run configuration.
struct Tolerances {
  double incidence = 1e-9;      // |<covector, point>| and span-membership residuals
  double eigen = 1e-8;          // ||Av - lambda v|| for accepted eigenpairs
  double gap = 1e-6;            // relative modulus gap between consecutive eigenvalues
  double general_position = 1e-8;  // normalized 3x3 determinants of frame triples
  double det = 1e-10;           // |det - 1| for SL(n) inputs
  double angle_dedup = 1e-8;    // boundary points closer than this are identified
  double relator = 1e-8;        // surface relator residual accepted by SurfaceRep
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace hitchin
