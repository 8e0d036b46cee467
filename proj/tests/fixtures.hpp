#pragma once

// Shared test fixtures: branch configurations with comfortable separation so
// that coarse grids resolve them, plus a squeezed configuration for the
// degeneration-style tests.

#include <vector>

#include "arasurf/mesh.hpp"

namespace arasurf::fixtures {

// genus 2, six branch points roughly on the unit circle (mild asymmetry
// avoids snapping and cut-path ties)
inline std::vector<cplx> genus2_branch() {
  return {std::polar(1.00, 0.00), std::polar(0.95, 1.05), std::polar(1.10, 2.00),
          std::polar(0.90, 3.20), std::polar(1.05, 4.10), std::polar(0.98, 5.30)};
}

// genus 3, eight branch points
inline std::vector<cplx> genus3_branch() {
  return {std::polar(1.00, 0.10), std::polar(0.95, 0.90), std::polar(1.05, 1.70),
          std::polar(0.90, 2.50), std::polar(1.10, 3.30), std::polar(0.95, 4.10),
          std::polar(1.00, 4.90), std::polar(1.05, 5.70)};
}

}  // namespace arasurf::fixtures
