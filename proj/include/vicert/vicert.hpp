#pragma once

// Umbrella header: rank-1 observable sets in R^3, orthogonality diagrams,
// admissibility propagation, localization gadgets, certificates, checking.

#include "checker.hpp"
#include "dot.hpp"
#include "json_io.hpp"
