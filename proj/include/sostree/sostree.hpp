#ifndef SOSTREE_SOSTREE_HPP
#define SOSTREE_SOSTREE_HPP

// Umbrella header.

#include "sostree/errors.hpp"
#include "sostree/grid.hpp"
#include "sostree/lattice.hpp"
#include "sostree/params.hpp"
#include "sostree/period2.hpp"
#include "sostree/phase.hpp"
#include "sostree/polynomial.hpp"
#include "sostree/rational.hpp"
#include "sostree/recursion.hpp"
#include "sostree/scan.hpp"
#include "sostree/version.hpp"

#endif
