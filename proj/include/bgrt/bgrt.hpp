#pragma once

// Umbrella header for the bilinear generalized Radon transform laboratory.

#include "bgrt/acceptance.hpp"
#include "bgrt/conditions.hpp"
#include "bgrt/defining_functions.hpp"
#include "bgrt/field_io.hpp"
#include "bgrt/geometry.hpp"
#include "bgrt/grid.hpp"
#include "bgrt/linalg.hpp"
#include "bgrt/parallel.hpp"
#include "bgrt/point_config.hpp"
#include "bgrt/polytope.hpp"
#include "bgrt/quadrature.hpp"
#include "bgrt/rational.hpp"
#include "bgrt/sharpness.hpp"
#include "bgrt/thickened.hpp"
#include "bgrt/transforms.hpp"
