#pragma once

// Everything except the JSON/SVG layer (capforge/io/*), which needs nlohmann.

#include "capforge/error.hpp"
#include "capforge/geometry.hpp"
#include "capforge/spatial.hpp"
#include "capforge/measure.hpp"
#include "capforge/cap.hpp"
#include "capforge/naive_cap.hpp"
#include "capforge/interior.hpp"
#include "capforge/polynomial.hpp"
#include "capforge/exterior_map.hpp"
#include "capforge/julia.hpp"
#include "capforge/harmonic_mc.hpp"
#include "capforge/conformal_angle.hpp"
#include "capforge/curvature_lab.hpp"
#include "capforge/fixtures.hpp"
