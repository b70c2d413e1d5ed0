#pragma once

// Rerouting of polygonal paths around open obstacles in finite-dimensional
// normed spaces: geometry kernel, crossing enumeration, entry/exit
// scheduling, collar routing, route assembly and independent verification.

#include "collar.hpp"
#include "errors.hpp"
#include "geom.hpp"
#include "instances.hpp"
#include "obstacles.hpp"
#include "reroute.hpp"
#include "schedule.hpp"
#include "svg.hpp"
#include "verify.hpp"
