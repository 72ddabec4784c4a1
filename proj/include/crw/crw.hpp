#pragma once

#include "crw/error.hpp"
#include "crw/group.hpp"
#include "crw/coxeter.hpp"
#include "crw/ctmc.hpp"
#include "crw/rng.hpp"
#include "crw/parallel.hpp"
#include "crw/sim.hpp"
#include "crw/speed.hpp"
#include "crw/ray.hpp"
#include "crw/search.hpp"
#include "crw/checks.hpp"
#include "crw/config.hpp"
