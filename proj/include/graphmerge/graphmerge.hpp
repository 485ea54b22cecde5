#pragma once

#include "graphmerge/bounds.hpp"
#include "graphmerge/errors.hpp"
#include "graphmerge/gf2.hpp"
#include "graphmerge/ghz_verify.hpp"
#include "graphmerge/graphs.hpp"
#include "graphmerge/merge.hpp"
#include "graphmerge/resources.hpp"
#include "graphmerge/rng.hpp"
#include "graphmerge/sim/circuit.hpp"
