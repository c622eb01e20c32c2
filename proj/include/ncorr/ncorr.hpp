// ncorr.hpp: umbrella header for the numerics (no I/O).

#pragma once

#include "ncorr/errors.hpp"
#include "ncorr/multi_index.hpp"
#include "ncorr/state_model.hpp"
#include "ncorr/moments.hpp"
#include "ncorr/provider.hpp"
#include "ncorr/witness.hpp"
#include "ncorr/criteria.hpp"
#include "ncorr/atom_source.hpp"
