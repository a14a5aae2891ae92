#pragma once

// Umbrella header.

#include "sphase/rational.hpp"
#include "sphase/error.hpp"
#include "sphase/puiseux.hpp"
#include "sphase/series.hpp"
#include "sphase/legendre.hpp"
#include "sphase/stokes.hpp"
#include "sphase/fourier.hpp"
#include "sphase/oracle.hpp"
#include "sphase/io.hpp"
#include "sphase/json_io.hpp"
#include "sphase/diagram.hpp"
