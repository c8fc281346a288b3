#pragma once

// Umbrella header for the header-only part of the library.

#include "pairspace/central.hpp"
#include "pairspace/core.hpp"
#include "pairspace/dynamics.hpp"
#include "pairspace/kinetics.hpp"
#include "pairspace/oracle.hpp"
#include "pairspace/roots.hpp"
#include "pairspace/threebody.hpp"
#include "pairspace/types.hpp"
