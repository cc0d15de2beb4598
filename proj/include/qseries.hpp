// Umbrella header for the qseries library.
#pragma once

#include "qseries/types.hpp"
#include "qseries/polynomial.hpp"
#include "qseries/series.hpp"
#include "qseries/qfuncs.hpp"
#include "qseries/format.hpp"
#include "qseries/bailey.hpp"
#include "qseries/configsum.hpp"
#include "qseries/stringfn.hpp"
#include "qseries/catalog.hpp"
#include "qseries/identities.hpp"
