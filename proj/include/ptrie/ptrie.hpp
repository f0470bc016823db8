// ptrie.hpp
// Umbrella header.

#pragma once

#include "ptrie/positive.hpp"
#include "ptrie/stats.hpp"
#include "ptrie/oracle.hpp"
#include "ptrie/original.hpp"
#include "ptrie/node01.hpp"
#include "ptrie/canonical.hpp"
#include "ptrie/mapkit.hpp"
#include "ptrie/string_dict.hpp"
#include "ptrie/diffset.hpp"
#include "ptrie/bench.hpp"
