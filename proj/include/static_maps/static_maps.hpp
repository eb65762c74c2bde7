#pragma once

#include "static_maps/errors.hpp"
#include "static_maps/hash_core.hpp"
#include "static_maps/prng.hpp"
#include "static_maps/sizing.hpp"
#include "static_maps/ragged_array.hpp"
#include "static_maps/construction.hpp"
#include "static_maps/maps.hpp"
#include "static_maps/ordered_map.hpp"
#include "static_maps/factory.hpp"
#include "static_maps/keyset.hpp"
#include "static_maps/table_dump.hpp"
