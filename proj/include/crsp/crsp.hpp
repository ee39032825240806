// crsp.hpp
// Umbrella header for the whole library.

#pragma once

#include "bases.hpp"     // IWYU pragma: export
#include "channel.hpp"   // IWYU pragma: export
#include "harness.hpp"   // IWYU pragma: export
#include "oracle.hpp"    // IWYU pragma: export
#include "protocol.hpp"  // IWYU pragma: export
#include "qstate.hpp"    // IWYU pragma: export
#include "rng.hpp"       // IWYU pragma: export
