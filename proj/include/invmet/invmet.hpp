#pragma once

// Umbrella header for the invariant-metrics toolkit.

#include "invmet/certificates.hpp"
#include "invmet/complex_vec.hpp"
#include "invmet/disks.hpp"
#include "invmet/domains.hpp"
#include "invmet/errors.hpp"
#include "invmet/geometry.hpp"
#include "invmet/harness.hpp"
#include "invmet/json_io.hpp"
#include "invmet/ktilde.hpp"
#include "invmet/metrics.hpp"
#include "invmet/pattern_search.hpp"
#include "invmet/rng.hpp"
#include "invmet/simplex_lp.hpp"
