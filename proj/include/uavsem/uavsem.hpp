#pragma once

// Umbrella header for the uavsem link-level simulator library.

#include "uavsem/channel.hpp"
#include "uavsem/codec.hpp"
#include "uavsem/config.hpp"
#include "uavsem/dct.hpp"
#include "uavsem/geometry.hpp"
#include "uavsem/harness.hpp"
#include "uavsem/image.hpp"
#include "uavsem/metrics.hpp"
#include "uavsem/phy.hpp"
#include "uavsem/predictor.hpp"
#include "uavsem/report.hpp"
#include "uavsem/rng.hpp"
#include "uavsem/scheduler.hpp"
#include "uavsem/synthimg.hpp"
