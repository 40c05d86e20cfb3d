#pragma once

#include "adscp/ads.hpp"
#include "adscp/basis.hpp"
#include "adscp/cptest.hpp"
#include "adscp/errors.hpp"
#include "adscp/io.hpp"
#include "adscp/mpulse.hpp"
#include "adscp/rng.hpp"
#include "adscp/simlab.hpp"
#include "adscp/version.hpp"
