#pragma once

#include "jcarray/bloch.hpp"
#include "jcarray/config.hpp"
#include "jcarray/disorder.hpp"
#include "jcarray/error.hpp"
#include "jcarray/parallel.hpp"
#include "jcarray/params.hpp"
#include "jcarray/rng.hpp"
#include "jcarray/run.hpp"
#include "jcarray/site_scattering.hpp"
#include "jcarray/transfer.hpp"
#include "jcarray/version.hpp"
