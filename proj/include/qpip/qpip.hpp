// qpip.hpp — umbrella header for the whole library.
#pragma once

#include "qpip/config.hpp"
#include "qpip/evolve.hpp"
#include "qpip/info.hpp"
#include "qpip/master.hpp"
#include "qpip/model.hpp"
#include "qpip/output.hpp"
#include "qpip/parallel.hpp"
#include "qpip/reduce.hpp"
#include "qpip/rng.hpp"
#include "qpip/run.hpp"
#include "qpip/version.hpp"
