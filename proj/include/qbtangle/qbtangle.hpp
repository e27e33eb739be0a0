// Umbrella header.

#pragma once

#include "qbtangle/dense.hpp"
#include "qbtangle/errors.hpp"
#include "qbtangle/model.hpp"
#include "qbtangle/optimal.hpp"
#include "qbtangle/oracle.hpp"
#include "qbtangle/propagator.hpp"
#include "qbtangle/tangle.hpp"
