// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drc/analytic.hpp"
#include "drc/code_spec.hpp"
#include "drc/drc_codes.hpp"
#include "drc/errors.hpp"
#include "drc/geometry.hpp"
#include "drc/gf256.hpp"
#include "drc/layout.hpp"
#include "drc/matrix.hpp"
#include "drc/reliability.hpp"
#include "drc/repair.hpp"
#include "drc/rs_codec.hpp"
#include "drc/sim.hpp"
#include "drc/stripe_io.hpp"
#include "drc/traffic.hpp"
#include "drc/units.hpp"
#include "drc/validate.hpp"
