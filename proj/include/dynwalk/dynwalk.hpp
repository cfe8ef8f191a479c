// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dynwalk/dirichlet.hpp"
#include "dynwalk/enumerate.hpp"
#include "dynwalk/errors.hpp"
#include "dynwalk/estimators.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/lattice.hpp"
#include "dynwalk/rng.hpp"
#include "dynwalk/schedule.hpp"
#include "dynwalk/serialize.hpp"
#include "dynwalk/stats.hpp"
#include "dynwalk/sweep.hpp"
#include "dynwalk/timeline.hpp"
#include "dynwalk/version.hpp"
#include "dynwalk/walk.hpp"
