// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volren/fields.hpp"
#include "volren/format.hpp"
#include "volren/image.hpp"
#include "volren/medium.hpp"
#include "volren/medium_io.hpp"
#include "volren/quadrature.hpp"
#include "volren/renderer.hpp"
#include "volren/rng.hpp"
#include "volren/scenes.hpp"
#include "volren/stochastic.hpp"
#include "volren/transmittance.hpp"
#include "volren/types.hpp"
