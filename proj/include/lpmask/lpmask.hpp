#pragma once

// Umbrella header for the exact-rational LP masking toolkit.

#include "lpmask/audit.hpp"
#include "lpmask/enumerate.hpp"
#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"
#include "lpmask/masking.hpp"
#include "lpmask/model.hpp"
#include "lpmask/rational.hpp"
#include "lpmask/rng.hpp"
#include "lpmask/serialize.hpp"
#include "lpmask/simplex.hpp"
