#pragma once

// Umbrella header.

#include "psdsketch/archive.hpp"
#include "psdsketch/comm.hpp"
#include "psdsketch/compress.hpp"
#include "psdsketch/hermitian.hpp"
#include "psdsketch/lower_bound.hpp"
#include "psdsketch/model.hpp"
#include "psdsketch/projection.hpp"
#include "psdsketch/random_instances.hpp"
#include "psdsketch/rng.hpp"
#include "psdsketch/sweep.hpp"
#include "psdsketch/tail.hpp"
