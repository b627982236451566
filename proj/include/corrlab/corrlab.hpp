// Umbrella header.
#pragma once

#include "corrlab/behavior.hpp"
#include "corrlab/classifier.hpp"
#include "corrlab/hv.hpp"
#include "corrlab/io.hpp"
#include "corrlab/matrix.hpp"
#include "corrlab/qm.hpp"
#include "corrlab/rng.hpp"
#include "corrlab/simplex.hpp"
