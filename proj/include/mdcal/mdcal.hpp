#pragma once

#include "normal.hpp"
#include "roots.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "model.hpp"
#include "priors.hpp"
#include "evidence.hpp"
#include "thresholds.hpp"
#include "tails.hpp"
#include "risk.hpp"
#include "lab.hpp"
