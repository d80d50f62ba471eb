#pragma once

#include "asymptotics.hpp"
#include "densities.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "minors.hpp"
#include "montecarlo.hpp"
#include "quadrature.hpp"
#include "rip.hpp"
#include "rng.hpp"
#include "special.hpp"
