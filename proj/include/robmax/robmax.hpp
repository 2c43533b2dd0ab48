#pragma once

#include "robmax/bootstrap.hpp"
#include "robmax/core.hpp"
#include "robmax/datagen.hpp"
#include "robmax/functional.hpp"
#include "robmax/inference.hpp"
#include "robmax/matrix.hpp"
#include "robmax/parallel.hpp"
#include "robmax/rng.hpp"
