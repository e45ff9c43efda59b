#pragma once

// Umbrella header.

#include "levyou/car1_simulator.hpp"
#include "levyou/data_pipeline.hpp"
#include "levyou/distribution_tests.hpp"
#include "levyou/errors.hpp"
#include "levyou/estimators.hpp"
#include "levyou/increment_recovery.hpp"
#include "levyou/io.hpp"
#include "levyou/levy_generators.hpp"
#include "levyou/montecarlo.hpp"
#include "levyou/rng.hpp"
#include "levyou/special_functions.hpp"
#include "levyou/verification.hpp"
#include "levyou/whiteness_test.hpp"
