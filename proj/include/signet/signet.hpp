#pragma once

#include "signet/balance.hpp"
#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/generators.hpp"
#include "signet/io.hpp"
#include "signet/linalg.hpp"
#include "signet/matrix.hpp"
#include "signet/random.hpp"
#include "signet/sgraph.hpp"
#include "signet/stability.hpp"
#include "signet/tolerances.hpp"
