#pragma once

// Umbrella header for the library (the CLI layer lives in rscd/cli.hpp).

#include "rscd/errors.hpp"
#include "rscd/rootsys.hpp"
#include "rscd/model.hpp"
#include "rscd/coeffs.hpp"
#include "rscd/operators.hpp"
#include "rscd/macdonald.hpp"
#include "rscd/eigenbasis.hpp"
#include "rscd/classical.hpp"
