#pragma once

// Umbrella header: the whole library.

#include <coalgmin/cli.hpp>
#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>
#include <coalgmin/json_io.hpp>
#include <coalgmin/observability.hpp>
#include <coalgmin/oracles.hpp>
#include <coalgmin/pipeline.hpp>
#include <coalgmin/rational.hpp>
#include <coalgmin/reachability.hpp>
#include <coalgmin/unravelling.hpp>
