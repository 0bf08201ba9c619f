#pragma once

// Everything except the JSON views (nbspec/json.hpp), which need nlohmann/json.

#include "bounds.hpp"
#include "config.hpp"
#include "ensemble.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "nb_matrix.hpp"
#include "oracle.hpp"
#include "perturb.hpp"
#include "rng.hpp"
#include "spectra.hpp"
