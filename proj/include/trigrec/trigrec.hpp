#pragma once

// Umbrella header for the library (the CLI lives in trigrec/cli.hpp).

#include "trigrec/classes.hpp"
#include "trigrec/error.hpp"
#include "trigrec/experiments.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/fooling.hpp"
#include "trigrec/identities.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/laws.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/random.hpp"
#include "trigrec/rational.hpp"
#include "trigrec/report.hpp"
#include "trigrec/sparse.hpp"
#include "trigrec/trigpoly.hpp"
#include "trigrec/version.hpp"
