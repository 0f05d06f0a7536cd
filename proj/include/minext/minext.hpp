#pragma once

#include "minext/errors.hpp"
#include "minext/signal.hpp"
#include "minext/fourier.hpp"
#include "minext/dense.hpp"
#include "minext/random.hpp"
#include "minext/trials.hpp"
#include "minext/solver.hpp"
#include "minext/oracles.hpp"
#include "minext/certificates.hpp"
#include "minext/uncertainty.hpp"
#include "minext/lacunary.hpp"
#include "minext/experiments.hpp"
#include "minext/report.hpp"
