#pragma once

#include "qhi/cli.hpp"
#include "qhi/csv.hpp"
#include "qhi/dyson.hpp"
#include "qhi/eigensolver.hpp"
#include "qhi/error.hpp"
#include "qhi/evolution.hpp"
#include "qhi/exceptional.hpp"
#include "qhi/grid.hpp"
#include "qhi/lattice.hpp"
#include "qhi/matrix.hpp"
#include "qhi/metric.hpp"
#include "qhi/parallel.hpp"
#include "qhi/spectral.hpp"
