#pragma once

// Umbrella header for the local-hidden-variable verification toolkit.

#include "lhv/cartan.hpp"
#include "lhv/checks.hpp"
#include "lhv/curve.hpp"
#include "lhv/estimate.hpp"
#include "lhv/hermitian.hpp"
#include "lhv/matrix_io.hpp"
#include "lhv/models.hpp"
#include "lhv/operator_basis.hpp"
#include "lhv/report_io.hpp"
#include "lhv/rng.hpp"
#include "lhv/schmidt.hpp"
#include "lhv/state.hpp"
#include "lhv/theorem.hpp"
