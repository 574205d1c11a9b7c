#pragma once

// Solvers, prox toolkit and problem families. The bench layer
// (ncfista/bench/*.hpp) additionally needs nlohmann/json.

#include "ncfista/adap_nc_fista.hpp"
#include "ncfista/nc_fista.hpp"
#include "ncfista/point.hpp"
#include "ncfista/problem.hpp"
#include "ncfista/problems/calibration.hpp"
#include "ncfista/problems/matrix_completion.hpp"
#include "ncfista/problems/movielens.hpp"
#include "ncfista/problems/nmf.hpp"
#include "ncfista/problems/qp_matrix.hpp"
#include "ncfista/problems/qp_vector.hpp"
#include "ncfista/problems/toy.hpp"
#include "ncfista/prox.hpp"
#include "ncfista/random.hpp"
#include "ncfista/result.hpp"
