#pragma once

#include "gtqa/classical.hpp"
#include "gtqa/csv.hpp"
#include "gtqa/dynamics.hpp"
#include "gtqa/eigensolver.hpp"
#include "gtqa/error.hpp"
#include "gtqa/experiments.hpp"
#include "gtqa/linalg.hpp"
#include "gtqa/noise.hpp"
#include "gtqa/oracle_model.hpp"
#include "gtqa/parallel.hpp"
#include "gtqa/pauli.hpp"
#include "gtqa/perturbation.hpp"
#include "gtqa/random.hpp"
#include "gtqa/spectral.hpp"
#include "gtqa/statistics.hpp"
