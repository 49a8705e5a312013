#pragma once

#include "angle_solver.hpp"
#include "core.hpp"
#include "experiment.hpp"
#include "generators.hpp"
#include "gradient.hpp"
#include "jacobi.hpp"
#include "matrix_io.hpp"
#include "rotations.hpp"
#include "structure.hpp"
