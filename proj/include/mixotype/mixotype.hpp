#pragma once

#include "mixotype/charflow.hpp"
#include "mixotype/error.hpp"
#include "mixotype/evolve.hpp"
#include "mixotype/expr.hpp"
#include "mixotype/hamiltonian.hpp"
#include "mixotype/jordan.hpp"
#include "mixotype/model_file.hpp"
#include "mixotype/models.hpp"
#include "mixotype/svg.hpp"
#include "mixotype/syscore.hpp"
#include "mixotype/types.hpp"
