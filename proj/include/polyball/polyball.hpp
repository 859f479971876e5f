#pragma once

#include "polyball/core.hpp"
#include "polyball/detrep.hpp"
#include "polyball/eval.hpp"
#include "polyball/inversion.hpp"
#include "polyball/json_io.hpp"
#include "polyball/linalg.hpp"
#include "polyball/multipoly.hpp"
#include "polyball/pipeline.hpp"
#include "polyball/random.hpp"
#include "polyball/structure.hpp"
