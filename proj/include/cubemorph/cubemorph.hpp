#pragma once

#include "boolean_function.hpp"
#include "btk.hpp"
#include "chain_mappings.hpp"
#include "gf2.hpp"
#include "mapping.hpp"
#include "parallel.hpp"
#include "point.hpp"
#include "random_matching.hpp"
#include "report_io.hpp"
#include "rng.hpp"
#include "stretch.hpp"
#include "verify.hpp"
