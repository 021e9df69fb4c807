#pragma once

#include "uext/error.hpp"
#include "uext/integer.hpp"
#include "uext/int_matrix.hpp"
#include "uext/snf.hpp"
#include "uext/group.hpp"
#include "uext/constructions.hpp"
#include "uext/hom_ext.hpp"
#include "uext/universal.hpp"
#include "uext/expr_parser.hpp"
#include "uext/torsion.hpp"
#include "uext/json_io.hpp"
