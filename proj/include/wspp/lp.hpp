#pragma once

#include "wspp/lp/linear_program.hpp"
#include "wspp/lp/simplex.hpp"
