#pragma once

#include "dendro/error.hpp"
#include "dendro/tree.hpp"
#include "dendro/omega.hpp"
#include "dendro/skeleton.hpp"
#include "dendro/sset.hpp"
#include "dendro/operad.hpp"
#include "dendro/dset.hpp"
#include "dendro/tensor.hpp"
#include "dendro/wstraight.hpp"
#include "dendro/fibcheck.hpp"
#include "dendro/expr.hpp"
