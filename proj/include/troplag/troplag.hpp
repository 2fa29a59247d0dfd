#pragma once

#include "troplag/error.hpp"
#include "troplag/lattice.hpp"
#include "troplag/curve.hpp"
#include "troplag/domain.hpp"
#include "troplag/multiplicity.hpp"
#include "troplag/topology.hpp"
#include "troplag/io.hpp"
