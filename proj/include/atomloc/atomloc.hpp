#pragma once

#include "atomloc/common.hpp"
#include "atomloc/config.hpp"
#include "atomloc/distributions.hpp"
#include "atomloc/filters.hpp"
#include "atomloc/fock.hpp"
#include "atomloc/grid.hpp"
#include "atomloc/io.hpp"
#include "atomloc/mechanics.hpp"
#include "atomloc/model.hpp"
#include "atomloc/popper.hpp"
#include "atomloc/sampler.hpp"
#include "atomloc/version.hpp"
