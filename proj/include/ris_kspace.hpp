#pragma once

#include "ris_kspace/core.hpp"
#include "ris_kspace/grid.hpp"
#include "ris_kspace/parallel.hpp"
#include "ris_kspace/fft.hpp"
#include "ris_kspace/erf.hpp"
#include "ris_kspace/io.hpp"
#include "ris_kspace/beams.hpp"
#include "ris_kspace/ris.hpp"
#include "ris_kspace/propagation.hpp"
#include "ris_kspace/farfield.hpp"
#include "ris_kspace/unitcell.hpp"
#include "ris_kspace/optimize.hpp"
#include "ris_kspace/scenario.hpp"
#include "ris_kspace/runner.hpp"
