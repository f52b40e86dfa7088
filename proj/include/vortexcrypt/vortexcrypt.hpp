#pragma once

#include "vortexcrypt/dataset_io.hpp"
#include "vortexcrypt/digest.hpp"
#include "vortexcrypt/grid.hpp"
#include "vortexcrypt/image.hpp"
#include "vortexcrypt/info_model.hpp"
#include "vortexcrypt/parallel.hpp"
#include "vortexcrypt/pixel_map.hpp"
#include "vortexcrypt/prng.hpp"
#include "vortexcrypt/sweep.hpp"
#include "vortexcrypt/vortex.hpp"
