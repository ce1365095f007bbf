#pragma once

#include "dtvar/bounds.hpp"
#include "dtvar/camera.hpp"
#include "dtvar/constancy.hpp"
#include "dtvar/contour.hpp"
#include "dtvar/distance.hpp"
#include "dtvar/encoding.hpp"
#include "dtvar/error.hpp"
#include "dtvar/gradcheck.hpp"
#include "dtvar/grid.hpp"
#include "dtvar/image_io.hpp"
#include "dtvar/level_sets.hpp"
#include "dtvar/loss.hpp"
#include "dtvar/postprocess.hpp"
#include "dtvar/random.hpp"
#include "dtvar/reproject.hpp"
#include "dtvar/shapes.hpp"
#include "dtvar/translation.hpp"
#include "dtvar/variance.hpp"
