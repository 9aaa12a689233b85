#pragma once

#include "confgeo/linalg.hpp"
#include "confgeo/dual.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/chart.hpp"
#include "confgeo/scalar_field.hpp"
#include "confgeo/tensors.hpp"
#include "confgeo/registry.hpp"
#include "confgeo/curve.hpp"
#include "confgeo/conformal_geodesic.hpp"
#include "confgeo/fefferman.hpp"
#include "confgeo/frame_bundle.hpp"
