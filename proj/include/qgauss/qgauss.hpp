#pragma once

#include "qgauss/catalog.hpp"
#include "qgauss/chart.hpp"
#include "qgauss/dual.hpp"
#include "qgauss/errors.hpp"
#include "qgauss/gaussmap.hpp"
#include "qgauss/linalg.hpp"
#include "qgauss/quadric.hpp"
#include "qgauss/random.hpp"
#include "qgauss/reconstruct.hpp"
#include "qgauss/sphere.hpp"
