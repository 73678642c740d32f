#pragma once

#include "specband/effective_dimension.hpp"
#include "specband/ellipsoid.hpp"
#include "specband/env.hpp"
#include "specband/errors.hpp"
#include "specband/experiment.hpp"
#include "specband/generate.hpp"
#include "specband/graph.hpp"
#include "specband/io.hpp"
#include "specband/policies.hpp"
#include "specband/random.hpp"
#include "specband/ratings.hpp"
#include "specband/spectral_basis.hpp"
#include "specband/version.hpp"
