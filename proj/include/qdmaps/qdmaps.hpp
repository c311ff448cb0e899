#pragma once

#include "qdmaps/channel_spec.hpp"
#include "qdmaps/channels.hpp"
#include "qdmaps/errors.hpp"
#include "qdmaps/maps.hpp"
#include "qdmaps/matrix.hpp"
#include "qdmaps/measures.hpp"
#include "qdmaps/quadrature.hpp"
