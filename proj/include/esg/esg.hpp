#pragma once

#include "esg/errors.hpp"
#include "esg/event_set.hpp"
#include "esg/dot.hpp"
#include "esg/event_structure.hpp"
#include "esg/format.hpp"
#include "esg/games.hpp"
#include "esg/interaction.hpp"
#include "esg/isomorphism.hpp"
#include "esg/map.hpp"
#include "esg/rigid_image.hpp"
#include "esg/strategy.hpp"
#include "esg/testing.hpp"
