#pragma once

#include "locdiff/angle.hpp"
#include "locdiff/circle_diffeo.hpp"
#include "locdiff/cocycle.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/interval.hpp"
#include "locdiff/localization.hpp"
#include "locdiff/moebius.hpp"
#include "locdiff/partition.hpp"
#include "locdiff/trig_poly.hpp"
#include "locdiff/words.hpp"
