#ifndef INFOLOSS_INFOLOSS_HPP
#define INFOLOSS_INFOLOSS_HPP

#include "infoloss/dimension.hpp"
#include "infoloss/entropy.hpp"
#include "infoloss/error.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/measure.hpp"
#include "infoloss/quantizer.hpp"
#include "infoloss/reconstruct.hpp"
#include "infoloss/rng.hpp"
#include "infoloss/systems.hpp"
#include "infoloss/version.hpp"

#endif  // INFOLOSS_INFOLOSS_HPP
