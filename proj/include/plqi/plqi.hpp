#pragma once

#include "plqi/rational.hpp"
#include "plqi/profile.hpp"
#include "plqi/plmap.hpp"
#include "plqi/error_bound.hpp"
#include "plqi/invariant.hpp"
#include "plqi/equivalence.hpp"
#include "plqi/constructions.hpp"
#include "plqi/order.hpp"
#include "plqi/mobius.hpp"
#include "plqi/io.hpp"
